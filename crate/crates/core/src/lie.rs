//! Graded free Lie algebras on weighted alphabets, and the closed-surface
//! quotient by the relator ideal.
//!
//! Basis elements are weighted Lyndon words with their standard bracketing,
//! stored through their expansion in the tensor envelope: equality and all
//! kernel/image computations reduce to exact integer linear algebra. The
//! coordinate solve exploits the classical triangularity of Lyndon
//! expansions (the bracketing of a Lyndon word is the word itself plus
//! lexicographically larger rearrangements), so membership in the integral
//! span is decided by elimination on the least monomial.

use crate::alphabet::{Mono, WeightedAlphabet, MAX_MONO_LEN};
use crate::error::{Error, Result};
use crate::intmat::{ColHnf, IntMat, QuotientLattice};
use crate::surface::SurfacePresentation;
use crate::tensor::TensorPoly;
use crate::word::Word;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

// ---------------------------------------------------------------------------
// Witt ranks
// ---------------------------------------------------------------------------

fn moebius(n: u32) -> i64 {
    let mut n = n;
    let mut mu = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Ranks `r_1..r_max` of the free Lie algebra on the weighted alphabet,
/// determined by `prod_k (1 - t^k)^{r_k} = 1 - sum_w n_w t^w`. Index 0 of
/// the returned vector is unused (zero).
pub fn witt_ranks(alphabet: &WeightedAlphabet, max: u32) -> Vec<u64> {
    let counts = alphabet.letter_counts_by_weight();
    let u = |w: u32| -> i128 {
        if w >= 1 && (w as usize) <= counts.len() {
            counts[w as usize - 1] as i128
        } else {
            0
        }
    };
    // generalized Newton identity: s_m = m*u_m + sum_{w<m} u_w s_{m-w}
    let mut s = vec![0i128; max as usize + 1];
    for m in 1..=max {
        let mut acc = m as i128 * u(m);
        for w in 1..m {
            acc += u(w) * s[(m - w) as usize];
        }
        s[m as usize] = acc;
    }
    let mut r = vec![0u64; max as usize + 1];
    for m in 1..=max {
        let mut acc = 0i128;
        for d in 1..=m {
            if m % d == 0 {
                acc += moebius(m / d) as i128 * s[d as usize];
            }
        }
        debug_assert!(acc >= 0 && acc % m as i128 == 0, "Witt recursion must divide exactly");
        r[m as usize] = (acc / m as i128) as u64;
    }
    r
}

// ---------------------------------------------------------------------------
// Lyndon words
// ---------------------------------------------------------------------------

/// True when `w` is strictly smaller than all of its proper rotations.
pub fn is_lyndon(w: &[u8]) -> bool {
    if w.is_empty() {
        return false;
    }
    let n = w.len();
    for k in 1..n {
        let rot: Vec<u8> = w[k..].iter().chain(w[..k].iter()).copied().collect();
        if rot <= w.to_vec() {
            return false;
        }
    }
    true
}

fn enumerate_words(
    alphabet: &WeightedAlphabet,
    target: u32,
    prefix: &mut Vec<u8>,
    weight: u32,
    out: &mut Vec<Mono>,
) {
    if weight == target {
        if is_lyndon(prefix) {
            out.push(Mono::from_slice(prefix));
        }
        return;
    }
    for l in 0..alphabet.len() as u8 {
        let w = alphabet.weight(l);
        if weight + w <= target && prefix.len() < MAX_MONO_LEN {
            prefix.push(l);
            enumerate_words(alphabet, target, prefix, weight + w, out);
            prefix.pop();
        }
    }
}

/// All weighted Lyndon words of total weight `m`, sorted in the monomial
/// order (length, then lexicographic).
pub fn lyndon_words(alphabet: &WeightedAlphabet, m: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    enumerate_words(alphabet, m, &mut prefix, 0, &mut out);
    out.sort();
    out
}

/// Standard (Chen-Fox-Lyndon) factorization of a Lyndon word of length >= 2:
/// the right factor is the lexicographically least proper suffix.
pub fn standard_factorization(w: &[u8]) -> (Vec<u8>, Vec<u8>) {
    debug_assert!(w.len() >= 2);
    let mut best = 1;
    for k in 2..w.len() {
        if w[k..] < w[best..] {
            best = k;
        }
    }
    (w[..best].to_vec(), w[best..].to_vec())
}

/// Render the standard bracketing, e.g. `[a,[a,b]]`.
pub fn bracketing_string(alphabet: &WeightedAlphabet, w: &[u8]) -> String {
    if w.len() == 1 {
        return alphabet.name(w[0]).to_string();
    }
    let (u, v) = standard_factorization(w);
    format!("[{},{}]", bracketing_string(alphabet, &u), bracketing_string(alphabet, &v))
}

// ---------------------------------------------------------------------------
// Free Lie algebra with per-degree caches
// ---------------------------------------------------------------------------

pub struct DegreeBasis {
    pub degree: u32,
    pub words: Vec<Mono>,
    pub index: HashMap<Mono, usize>,
    pub expansions: Vec<TensorPoly>,
}

impl DegreeBasis {
    pub fn rank(&self) -> usize {
        self.words.len()
    }
}

struct FreeLieInner {
    alphabet: Arc<WeightedAlphabet>,
    bases: Mutex<HashMap<u32, Arc<DegreeBasis>>>,
}

/// The free Lie algebra on a weighted alphabet. Cheap to clone; degree
/// caches are shared and write-once.
#[derive(Clone)]
pub struct FreeLieAlgebra {
    inner: Arc<FreeLieInner>,
}

impl PartialEq for FreeLieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.alphabet() == other.alphabet()
    }
}

impl FreeLieAlgebra {
    pub fn new(alphabet: Arc<WeightedAlphabet>) -> Self {
        FreeLieAlgebra {
            inner: Arc::new(FreeLieInner { alphabet, bases: Mutex::new(HashMap::new()) }),
        }
    }

    pub fn alphabet(&self) -> &Arc<WeightedAlphabet> {
        &self.inner.alphabet
    }

    pub fn witt_rank(&self, m: u32) -> u64 {
        if m == 0 {
            return 0;
        }
        witt_ranks(&self.inner.alphabet, m)[m as usize]
    }

    /// The degree-`m` basis with cached tensor expansions.
    pub fn basis(&self, m: u32) -> Arc<DegreeBasis> {
        assert!(m >= 1, "degrees start at 1");
        if let Some(b) = self.inner.bases.lock().unwrap().get(&m) {
            return b.clone();
        }
        let words = lyndon_words(&self.inner.alphabet, m);
        let mut expansions = Vec::with_capacity(words.len());
        for &w in &words {
            expansions.push(self.expand_bracketing(&w.to_vec(), m));
        }
        let index = words.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let basis = Arc::new(DegreeBasis { degree: m, words, index, expansions });
        self.inner
            .bases
            .lock()
            .unwrap()
            .entry(m)
            .or_insert_with(|| basis.clone())
            .clone()
    }

    fn expand_bracketing(&self, w: &[u8], trunc: u32) -> TensorPoly {
        if w.len() == 1 {
            return TensorPoly::generator(self.inner.alphabet.clone(), w[0], trunc);
        }
        let (u, v) = standard_factorization(w);
        let pu = self.expand_bracketing(&u, trunc);
        let pv = self.expand_bracketing(&v, trunc);
        pu.bracket(&pv)
    }

    /// Coordinates of a homogeneous degree-`m` polynomial over the Lyndon
    /// basis; [`Error::NotInLattice`] when the element is not an integral
    /// combination of basis expansions (in particular when not primitive).
    pub fn coordinates(&self, m: u32, p: &TensorPoly) -> Result<Vec<BigInt>> {
        assert!(p.is_homogeneous_of(m), "coordinates need a homogeneous element");
        let basis = self.basis(m);
        let mut coords = vec![BigInt::zero(); basis.rank()];
        let mut residual: BTreeMap<Mono, BigInt> =
            p.terms().map(|(mono, c)| (mono, c.clone())).collect();
        while let Some((&mono, coeff)) = residual.iter().next() {
            let coeff = coeff.clone();
            let Some(&idx) = basis.index.get(&mono) else {
                return Err(Error::NotInLattice(self.inner.alphabet.mono_string(mono)));
            };
            coords[idx] = coeff.clone();
            for (m2, c2) in basis.expansions[idx].terms() {
                let entry = residual.entry(m2).or_insert_with(BigInt::zero);
                *entry -= &coeff * c2;
                if entry.is_zero() {
                    residual.remove(&m2);
                }
            }
        }
        Ok(coords)
    }

    /// The element with the given Lyndon-basis coordinates in degree `m`.
    pub fn element_from_coords(&self, m: u32, coords: &[BigInt]) -> LieElement {
        let basis = self.basis(m);
        assert_eq!(coords.len(), basis.rank());
        let mut p = TensorPoly::zero(self.inner.alphabet.clone(), m);
        for (i, c) in coords.iter().enumerate() {
            p.scaled_add_assign(c, &basis.expansions[i]);
        }
        LieElement::from_component(self.clone(), m, p)
    }

    pub fn generator(&self, letter: u8) -> LieElement {
        let w = self.inner.alphabet.weight(letter);
        let p = TensorPoly::generator(self.inner.alphabet.clone(), letter, w);
        LieElement::from_component(self.clone(), w, p)
    }

    pub fn zero(&self) -> LieElement {
        LieElement { algebra: self.clone(), components: BTreeMap::new() }
    }

    /// Group word realizing a Lyndon basis word: the standard bracketing
    /// read as iterated group commutators (`[u,v] = u^-1 v^-1 u v`). Its
    /// Magnus leading term is the basis expansion.
    pub fn realize_lyndon(&self, w: &[u8]) -> Word {
        if w.len() == 1 {
            return Word::generator(w[0] as u16);
        }
        let (u, v) = standard_factorization(w);
        self.realize_lyndon(&u).commutator(&self.realize_lyndon(&v))
    }

    /// Group word with Magnus leading term equal to the degree-`m` element
    /// with the given coordinates (product of powers of bracket words).
    pub fn realize_coords(&self, m: u32, coords: &[BigInt]) -> Word {
        let basis = self.basis(m);
        let mut out = Word::identity();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = i64::try_from(c.clone()).expect("realization exponent fits i64");
            out = out.mul(&self.realize_lyndon(&basis.words[i].to_vec()).pow(e));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Lie elements
// ---------------------------------------------------------------------------

/// An element of the free Lie algebra, stored degreewise through its tensor
/// expansion. Every stored component must lie in the integral Lyndon span;
/// this is checked where elements enter from outside (coordinates solve).
#[derive(Clone)]
pub struct LieElement {
    algebra: FreeLieAlgebra,
    components: BTreeMap<u32, TensorPoly>,
}

impl PartialEq for LieElement {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}
impl Eq for LieElement {}

impl std::fmt::Debug for LieElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.components.iter().map(|(d, p)| format!("deg {d}: {}", p.display())).collect();
        write!(f, "{}", parts.join(" ; "))
    }
}

impl LieElement {
    pub fn from_component(algebra: FreeLieAlgebra, degree: u32, p: TensorPoly) -> Self {
        let mut components = BTreeMap::new();
        if !p.is_zero() {
            debug_assert!(p.is_homogeneous_of(degree));
            components.insert(degree, p);
        }
        LieElement { algebra, components }
    }

    pub fn algebra(&self) -> &FreeLieAlgebra {
        &self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Degree when homogeneous (single component).
    pub fn degree(&self) -> Option<u32> {
        if self.components.len() == 1 {
            self.components.keys().next().copied()
        } else {
            None
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.components.keys().copied()
    }

    pub fn component(&self, d: u32) -> Option<&TensorPoly> {
        self.components.get(&d)
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (&d, p) in &other.components {
            match out.components.get_mut(&d) {
                Some(q) => {
                    let r = q.retruncated(d).add(&p.retruncated(d));
                    if r.is_zero() {
                        out.components.remove(&d);
                    } else {
                        *q = r;
                    }
                }
                None => {
                    out.components.insert(d, p.clone());
                }
            }
        }
        out
    }

    pub fn neg(&self) -> LieElement {
        let mut out = self.clone();
        for p in out.components.values_mut() {
            *p = p.neg();
        }
        out
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> LieElement {
        if c.is_zero() {
            return self.algebra.zero();
        }
        let mut out = self.clone();
        for p in out.components.values_mut() {
            *p = p.scale(c);
        }
        out
    }

    /// Componentwise `uv - vu` in the tensor envelope.
    pub fn bracket(&self, other: &LieElement) -> LieElement {
        assert!(self.algebra == other.algebra, "mixed parent algebras");
        let mut out: BTreeMap<u32, TensorPoly> = BTreeMap::new();
        for (&d1, p1) in &self.components {
            for (&d2, p2) in &other.components {
                let d = d1 + d2;
                assert!(
                    d as usize <= MAX_MONO_LEN,
                    "bracket degree {d} exceeds the supported truncation"
                );
                let b = p1.retruncated(d).bracket(&p2.retruncated(d));
                if b.is_zero() {
                    continue;
                }
                match out.get_mut(&d) {
                    Some(q) => {
                        let r = q.add(&b);
                        if r.is_zero() {
                            out.remove(&d);
                        } else {
                            *q = r;
                        }
                    }
                    None => {
                        out.insert(d, b);
                    }
                }
            }
        }
        LieElement { algebra: self.algebra.clone(), components: out }
    }

    /// Coordinates of the degree-`m` component over the Lyndon basis.
    pub fn coordinates(&self, m: u32) -> Result<Vec<BigInt>> {
        match self.components.get(&m) {
            Some(p) => self.algebra.coordinates(m, p),
            None => Ok(vec![BigInt::zero(); self.algebra.basis(m).rank()]),
        }
    }
}

// ---------------------------------------------------------------------------
// Surface algebras (free case and closed quotient)
// ---------------------------------------------------------------------------

/// Ideal data for one degree of a closed-surface algebra.
pub struct ClosedDegree {
    pub degree: u32,
    /// Quotient of the Lyndon coordinate lattice by the relator ideal.
    pub quotient: QuotientLattice,
    /// Generators of the ideal component (columns, Lyndon coordinates).
    gen_matrix: IntMat,
    gen_hnf: ColHnf,
    /// Group words realizing each ideal generator (Magnus leading term =
    /// the generator's coordinate column).
    gen_words: Vec<Word>,
    /// Group words realizing the Hermite lattice basis columns.
    lattice_words: Vec<Word>,
}

impl ClosedDegree {
    pub fn quotient_rank(&self) -> usize {
        self.quotient.quotient_rank()
    }

    /// Express an ideal element (Lyndon coordinates) as an integer
    /// combination of the ideal generators; `None` when not in the lattice.
    pub fn solve_in_ideal(&self, coords: &[BigInt]) -> Option<Vec<BigInt>> {
        self.gen_hnf.solve(coords)
    }

    pub fn gen_word(&self, i: usize) -> &Word {
        &self.gen_words[i]
    }

    pub fn lattice_words(&self) -> &[Word] {
        &self.lattice_words
    }
}

/// The graded Lie algebra of a surface group: free on the weighted alphabet
/// for `n >= 1`, the quotient by the ideal generated by
/// `omega = sum [a_i, b_i]` for closed surfaces.
pub struct SurfaceAlgebra {
    pres: Arc<SurfacePresentation>,
    free: FreeLieAlgebra,
    closed: Option<Mutex<HashMap<u32, Arc<ClosedDegree>>>>,
}

impl SurfaceAlgebra {
    pub fn new(pres: Arc<SurfacePresentation>) -> Result<Self> {
        let alphabet = pres.alphabet()?;
        let free = FreeLieAlgebra::new(alphabet);
        let closed = if pres.is_closed() { Some(Mutex::new(HashMap::new())) } else { None };
        Ok(SurfaceAlgebra { pres, free, closed })
    }

    pub fn presentation(&self) -> &Arc<SurfacePresentation> {
        &self.pres
    }

    pub fn free(&self) -> &FreeLieAlgebra {
        &self.free
    }

    pub fn is_closed(&self) -> bool {
        self.closed.is_some()
    }

    /// Free-case Witt rank; an error on closed algebras.
    pub fn witt_rank(&self, m: u32) -> Result<u64> {
        if self.is_closed() {
            return Err(Error::WittRankOnClosed);
        }
        Ok(self.free.witt_rank(m))
    }

    /// Rank of the degree-`m` graded piece (free rank or quotient rank).
    pub fn graded_rank(&self, m: u32) -> Result<u64> {
        if m == 0 {
            return Ok(0);
        }
        if self.is_closed() {
            Ok(self.closed_degree(m)?.quotient_rank() as u64)
        } else {
            Ok(self.free.witt_rank(m))
        }
    }

    /// The generator `abar_i`.
    pub fn abar(&self, i: usize) -> LieElement {
        self.free.generator(self.pres.a(i) as u8)
    }

    /// The generator `bbar_i`.
    pub fn bbar(&self, i: usize) -> LieElement {
        self.free.generator(self.pres.b(i) as u8)
    }

    /// `cbar_j` for `1 <= j <= n`; `cbar_n` is the derived element
    /// `-sum_i [abar_i, bbar_i] - sum_{j<n} cbar_j`.
    pub fn cbar(&self, j: usize) -> LieElement {
        let n = self.pres.punctures();
        assert!(n >= 1 && (1..=n).contains(&j));
        if j < n {
            self.free.generator(self.pres.c(j) as u8)
        } else {
            let mut out = self.omega().neg();
            for k in 1..n {
                out = out.sub(&self.free.generator(self.pres.c(k) as u8));
            }
            out
        }
    }

    /// `omega = sum_i [abar_i, bbar_i]`.
    pub fn omega(&self) -> LieElement {
        let mut out = self.free.zero();
        for i in 1..=self.pres.genus() {
            out = out.add(&self.abar(i).bracket(&self.bbar(i)));
        }
        out
    }

    /// Closed-case data for degree `m`, built recursively and cached.
    pub fn closed_degree(&self, m: u32) -> Result<Arc<ClosedDegree>> {
        let table = self.closed.as_ref().ok_or(Error::NotClosed)?;
        if let Some(d) = table.lock().unwrap().get(&m) {
            return Ok(d.clone());
        }
        let rank = self.free.basis(m).rank();
        let built = if m < 2 {
            // no ideal below degree 2
            let gen_matrix = IntMat::zeros(rank, 0);
            ClosedDegree {
                degree: m,
                quotient: QuotientLattice::new(&gen_matrix),
                gen_hnf: crate::intmat::column_hnf(&gen_matrix),
                gen_matrix,
                gen_words: Vec::new(),
                lattice_words: Vec::new(),
            }
        } else if m == 2 {
            let omega = self.omega();
            let coords = omega.coordinates(2)?;
            let gen_matrix = IntMat::from_columns(rank, &[coords]);
            let relator = self.pres.closed_relator();
            self.build_closed_degree(m, gen_matrix, vec![relator])?
        } else {
            let mut cols: Vec<Vec<BigInt>> = Vec::new();
            let mut words: Vec<Word> = Vec::new();
            for k in 1..=m - 2 {
                let lower = self.closed_degree(m - k)?;
                if lower.lattice_words.is_empty() {
                    continue;
                }
                let basis_k = self.free.basis(k);
                let hnf_cols = lower.quotient.lattice_rank();
                for bi in 0..basis_k.rank() {
                    let u = LieElement::from_component(
                        self.free.clone(),
                        k,
                        basis_k.expansions[bi].clone(),
                    );
                    let u_word = self.free.realize_lyndon(&basis_k.words[bi].to_vec());
                    for li in 0..hnf_cols {
                        let v = self.free.element_from_coords(
                            m - k,
                            &lattice_column(&lower, m - k, li, &self.free)?,
                        );
                        let bracket = u.bracket(&v);
                        let coords = bracket.coordinates(m)?;
                        if coords.iter().all(|c| c.is_zero()) {
                            continue;
                        }
                        cols.push(coords);
                        words.push(u_word.commutator(&lower.lattice_words[li]));
                    }
                }
            }
            let gen_matrix = IntMat::from_columns(rank, &cols);
            self.build_closed_degree(m, gen_matrix, words)?
        };
        let arc = Arc::new(built);
        Ok(table.lock().unwrap().entry(m).or_insert_with(|| arc.clone()).clone())
    }

    fn build_closed_degree(
        &self,
        m: u32,
        gen_matrix: IntMat,
        gen_words: Vec<Word>,
    ) -> Result<ClosedDegree> {
        let quotient = QuotientLattice::new(&gen_matrix);
        let gen_hnf = crate::intmat::column_hnf(&gen_matrix);
        // group words for the Hermite lattice basis: products of generator
        // words with the transform exponents
        let mut lattice_words = Vec::new();
        for (pi, &(_, c)) in gen_hnf.pivots.iter().enumerate() {
            let _ = pi;
            let mut w = Word::identity();
            for gi in 0..gen_words.len() {
                let c_apply = gen_hnf.u.at(gi, c);
                if !c_apply.is_zero() {
                    let e = i64::try_from(c_apply.clone())
                        .expect("lattice transform exponent fits i64");
                    w = w.mul(&gen_words[gi].pow(e));
                }
            }
            lattice_words.push(w);
        }
        if !quotient.is_quotient_free() {
            return Err(Error::QuotientTorsion { degree: m, factors: quotient.torsion() });
        }
        Ok(ClosedDegree { degree: m, quotient, gen_matrix, gen_hnf, gen_words, lattice_words })
    }

    /// Lyndon coordinates of the ideal component's lattice basis (degree m).
    pub fn ideal_component(&self, m: u32) -> Result<IntMat> {
        let d = self.closed_degree(m)?;
        let rank = self.free.basis(m).rank();
        let cols: Vec<Vec<BigInt>> = (0..d.quotient.lattice_rank())
            .map(|li| lattice_column(&d, m, li, &self.free))
            .collect::<Result<_>>()?;
        Ok(IntMat::from_columns(rank, &cols))
    }

    /// Coordinates of a homogeneous element in the degree-`m` graded piece:
    /// Lyndon coordinates for the free case, quotient coordinates for the
    /// closed case.
    pub fn graded_coordinates(&self, m: u32, el: &LieElement) -> Result<Vec<BigInt>> {
        let free_coords = el.coordinates(m)?;
        if self.is_closed() {
            let d = self.closed_degree(m)?;
            d.quotient.project(&free_coords).map_err(|e| match e {
                Error::QuotientTorsion { factors, .. } => {
                    Error::QuotientTorsion { degree: m, factors }
                }
                other => other,
            })
        } else {
            Ok(free_coords)
        }
    }

    /// Human-readable description of the degree-`m` basis.
    pub fn basis_strings(&self, m: u32) -> Result<Vec<String>> {
        let alph = self.free.alphabet();
        let basis = self.free.basis(m);
        if self.is_closed() {
            let d = self.closed_degree(m)?;
            Ok(d.quotient
                .free_rows()
                .iter()
                .map(|&r| bracketing_string(alph, &basis.words[r].to_vec()))
                .collect())
        } else {
            Ok(basis.words.iter().map(|w| bracketing_string(alph, &w.to_vec())).collect())
        }
    }
}

fn lattice_column(
    d: &ClosedDegree,
    _m: u32,
    li: usize,
    _free: &FreeLieAlgebra,
) -> Result<Vec<BigInt>> {
    // reconstruct the Hermite basis column from the generator matrix and the
    // transform column recorded in the HNF
    let (_, c) = d.gen_hnf.pivots[li];
    let mut col = vec![BigInt::zero(); d.gen_matrix.rows()];
    for gi in 0..d.gen_matrix.cols() {
        let coeff = d.gen_hnf.u.at(gi, c).clone();
        if coeff.is_zero() {
            continue;
        }
        for (r, item) in col.iter_mut().enumerate() {
            *item += &coeff * d.gen_matrix.at(r, gi);
        }
    }
    Ok(col)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnus::{filtration_depth, Depth};

    fn free2() -> FreeLieAlgebra {
        FreeLieAlgebra::new(WeightedAlphabet::uniform(2))
    }

    #[test]
    fn witt_rank_two_letters() {
        let alph = WeightedAlphabet::uniform(2);
        let r = witt_ranks(&alph, 8);
        assert_eq!(&r[1..=6], &[2, 1, 2, 3, 6, 9]);
        assert_eq!(r[7], 18);
        assert_eq!(r[8], 30);
    }

    #[test]
    fn witt_rank_weighted_alphabets() {
        // (0,3): two letters of weight 2
        let p = SurfacePresentation::new(0, 3).unwrap();
        let r = witt_ranks(&p.alphabet().unwrap(), 6);
        assert_eq!(r[2], 2);
        assert_eq!(r[3], 0);
        assert_eq!(r[4], 1);
        // (0,4): three letters of weight 2
        let p = SurfacePresentation::new(0, 4).unwrap();
        let r = witt_ranks(&p.alphabet().unwrap(), 4);
        assert_eq!(r[2], 3);
        assert_eq!(r[4], 3);
        // odd degrees vanish below the weight of any product
        assert_eq!(r[3], 0);
    }

    #[test]
    fn witt_equals_lyndon_count_small() {
        for letters in [2usize, 3, 4] {
            let alph = WeightedAlphabet::uniform(letters);
            let r = witt_ranks(&alph, 6);
            for m in 1..=6u32 {
                assert_eq!(
                    lyndon_words(&alph, m).len() as u64,
                    r[m as usize],
                    "{letters} letters, degree {m}"
                );
            }
        }
        for (g, n) in [(1usize, 1usize), (0, 3), (1, 2)] {
            let p = SurfacePresentation::new(g, n).unwrap();
            let alph = p.alphabet().unwrap();
            let r = witt_ranks(&alph, 6);
            for m in 1..=6u32 {
                assert_eq!(lyndon_words(&alph, m).len() as u64, r[m as usize], "({g},{n}) deg {m}");
            }
        }
    }

    #[test]
    fn lyndon_words_are_strictly_least_rotations() {
        let alph = WeightedAlphabet::uniform(3);
        for m in 1..=5u32 {
            for w in lyndon_words(&alph, m) {
                assert!(is_lyndon(&w.to_vec()));
            }
        }
    }

    #[test]
    fn degree_two_basis_on_two_letters() {
        let alg = free2();
        let b = alg.basis(2);
        assert_eq!(b.rank(), 1);
        assert_eq!(b.words[0].to_vec(), vec![0, 1]);
        // expansion is xy - yx
        let exp = &b.expansions[0];
        assert_eq!(exp.coefficient(Mono::from_slice(&[0, 1])), BigInt::from(1));
        assert_eq!(exp.coefficient(Mono::from_slice(&[1, 0])), BigInt::from(-1));
    }

    #[test]
    fn once_punctured_torus_degree_three() {
        let p = SurfacePresentation::new(1, 1).unwrap();
        let alg = SurfaceAlgebra::new(p).unwrap();
        let b = alg.free().basis(3);
        assert_eq!(b.rank(), 2);
        let strings = alg.basis_strings(3).unwrap();
        assert_eq!(strings, vec!["[a1,[a1,b1]]", "[[a1,b1],b1]"]);
    }

    #[test]
    fn coordinates_are_unit_vectors_on_basis_elements() {
        let alg = free2();
        for m in 1..=5u32 {
            let b = alg.basis(m);
            for i in 0..b.rank() {
                let coords = alg.coordinates(m, &b.expansions[i]).unwrap();
                for (j, c) in coords.iter().enumerate() {
                    assert_eq!(*c == BigInt::from(1), i == j);
                    assert!(c.is_zero() || i == j);
                }
            }
        }
    }

    #[test]
    fn non_primitive_is_rejected() {
        let alg = free2();
        let xy = TensorPoly::from_terms(
            alg.alphabet().clone(),
            2,
            [(Mono::from_slice(&[0, 1]), BigInt::from(1))],
        );
        match alg.coordinates(2, &xy) {
            Err(Error::NotInLattice(m)) => assert_eq!(m, "y.x"),
            other => panic!("expected NotInLattice, got {other:?}"),
        }
    }

    #[test]
    fn bracket_coordinates_match_direct_expansion() {
        // [x,[x,y]] against the degree-3 basis: unit coordinate on xxy
        let alg = free2();
        let x = alg.generator(0);
        let y = alg.generator(1);
        let el = x.bracket(&x.bracket(&y));
        let coords = el.coordinates(3).unwrap();
        let b = alg.basis(3);
        let idx = b.index[&Mono::from_slice(&[0, 0, 1])];
        assert_eq!(coords[idx], BigInt::from(1));
        assert_eq!(coords.iter().filter(|c| !c.is_zero()).count(), 1);
    }

    #[test]
    fn antisymmetry_and_jacobi() {
        let alg = free2();
        let x = alg.generator(0);
        let y = alg.generator(1);
        let u = x.bracket(&y).add(&x.scale(&BigInt::from(2)));
        let v = y.bracket(&x.bracket(&y)).sub(&y);
        let w = x.add(&y);
        assert!(u.bracket(&u).is_zero());
        assert_eq!(u.bracket(&v), v.bracket(&u).neg());
        let jac = u
            .bracket(&v.bracket(&w))
            .add(&v.bracket(&w.bracket(&u)))
            .add(&w.bracket(&u.bracket(&v)));
        assert!(jac.is_zero());
    }

    #[test]
    fn defining_identity_sums_to_zero() {
        // sum [abar_i, bbar_i] + sum cbar_j = 0 exactly, for (1,2) and (2,1)
        for (g, n) in [(1usize, 2usize), (2, 1), (0, 3)] {
            let p = SurfacePresentation::new(g, n).unwrap();
            let alg = SurfaceAlgebra::new(p).unwrap();
            let mut total = alg.omega();
            for j in 1..=n {
                total = total.add(&alg.cbar(j));
            }
            assert!(total.is_zero(), "({g},{n})");
        }
    }

    #[test]
    fn realized_words_have_the_right_leading_terms() {
        let alg = free2();
        let alph = alg.alphabet().clone();
        for m in 1..=4u32 {
            let b = alg.basis(m);
            for i in 0..b.rank() {
                let w = alg.realize_lyndon(&b.words[i].to_vec());
                match filtration_depth(&alph, &w, 6).unwrap() {
                    Depth::Finite { m: d, leading } => {
                        assert_eq!(d, m);
                        assert_eq!(leading, b.expansions[i].retruncated(6));
                    }
                    _ => panic!("bracket word must have depth {m}"),
                }
            }
        }
    }

    #[test]
    fn torus_quotient_ranks() {
        // closed genus 1: ranks 2, 0, 0, 0 (abelian)
        let p = SurfacePresentation::new(1, 0).unwrap();
        let alg = SurfaceAlgebra::new(p).unwrap();
        assert!(alg.is_closed());
        assert!(matches!(alg.witt_rank(2), Err(Error::WittRankOnClosed)));
        assert_eq!(alg.graded_rank(1).unwrap(), 2);
        for m in 2..=4 {
            assert_eq!(alg.graded_rank(m).unwrap(), 0, "degree {m}");
        }
        // ideal components: degree 2 is all of L_2, degree 3 all of L_3
        assert_eq!(alg.ideal_component(2).unwrap().cols(), 1);
        assert_eq!(alg.closed_degree(3).unwrap().quotient.lattice_rank(), 2);
    }

    #[test]
    fn genus_two_quotient_ranks_match_the_quadratic_necklace() {
        // Labute: prod (1-t^k)^{q_k} = 1 - 2g t + t^2; for g = 2 the power
        // sums are alpha^m + beta^m with alpha+beta = 4, alpha*beta = 1:
        // 4, 14, 52, 194 giving q = 4, 5, 16, 45
        let p = SurfacePresentation::new(2, 0).unwrap();
        let alg = SurfaceAlgebra::new(p).unwrap();
        assert_eq!(alg.graded_rank(1).unwrap(), 4);
        assert_eq!(alg.graded_rank(2).unwrap(), 5);
        assert_eq!(alg.graded_rank(3).unwrap(), 16);
        assert_eq!(alg.graded_rank(4).unwrap(), 45);
    }

    #[test]
    fn ideal_lattice_words_lead_correctly() {
        let p = SurfacePresentation::new(2, 0).unwrap();
        let alg = SurfaceAlgebra::new(p).unwrap();
        let alph = alg.free().alphabet().clone();
        for m in 2..=4u32 {
            let d = alg.closed_degree(m).unwrap();
            for (li, w) in d.lattice_words().iter().enumerate() {
                let col = super::lattice_column(&d, m, li, alg.free()).unwrap();
                match filtration_depth(&alph, w, m + 1).unwrap() {
                    Depth::Finite { m: depth, leading } => {
                        assert_eq!(depth, m);
                        let coords = alg.free().coordinates(m, &leading).unwrap();
                        assert_eq!(coords, col);
                    }
                    _ => panic!("lattice word at degree {m} too deep"),
                }
            }
        }
    }

    #[test]
    fn magnus_leading_terms_lie_in_the_lattice() {
        // depth-m group elements have degree-m Lyndon coordinates
        let p = SurfacePresentation::new(1, 1).unwrap();
        let alg = SurfaceAlgebra::new(p.clone()).unwrap();
        let alph = alg.free().alphabet().clone();
        let a = Word::generator(0);
        let b = Word::generator(1);
        for w in [
            a.commutator(&b),
            a.commutator(&b).commutator(&a),
            a.commutator(&b).mul(&b.commutator(&a).conjugated_by(&a)),
            a.mul(&b).commutator(&b.inverse().mul(&a)),
        ] {
            if w.is_identity() {
                continue;
            }
            if let Depth::Finite { m, leading } = filtration_depth(&alph, &w, 6).unwrap() {
                assert!(alg.free().coordinates(m, &leading).is_ok(), "{w:?}");
            }
        }
    }
}

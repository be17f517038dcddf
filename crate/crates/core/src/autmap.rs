//! Endomorphisms of surface groups given by generator images, with
//! automorphism certification.
//!
//! Surjectivity onto a free group is decided by Stallings folding; because
//! finitely generated free groups are hopfian, a surjective endomorphism is
//! an automorphism, and the folding (run with expression tags) also yields
//! the inverse map. The closed case is certified by the relator-conjugacy
//! test together with unimodularity of the abelianization.

use crate::error::{Error, Result};
use crate::intmat::{determinant, IntMat};
use crate::surface::SurfacePresentation;
use crate::word::{conjugate_to_power, Letter, Word};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::Arc;

/// An endomorphism determined by the images of the free-basis generators.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupMap {
    pres: Arc<SurfacePresentation>,
    images: Vec<Word>,
}

impl std::fmt::Debug for GroupMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "GroupMap (g={}, n={})", self.pres.genus(), self.pres.punctures())?;
        for (g, w) in self.images.iter().enumerate() {
            writeln!(f, "  {} -> {:?}", self.pres.gen_name(g as u16), w)?;
        }
        Ok(())
    }
}

impl GroupMap {
    pub fn new(pres: Arc<SurfacePresentation>, images: Vec<Word>) -> Result<Self> {
        let rank = pres.free_rank();
        if images.len() != rank {
            return Err(Error::Invalid(format!(
                "expected {rank} generator images, got {}",
                images.len()
            )));
        }
        for w in &images {
            if let Some(g) = w.max_generator() {
                if g as usize >= rank {
                    return Err(Error::GeneratorOutOfRange { kind: 'g', index: g as usize, max: rank });
                }
            }
        }
        Ok(GroupMap { pres, images })
    }

    pub fn identity(pres: Arc<SurfacePresentation>) -> Self {
        let images = (0..pres.free_rank() as u16).map(Word::generator).collect();
        GroupMap { pres, images }
    }

    /// The inner automorphism `x -> u x u^-1`.
    pub fn inner(pres: Arc<SurfacePresentation>, u: &Word) -> Self {
        let images = (0..pres.free_rank() as u16)
            .map(|g| Word::generator(g).conjugated_by(u))
            .collect();
        GroupMap { pres, images }
    }

    pub fn presentation(&self) -> &Arc<SurfacePresentation> {
        &self.pres
    }

    pub fn image(&self, gen: u16) -> &Word {
        &self.images[gen as usize]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(g, w)| w.letters() == [Letter::new(g as u16, false)])
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Word::identity();
        for l in w.letters() {
            let img = &self.images[l.gen as usize];
            out = out.mul(&if l.inv { img.inverse() } else { img.clone() });
        }
        out
    }

    /// `self . other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &GroupMap) -> Result<GroupMap> {
        if self.pres != other.pres {
            return Err(Error::PresentationMismatch(
                self.pres.genus(),
                self.pres.punctures(),
                other.pres.genus(),
                other.pres.punctures(),
            ));
        }
        let images = other.images.iter().map(|w| self.apply(w)).collect();
        Ok(GroupMap { pres: self.pres.clone(), images })
    }

    /// Abelianization on the `a_i, b_i` part only (columns/rows ordered
    /// `a_1..a_g, b_1..b_g`); images of punctured generators and occurrences
    /// of `c`-letters do not contribute.
    pub fn abelianization_matrix(&self) -> IntMat {
        let g2 = 2 * self.pres.genus();
        IntMat::from_fn(g2, g2, |i, j| {
            let mut count = BigInt::zero();
            for l in self.images[j].letters() {
                if l.gen as usize == i {
                    if l.inv {
                        count -= 1;
                    } else {
                        count += 1;
                    }
                }
            }
            count
        })
    }

    /// Abelianization over the whole free basis.
    pub fn full_abelianization_matrix(&self) -> IntMat {
        let n = self.pres.free_rank();
        IntMat::from_fn(n, n, |i, j| {
            let mut count = BigInt::zero();
            for l in self.images[j].letters() {
                if l.gen as usize == i {
                    if l.inv {
                        count -= 1;
                    } else {
                        count += 1;
                    }
                }
            }
            count
        })
    }
}

/// `+1`/`-1` when the cyclic core of `w` is a rotation of the closed relator
/// (resp. its inverse); `None` otherwise.
pub fn relator_conjugacy_class(w: &Word, pres: &SurfacePresentation) -> Option<i8> {
    let r = pres.closed_relator();
    let (core, _) = w.cyclically_reduce();
    if core.is_rotation_of(&r) {
        Some(1)
    } else if core.is_rotation_of(&r.inverse()) {
        Some(-1)
    } else {
        None
    }
}

/// The standard alternating form on `Z^{2g}` in the basis `a_1..a_g, b_1..b_g`.
pub fn standard_symplectic_form(genus: usize) -> IntMat {
    let mut j = IntMat::zeros(2 * genus, 2 * genus);
    for i in 0..genus {
        j.set(i, genus + i, BigInt::one());
        j.set(genus + i, i, -BigInt::one());
    }
    j
}

/// The multiplier `v` with `M^T J M = v J`, or [`Error::NotSimilitude`].
pub fn symplectic_class(m: &IntMat) -> Result<BigInt> {
    assert_eq!(m.rows(), m.cols());
    assert!(m.rows() % 2 == 0, "symplectic form needs even dimension");
    let g = m.rows() / 2;
    let j = standard_symplectic_form(g);
    let p = m.transpose().mul(&j).mul(m);
    let nu = p.at(0, g).clone();
    if nu.is_zero() {
        return Err(Error::NotSimilitude);
    }
    let expect = IntMat::from_fn(2 * g, 2 * g, |r, c| j.at(r, c) * &nu);
    if p == expect {
        Ok(nu)
    } else {
        Err(Error::NotSimilitude)
    }
}

// ---------------------------------------------------------------------------
// Stallings folding with expression tags
// ---------------------------------------------------------------------------

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the class of `loser` into the class of `keeper`.
    fn union_into(&mut self, keeper: usize, loser: usize) {
        let k = self.find(keeper);
        let l = self.find(loser);
        if k != l {
            self.parent[l] = k;
        }
    }
}

#[derive(Clone)]
struct TaggedEdge {
    u: usize,
    gen: u16,
    v: usize,
    /// Word over the h-symbols (indices of the image list); the invariant is
    /// eval(tag) = potential(u) * gen * potential(v)^-1 in the target group.
    tag: Word,
}

/// Result of folding the wedge of image loops.
pub enum FoldOutcome {
    /// The images generate: the folded graph is the full rose. For each
    /// generator, its expression as a word in the h-symbols.
    Rose(Vec<Word>),
    /// Proper subgroup (or a relation was found en route).
    NotRose,
}

/// Folds the wedge of loops spelling `images` over a free group of the given
/// rank. Tags track how each edge expression decomposes over the images, so
/// a successful fold yields each generator as a word in the images.
pub fn fold_images(images: &[Word], rank: usize) -> FoldOutcome {
    let mut vertex_count = 1usize; // 0 = base
    let mut edges: Vec<TaggedEdge> = Vec::new();
    for (k, w) in images.iter().enumerate() {
        if w.is_empty() {
            // an identity image can never help generate; it also cannot be
            // drawn as a loop with a tagged edge, so just skip it
            continue;
        }
        let m = w.len();
        let mut prev = 0usize;
        for (t, l) in w.letters().iter().enumerate() {
            let next = if t + 1 == m { 0 } else { vertex_count };
            if t + 1 != m {
                vertex_count += 1;
            }
            let tag = if t + 1 == m {
                if l.inv {
                    Word::generator_inv(k as u16)
                } else {
                    Word::generator(k as u16)
                }
            } else {
                Word::identity()
            };
            if !l.inv {
                edges.push(TaggedEdge { u: prev, gen: l.gen, v: next, tag });
            } else {
                edges.push(TaggedEdge { u: next, gen: l.gen, v: prev, tag });
            }
            prev = next;
        }
    }

    let mut uf = UnionFind::new(vertex_count);
    // Fold to a deterministic immersion.
    loop {
        for e in edges.iter_mut() {
            e.u = uf.find(e.u);
            e.v = uf.find(e.v);
        }
        // transition tables: (vertex, gen) -> edge index, by direction
        let mut by_source: HashMap<(usize, u16), usize> = HashMap::new();
        let mut by_target: HashMap<(usize, u16), usize> = HashMap::new();
        let mut action: Option<(usize, usize, bool)> = None; // e1, e2, source-side?
        for (i, e) in edges.iter().enumerate() {
            if let Some(&j) = by_source.get(&(e.u, e.gen)) {
                action = Some((j, i, true));
                break;
            }
            by_source.insert((e.u, e.gen), i);
            if let Some(&j) = by_target.get(&(e.v, e.gen)) {
                action = Some((j, i, false));
                break;
            }
            by_target.insert((e.v, e.gen), i);
        }
        let Some((mut i1, mut i2, source_side)) = action else { break };
        // which endpoint classes get identified
        let (mut keep, mut lose) = if source_side {
            (edges[i1].v, edges[i2].v)
        } else {
            (edges[i1].u, edges[i2].u)
        };
        if keep == lose {
            // parallel edges with the same endpoints: a genuine fold only if
            // the tags agree; otherwise the images satisfy a relation
            if edges[i1].tag == edges[i2].tag {
                edges.swap_remove(i2);
                continue;
            }
            return FoldOutcome::NotRose;
        }
        // keep the potential of the class containing the basepoint
        let base = uf.find(0);
        if lose == base {
            std::mem::swap(&mut keep, &mut lose);
            std::mem::swap(&mut i1, &mut i2);
        }
        let t1 = edges[i1].tag.clone();
        let t2 = edges[i2].tag.clone();
        // gamma evaluates to potential(keep) * potential(lose)^-1
        let gamma = if source_side { t1.inverse().mul(&t2) } else { t1.mul(&t2.inverse()) };
        for e in edges.iter_mut() {
            if e.u == lose {
                e.tag = gamma.mul(&e.tag);
            }
            if e.v == lose {
                e.tag = e.tag.mul(&gamma.inverse());
            }
        }
        uf.union_into(keep, lose);
        // edges i1, i2 now carry equal tags and merge on the next pass
    }

    // prune hanging trees (keep the basepoint)
    let base = uf.find(0);
    loop {
        let mut degree: HashMap<usize, usize> = HashMap::new();
        for e in &edges {
            *degree.entry(e.u).or_default() += 1;
            *degree.entry(e.v).or_default() += 1;
        }
        let Some(pos) = edges.iter().position(|e| {
            (e.u != base && degree[&e.u] == 1) || (e.v != base && degree[&e.v] == 1)
        }) else {
            break;
        };
        edges.swap_remove(pos);
    }

    // the full rose: every generator as a single loop at the basepoint
    if edges.len() != rank {
        return FoldOutcome::NotRose;
    }
    let mut exprs: Vec<Option<Word>> = vec![None; rank];
    for e in &edges {
        if e.u != base || e.v != base {
            return FoldOutcome::NotRose;
        }
        let slot = &mut exprs[e.gen as usize];
        if slot.is_some() {
            return FoldOutcome::NotRose;
        }
        *slot = Some(e.tag.clone());
    }
    FoldOutcome::Rose(exprs.into_iter().map(|w| w.expect("all slots filled")).collect())
}

/// True when the images generate the whole free group of the given rank.
pub fn stallings_surjective(images: &[Word], rank: usize) -> bool {
    matches!(fold_images(images, rank), FoldOutcome::Rose(_))
}

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

/// Certification report for an endomorphism.
#[derive(Clone, Debug)]
pub struct Certification {
    /// Determinant of the abelianization used in the check (full free basis
    /// in the punctured case, the `2g` block in the closed case).
    pub abelianization_det: BigInt,
    /// Closed case: `+1` if the relator maps into the conjugacy class of
    /// `R`, `-1` for `R^-1`.
    pub orientation: Option<i8>,
    /// Inverse map, when the images form a basis of the ambient free group.
    pub inverse: Option<GroupMap>,
}

/// Certifies `phi` as an automorphism.
///
/// Punctured case: Stallings folding must reach the full rose (surjectivity;
/// hopfian then gives bijectivity) and the abelianization determinant must
/// be a unit. Closed case: the relator image must be conjugate to `R^{+-1}`
/// and the `2g` abelianization block unimodular.
pub fn certify_automorphism(phi: &GroupMap) -> Result<Certification> {
    let pres = phi.presentation().clone();
    let rank = pres.free_rank();
    let fold = fold_images(phi.images(), rank);
    let inverse = match fold {
        FoldOutcome::Rose(exprs) => {
            let inv = GroupMap::new(pres.clone(), exprs)?;
            debug_assert!(phi.compose(&inv).unwrap().is_identity());
            debug_assert!(inv.compose(phi).unwrap().is_identity());
            Some(inv)
        }
        FoldOutcome::NotRose => None,
    };
    if pres.is_closed() {
        let orientation = relator_conjugacy_class(&phi.apply(&pres.closed_relator()), &pres)
            .ok_or(Error::RelatorNotPreserved)?;
        let det = determinant(&phi.abelianization_matrix());
        if !(det.clone().abs().is_one()) {
            return Err(Error::NonUnimodularAbelianization(det));
        }
        Ok(Certification { abelianization_det: det, orientation: Some(orientation), inverse })
    } else {
        if inverse.is_none() {
            return Err(Error::NotSurjective);
        }
        let det = determinant(&phi.full_abelianization_matrix());
        if !(det.clone().abs().is_one()) {
            return Err(Error::NonUnimodularAbelianization(det));
        }
        Ok(Certification { abelianization_det: det, orientation: None, inverse })
    }
}

// ---------------------------------------------------------------------------
// Braid type
// ---------------------------------------------------------------------------

/// Witness data: `phi(c_j) = conjugator * c_j^exponent * conjugator^-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWitness {
    pub conjugators: Vec<Word>,
    pub exponents: Vec<i64>,
}

/// Result of the braid-type test: either a witness per puncture, or the
/// first failing puncture index (1-based).
pub fn is_braid_type(phi: &GroupMap) -> std::result::Result<BraidWitness, usize> {
    let pres = phi.presentation();
    assert!(pres.punctures() >= 1, "braid type only concerns punctured surfaces");
    let mut conjugators = Vec::new();
    let mut exponents = Vec::new();
    for j in 1..=pres.punctures() {
        let base = pres.c_word(j);
        let image = phi.apply(&base);
        match conjugate_to_power(&image, &base) {
            Some((conj, e)) => {
                conjugators.push(conj);
                exponents.push(e);
            }
            None => return Err(j),
        }
    }
    Ok(BraidWitness { conjugators, exponents })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn once_punctured_torus() -> Arc<SurfacePresentation> {
        SurfacePresentation::new(1, 1).unwrap()
    }

    fn map_11(images: &[&[(u16, i8)]]) -> GroupMap {
        let pres = once_punctured_torus();
        GroupMap::new(
            pres,
            images.iter().map(|p| Word::from_pairs(p)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_and_composition() {
        let pres = once_punctured_torus();
        let id = GroupMap::identity(pres.clone());
        let w = Word::from_pairs(&[(0, 1), (1, -1), (0, -1)]);
        assert_eq!(id.apply(&w), w);
        // tau: a -> a, b -> ba
        let tau = map_11(&[&[(0, 1)], &[(1, 1), (0, 1)]]);
        let twice = tau.compose(&tau).unwrap();
        assert_eq!(twice.apply(&Word::generator(1)), tau.apply(&tau.apply(&Word::generator(1))));
        // homomorphism property
        let u = Word::from_pairs(&[(0, 1), (1, 1)]);
        let v = Word::from_pairs(&[(1, -1), (0, -1)]);
        assert_eq!(tau.apply(&u.mul(&v)), tau.apply(&u).mul(&tau.apply(&v)));
    }

    #[test]
    fn folding_accepts_basis_and_rejects_proper_subgroup() {
        // {a, ba} is a basis of F_2
        assert!(stallings_surjective(
            &[Word::from_pairs(&[(0, 1)]), Word::from_pairs(&[(1, 1), (0, 1)])],
            2
        ));
        // {a^2, b} generates an index-2 subgroup
        assert!(!stallings_surjective(
            &[Word::from_pairs(&[(0, 1), (0, 1)]), Word::from_pairs(&[(1, 1)])],
            2
        ));
        // {aba^-1, b} is a proper subgroup
        assert!(!stallings_surjective(
            &[
                Word::generator(1).conjugated_by(&Word::generator(0)),
                Word::from_pairs(&[(1, 1)])
            ],
            2
        ));
    }

    #[test]
    fn certify_tau_and_extract_inverse() {
        let tau = map_11(&[&[(0, 1)], &[(1, 1), (0, 1)]]);
        let cert = certify_automorphism(&tau).unwrap();
        assert!(cert.abelianization_det.clone().abs().is_one());
        let inv = cert.inverse.expect("free case always yields an inverse");
        assert!(tau.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&tau).unwrap().is_identity());
        // inverse of b -> ba is b -> b a^-1
        assert_eq!(inv.apply(&Word::generator(1)), Word::from_pairs(&[(1, 1), (0, -1)]));
    }

    #[test]
    fn doubling_endomorphism_is_rejected() {
        let sq = map_11(&[&[(0, 1), (0, 1)], &[(1, 1)]]);
        match certify_automorphism(&sq) {
            Err(Error::NotSurjective) => {}
            other => panic!("expected NotSurjective, got {other:?}"),
        }
    }

    #[test]
    fn inner_maps_are_braid_type_with_exponent_one() {
        let pres = SurfacePresentation::new(1, 2).unwrap();
        let u = Word::from_pairs(&[(0, 1), (1, -1), (2, 1)]);
        let inner = GroupMap::inner(pres, &u);
        let w = is_braid_type(&inner).unwrap();
        assert_eq!(w.exponents, vec![1, 1]);
        for (j, conj) in w.conjugators.iter().enumerate() {
            let base = inner.presentation().c_word(j + 1);
            assert_eq!(base.conjugated_by(conj), inner.apply(&base));
        }
    }

    #[test]
    fn tau_fixes_the_boundary_class() {
        // tau(c) = c for c = [a,b]^-1 on the once-punctured torus
        let tau = map_11(&[&[(0, 1)], &[(1, 1), (0, 1)]]);
        let w = is_braid_type(&tau).unwrap();
        assert_eq!(w.exponents, vec![1]);
    }

    #[test]
    fn swap_reverses_boundary_orientation() {
        // a <-> b sends c to the class of c^-1
        let swap = map_11(&[&[(1, 1)], &[(0, 1)]]);
        let w = is_braid_type(&swap).unwrap();
        assert_eq!(w.exponents, vec![-1]);
    }

    #[test]
    fn raw_endomorphism_can_fail_braid_type() {
        // c_1 -> c_1 * a on (1,2) is a valid endomorphism but not braid type
        let pres = SurfacePresentation::new(1, 2).unwrap();
        let phi = GroupMap::new(
            pres.clone(),
            vec![
                Word::generator(0),
                Word::generator(1),
                Word::generator(2).mul(&Word::generator(0)),
            ],
        )
        .unwrap();
        assert_eq!(is_braid_type(&phi), Err(1));
    }

    #[test]
    fn symplectic_multiplier() {
        assert_eq!(symplectic_class(&IntMat::identity(4)).unwrap(), BigInt::one());
        // diag(2,1,1,1) is not a similitude
        let mut d = IntMat::identity(4);
        d.set(0, 0, BigInt::from(2));
        assert!(matches!(symplectic_class(&d), Err(Error::NotSimilitude)));
        // scaling by 2 gives multiplier 4
        let two = IntMat::from_fn(4, 4, |i, j| {
            if i == j { BigInt::from(2) } else { BigInt::zero() }
        });
        assert_eq!(symplectic_class(&two).unwrap(), BigInt::from(4));
        // one flipped handle out of two is not a similitude
        let mut flip = IntMat::identity(4);
        flip.set(2, 2, BigInt::from(-1));
        assert!(matches!(symplectic_class(&flip), Err(Error::NotSimilitude)));
        // flipping both b's is the multiplier -1
        let mut flip_all = IntMat::identity(4);
        flip_all.set(2, 2, BigInt::from(-1));
        flip_all.set(3, 3, BigInt::from(-1));
        assert_eq!(symplectic_class(&flip_all).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn relator_class_on_torus() {
        let pres = SurfacePresentation::new(2, 0).unwrap();
        let r = pres.closed_relator();
        assert_eq!(relator_conjugacy_class(&r, &pres), Some(1));
        assert_eq!(relator_conjugacy_class(&r.inverse(), &pres), Some(-1));
        assert_eq!(
            relator_conjugacy_class(&r.conjugated_by(&Word::generator(0)), &pres),
            Some(1)
        );
        assert_eq!(relator_conjugacy_class(&Word::generator(0), &pres), None);
    }

    #[test]
    fn inner_certifies_closed() {
        let pres = SurfacePresentation::new(2, 0).unwrap();
        let inner = GroupMap::inner(pres.clone(), &Word::from_pairs(&[(0, 1), (3, -1)]));
        let cert = certify_automorphism(&inner).unwrap();
        assert_eq!(cert.orientation, Some(1));
        assert!(cert.inverse.is_some());
    }

    proptest::proptest! {
        #[test]
        fn compose_respects_apply(
            seed in proptest::collection::vec((0u16..3, proptest::bool::ANY), 0..8),
            img1 in proptest::collection::vec((0u16..3, proptest::bool::ANY), 1..6),
            img2 in proptest::collection::vec((0u16..3, proptest::bool::ANY), 1..6),
        ) {
            // random (not necessarily invertible) endomorphisms of (1,2)
            let pres = SurfacePresentation::new(1, 2).unwrap();
            let to_word = |v: &Vec<(u16, bool)>| {
                Word::from_letters(v.iter().map(|&(g, inv)| Letter::new(g, inv)))
            };
            let w = to_word(&seed);
            let phi = GroupMap::new(pres.clone(), vec![to_word(&img1), Word::generator(1), Word::generator(2)]).unwrap();
            let psi = GroupMap::new(pres.clone(), vec![Word::generator(0), to_word(&img2), Word::generator(2)]).unwrap();
            let lhs = phi.compose(&psi).unwrap().apply(&w);
            let rhs = phi.apply(&psi.apply(&w));
            proptest::prop_assert_eq!(lhs, rhs);
        }
    }
}

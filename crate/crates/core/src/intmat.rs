//! Dense matrices over arbitrary-precision integers, with Smith and Hermite
//! normal forms, integral kernels and solves, and modular rank as a fast
//! certificate for full-rank checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

/// Row-major dense integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows.min(12) {
            let row: Vec<String> = (0..self.cols.min(16)).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Test helper: build from rows of machine integers.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    /// Build from a list of column vectors, all of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> IntMat {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    /// Matrix product, skipping zero entries of `self` (our matrices are sparse).
    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at_mut(i, j);
                    *cur += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![BigInt::zero(); self.rows];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if !a.is_zero() && !v[k].is_zero() {
                    out[i] += a * &v[k];
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.at(src, j).clone();
            if !v.is_zero() {
                *self.at_mut(dst, j) += c * v;
            }
        }
    }

    /// col[dst] += c * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.at(i, src).clone();
            if !v.is_zero() {
                *self.at_mut(i, dst) += c * v;
            }
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = self.at(i, j).clone();
            self.set(i, j, -v);
        }
    }
}

/// Quotient with sign chosen so that `a - q*b` has absolute value at most |b|/2.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_mod_floor(b);
    if r.abs() * 2 > b.abs() {
        q += 1;
    }
    q
}

/// Determinant by the Bareiss fraction-free algorithm.
pub fn determinant(a: &IntMat) -> BigInt {
    assert_eq!(a.rows, a.cols, "determinant of a non-square matrix");
    let n = a.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m.at(k, k).is_zero() {
            let Some(i) = (k + 1..n).find(|&i| !m.at(i, k).is_zero()) else {
                return BigInt::zero();
            };
            m.swap_rows(k, i);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (m.at(k, k) * m.at(i, j) - m.at(i, k) * m.at(k, j)) / &prev;
                m.set(i, j, v);
            }
            m.set(i, k, BigInt::zero());
        }
        prev = m.at(k, k).clone();
    }
    sign * m.at(n - 1, n - 1)
}

/// Invariant factors of a matrix, in divisibility order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
}

impl Snf {
    /// Factors different from 1, i.e. the torsion of the cokernel restricted
    /// to the column span.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Smith normal form by pivoting on the entry of least absolute value.
pub fn smith_normal_form(a: &IntMat) -> Snf {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut diag: Vec<BigInt> = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: least nonzero absolute value in the trailing submatrix
        let mut pivot: Option<(usize, usize)> = None;
        let mut best: Option<BigInt> = None;
        for i in t..rows {
            for j in t..cols {
                let v = m.at(i, j);
                if v.is_zero() {
                    continue;
                }
                let av = v.abs();
                if best.as_ref().map_or(true, |b| av < *b) {
                    best = Some(av);
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap_rows(t, pi);
        m.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m.at(i, t).is_zero() {
                    continue;
                }
                let q = div_round(m.at(i, t), m.at(t, t));
                m.add_row_multiple(i, t, &(-q));
                if !m.at(i, t).is_zero() {
                    m.swap_rows(i, t);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..cols {
                if m.at(t, j).is_zero() {
                    continue;
                }
                let q = div_round(m.at(t, j), m.at(t, t));
                m.add_col_multiple(j, t, &(-q));
                if !m.at(t, j).is_zero() {
                    m.swap_cols(j, t);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot row/col are clear; enforce divisibility of the submatrix
            let p = m.at(t, t).clone();
            let mut offender = None;
            'find: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !m.at(i, j).mod_floor(&p).is_zero() {
                        offender = Some(i);
                        break 'find;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    m.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        diag.push(m.at(t, t).abs());
        t += 1;
    }
    // enforce the divisibility chain
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..diag.len() {
            for j in i + 1..diag.len() {
                if !(&diag[j] % &diag[i]).is_zero() {
                    let g = diag[i].gcd(&diag[j]);
                    let l = &diag[i] / &g * &diag[j];
                    diag[i] = g;
                    diag[j] = l;
                    changed = true;
                }
            }
        }
    }
    let rank = diag.len();
    Snf { invariant_factors: diag, rank }
}

/// Column-style Hermite normal form: `a * u = h` with `u` unimodular and `h`
/// in column echelon form (pivot rows strictly increasing, zero columns last).
pub struct ColHnf {
    pub h: IntMat,
    pub u: IntMat,
    /// (row, col) of each pivot, in echelon order.
    pub pivots: Vec<(usize, usize)>,
}

pub fn column_hnf(a: &IntMat) -> ColHnf {
    let mut h = a.clone();
    let mut u = IntMat::identity(a.cols);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next = 0usize;
    for r in 0..a.rows {
        if next == a.cols {
            break;
        }
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for j in next..a.cols {
                let v = h.at(r, j);
                if v.is_zero() {
                    continue;
                }
                let av = v.abs();
                if best.as_ref().map_or(true, |(_, b)| av < *b) {
                    best = Some((j, av));
                }
            }
            let Some((j, _)) = best else { break };
            h.swap_cols(next, j);
            u.swap_cols(next, j);
            let mut dirty = false;
            for j2 in next + 1..a.cols {
                if h.at(r, j2).is_zero() {
                    continue;
                }
                let q = -div_round(h.at(r, j2), h.at(r, next));
                h.add_col_multiple(j2, next, &q);
                u.add_col_multiple(j2, next, &q);
                if !h.at(r, j2).is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        if !h.at(r, next).is_zero() {
            if h.at(r, next).is_negative() {
                h.negate_col(next);
                u.negate_col(next);
            }
            // canonical form: reduce this row in earlier pivot columns
            let d = h.at(r, next).clone();
            for pc in 0..next {
                let v = h.at(r, pc);
                if !v.is_zero() {
                    let q = -v.div_floor(&d);
                    h.add_col_multiple(pc, next, &q);
                    u.add_col_multiple(pc, next, &q);
                }
            }
            pivots.push((r, next));
            next += 1;
        }
    }
    ColHnf { h, u, pivots }
}

impl ColHnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns of the transform corresponding to zero columns of `h`: an
    /// integral basis of the kernel of the original matrix.
    pub fn kernel(&self) -> IntMat {
        let n = self.u.cols();
        let r = self.pivots.len();
        IntMat::from_fn(self.u.rows(), n - r, |i, j| self.u.at(i, r + j).clone())
    }

    /// Solve `a * x = b` over the integers, if possible.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.h.rows());
        let mut residual = b.to_vec();
        let mut y = vec![BigInt::zero(); self.h.cols()];
        for &(r, c) in &self.pivots {
            if residual[r].is_zero() {
                continue;
            }
            let (q, rem) = residual[r].div_rem(self.h.at(r, c));
            if !rem.is_zero() {
                return None;
            }
            for i in 0..self.h.rows() {
                let v = self.h.at(i, c);
                if !v.is_zero() {
                    residual[i] -= &q * v;
                }
            }
            y[c] = q;
        }
        if residual.iter().any(|v| !v.is_zero()) {
            return None;
        }
        Some(self.u.mul_vec(&y))
    }
}

/// Integral kernel basis (columns). Saturated: a primitive vector of the
/// rational kernel is an integer combination of these columns.
pub fn kernel_basis(a: &IntMat) -> IntMat {
    column_hnf(a).kernel()
}

/// Exact rank via the Hermite normal form.
pub fn rank_exact(a: &IntMat) -> usize {
    column_hnf(a).rank()
}

const RANK_PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

/// Rank of the matrix reduced mod `p`. Always a lower bound for the rational rank.
pub fn rank_mod_p(a: &IntMat, p: u64) -> usize {
    let big_p = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = (0..a.rows)
        .map(|i| {
            (0..a.cols)
                .map(|j| {
                    let v = a.at(i, j);
                    if v.is_zero() {
                        0
                    } else {
                        v.mod_floor(&big_p).to_u64().expect("reduced value fits u64")
                    }
                })
                .collect()
        })
        .collect();
    let rows = a.rows;
    let cols = a.cols;
    let mut rank = 0usize;
    let mut col = 0usize;
    while rank < rows && col < cols {
        let Some(pi) = (rank..rows).find(|&i| m[i][col] != 0) else {
            col += 1;
            continue;
        };
        m.swap(rank, pi);
        let inv = mod_inverse(m[rank][col], p);
        {
            let prow = &mut m[rank];
            for j in col..cols {
                prow[j] = mulmod(prow[j], inv, p);
            }
        }
        let (pivot_row, rest) = {
            let (top, bottom) = m.split_at_mut(rank + 1);
            (&top[rank], bottom)
        };
        rest.par_iter_mut().for_each(|row| {
            let f = row[col];
            if f != 0 {
                let neg = p - f;
                for j in col..cols {
                    if pivot_row[j] != 0 {
                        row[j] = (row[j] + mulmod(neg, pivot_row[j], p)) % p;
                    }
                }
            }
        });
        rank += 1;
        col += 1;
    }
    rank
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat; p is prime.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// How a rank value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum RankMethod {
    /// Hermite normal form over the integers.
    Exact,
    /// Full rank established modulo a prime (a certificate: mod-p rank never
    /// exceeds the rational rank).
    ModPrimeFull,
    /// Best of several primes without reaching full rank; a lower bound only.
    ModPrimeBound,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RankInfo {
    pub rank: usize,
    pub certified: bool,
    pub method: RankMethod,
}

/// Rank with a certificate. Matrices with at most `exact_cap` entries go
/// through the exact route; larger ones are certified modulo a prime when
/// full rank is reached, and otherwise reported as a bound.
pub fn rank_info(a: &IntMat, exact_cap: usize) -> RankInfo {
    let full = a.rows().min(a.cols());
    if full == 0 {
        return RankInfo { rank: 0, certified: true, method: RankMethod::Exact };
    }
    if a.rows() * a.cols() <= exact_cap {
        return RankInfo { rank: rank_exact(a), certified: true, method: RankMethod::Exact };
    }
    let mut best = 0;
    for p in RANK_PRIMES {
        best = best.max(rank_mod_p(a, p));
        if best == full {
            return RankInfo { rank: best, certified: true, method: RankMethod::ModPrimeFull };
        }
    }
    RankInfo { rank: best, certified: false, method: RankMethod::ModPrimeBound }
}

/// A sublattice of Z^ambient given by generators, stored in Hermite form,
/// with the quotient's rank and torsion.
pub struct QuotientLattice {
    ambient: usize,
    hnf: IntMat,
    pivots: Vec<(usize, usize)>,
    invariant_factors: Vec<BigInt>,
    free_rows: Vec<usize>,
}

impl QuotientLattice {
    /// `gens`: columns generating the sublattice, `gens.rows() == ambient`.
    pub fn new(gens: &IntMat) -> Self {
        let hnf = column_hnf(gens);
        let snf = smith_normal_form(gens);
        let pivot_rows: std::collections::BTreeSet<usize> = hnf.pivots.iter().map(|&(r, _)| r).collect();
        let free_rows = (0..gens.rows()).filter(|r| !pivot_rows.contains(r)).collect();
        QuotientLattice {
            ambient: gens.rows(),
            hnf: hnf.h,
            pivots: hnf.pivots,
            invariant_factors: snf.invariant_factors,
            free_rows,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn lattice_rank(&self) -> usize {
        self.pivots.len()
    }

    /// Rank of the free part of the quotient.
    pub fn quotient_rank(&self) -> usize {
        self.ambient - self.pivots.len()
    }

    /// Invariant factors of the quotient different from 1.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn is_quotient_free(&self) -> bool {
        self.torsion().is_empty()
    }

    /// Canonical representative of `v` modulo the lattice: every pivot row is
    /// reduced into `[0, d)` for pivot value `d`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ambient);
        let mut out = v.to_vec();
        for &(r, c) in &self.pivots {
            let d = self.hnf.at(r, c);
            let q = out[r].div_floor(d);
            if q.is_zero() {
                continue;
            }
            for i in r..self.ambient {
                let h = self.hnf.at(i, c);
                if !h.is_zero() {
                    out[i] -= &q * h;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Coordinates of `v` in the free quotient (entries at non-pivot rows of
    /// the canonical representative). Requires a torsion-free quotient.
    pub fn project(&self, v: &[BigInt]) -> crate::error::Result<Vec<BigInt>> {
        if !self.is_quotient_free() {
            return Err(crate::error::Error::QuotientTorsion { degree: 0, factors: self.torsion() });
        }
        let red = self.reduce(v);
        Ok(self.free_rows.iter().map(|&r| red[r].clone()).collect())
    }

    /// Indices of ambient coordinates representing the free quotient basis.
    pub fn free_rows(&self) -> &[usize] {
        &self.free_rows
    }
}

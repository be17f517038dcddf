//! Graded pieces of the braid-type outer automorphism group.
//!
//! For a surface algebra `A` and degree `m`, the maps
//!
//! ```text
//! g_m: gr^m -> (gr^{m+1})^{2g} x (gr^m)^n,   u -> ([u,abar_i], [u,bbar_i], (u)_j)
//! f_m: (gr^{m+1})^{2g} x (gr^m)^n -> gr^{m+2},
//!      (r_i, s_i, t_j) -> sum([abar_i,s_i] + [r_i,bbar_i]) + sum [t_j,cbar_j]
//! ```
//!
//! satisfy `f_m . g_m = 0` (the defining identity plus Jacobi), `g_m` is
//! injective and `f_m` surjective over the rationals, and the graded piece
//! of the braid-type outer automorphism group is `ker f_m / im g_m`. The
//! middle space is ordered a-slots, then b-slots, then c-slots.
//!
//! Johnson-type classes of automorphisms land in this quotient: the depth
//! of a braid-type automorphism is the generator-wise minimum of
//! `depth(phi(x) x^-1) - weight(x)`, and its class vector assembles the
//! graded leading terms in the middle-space layout.

use crate::autmap::{is_braid_type, GroupMap};
use crate::error::{Error, Result};
use crate::intmat::{
    column_hnf, kernel_basis, rank_info, smith_normal_form, IntMat, RankInfo,
};
use crate::lie::{LieElement, SurfaceAlgebra};
use crate::magnus::{depth_of_expansion, magnus_expand, Depth};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

/// Entry cap under which kernels, Smith forms and torsion are computed
/// exactly; larger matrices get modular rank certificates and torsion is
/// reported as unverified rather than silently asserted absent.
pub const EXACT_CAP: usize = 250_000;

/// An integer matrix between labeled graded modules.
pub struct GradedModuleMap {
    pub matrix: IntMat,
    pub source: String,
    pub target: String,
}

/// Slot layout of the middle space `(gr^{m+1})^{2g} x (gr^m)^n`.
#[derive(Debug, Clone)]
pub struct MiddleLayout {
    pub degree: u32,
    pub ab_block: usize,
    pub c_block: usize,
    pub genus: usize,
    pub punctures: usize,
}

impl MiddleLayout {
    pub fn dim(&self) -> usize {
        2 * self.genus * self.ab_block + self.punctures * self.c_block
    }

    /// Offset of the i-th a-slot (1-based).
    pub fn a_offset(&self, i: usize) -> usize {
        (i - 1) * self.ab_block
    }

    pub fn b_offset(&self, i: usize) -> usize {
        (self.genus + i - 1) * self.ab_block
    }

    pub fn c_offset(&self, j: usize) -> usize {
        2 * self.genus * self.ab_block + (j - 1) * self.c_block
    }
}

fn graded_rank_usize(alg: &SurfaceAlgebra, d: u32) -> Result<usize> {
    Ok(alg.graded_rank(d)? as usize)
}

pub fn middle_layout(alg: &SurfaceAlgebra, m: u32) -> Result<MiddleLayout> {
    Ok(MiddleLayout {
        degree: m,
        ab_block: graded_rank_usize(alg, m + 1)?,
        c_block: graded_rank_usize(alg, m)?,
        genus: alg.presentation().genus(),
        punctures: alg.presentation().punctures(),
    })
}

/// Basis element `k` of the degree-`d` graded piece, as a Lie element of
/// the ambient free algebra (a quotient-basis representative when closed).
fn graded_basis_element(alg: &SurfaceAlgebra, d: u32, k: usize) -> Result<LieElement> {
    let basis = alg.free().basis(d);
    let idx = if alg.is_closed() {
        let cd = alg.closed_degree(d)?;
        cd.quotient.free_rows()[k]
    } else {
        k
    };
    Ok(LieElement::from_component(alg.free().clone(), d, basis.expansions[idx].clone()))
}

/// The matrix of `g_m` (columns indexed by the degree-`m` basis).
pub fn g_matrix(alg: &SurfaceAlgebra, m: u32) -> Result<GradedModuleMap> {
    let layout = middle_layout(alg, m)?;
    let pres = alg.presentation().clone();
    let source_rank = graded_rank_usize(alg, m)?;
    let mut cols = Vec::with_capacity(source_rank);
    for k in 0..source_rank {
        let u = graded_basis_element(alg, m, k)?;
        let mut col = Vec::with_capacity(layout.dim());
        for i in 1..=pres.genus() {
            col.extend(alg.graded_coordinates(m + 1, &u.bracket(&alg.abar(i)))?);
        }
        for i in 1..=pres.genus() {
            col.extend(alg.graded_coordinates(m + 1, &u.bracket(&alg.bbar(i)))?);
        }
        let u_coords = alg.graded_coordinates(m, &u)?;
        for _ in 1..=pres.punctures() {
            col.extend(u_coords.iter().cloned());
        }
        cols.push(col);
    }
    Ok(GradedModuleMap {
        matrix: IntMat::from_columns(layout.dim(), &cols),
        source: format!("gr^{m}"),
        target: format!("(gr^{})^{} x (gr^{m})^{}", m + 1, 2 * pres.genus(), pres.punctures()),
    })
}

/// The matrix of `f_m` (columns indexed by the middle-space basis).
pub fn f_matrix(alg: &SurfaceAlgebra, m: u32) -> Result<GradedModuleMap> {
    let layout = middle_layout(alg, m)?;
    let pres = alg.presentation().clone();
    let target_rank = graded_rank_usize(alg, m + 2)?;
    let mut cols = Vec::with_capacity(layout.dim());
    // r-slots: u -> [u, bbar_i]
    for i in 1..=pres.genus() {
        let bbar = alg.bbar(i);
        for k in 0..layout.ab_block {
            let u = graded_basis_element(alg, m + 1, k)?;
            cols.push(alg.graded_coordinates(m + 2, &u.bracket(&bbar))?);
        }
    }
    // s-slots: u -> [abar_i, u]
    for i in 1..=pres.genus() {
        let abar = alg.abar(i);
        for k in 0..layout.ab_block {
            let u = graded_basis_element(alg, m + 1, k)?;
            cols.push(alg.graded_coordinates(m + 2, &abar.bracket(&u))?);
        }
    }
    // t-slots: v -> [v, cbar_j] (cbar_n is the derived element)
    for j in 1..=pres.punctures() {
        let cbar = alg.cbar(j);
        for k in 0..layout.c_block {
            let v = graded_basis_element(alg, m, k)?;
            cols.push(alg.graded_coordinates(m + 2, &v.bracket(&cbar))?);
        }
    }
    Ok(GradedModuleMap {
        matrix: IntMat::from_columns(target_rank, &cols),
        source: format!("(gr^{})^{} x (gr^{m})^{}", m + 1, 2 * pres.genus(), pres.punctures()),
        target: format!("gr^{}", m + 2),
    })
}

/// Evaluates `f_m(g_m(u))` for every basis element directly in the Lie
/// algebra (no matrices): an independent route to the central identity.
pub fn fg_zero_by_evaluation(alg: &SurfaceAlgebra, m: u32) -> Result<bool> {
    let pres = alg.presentation().clone();
    let source_rank = graded_rank_usize(alg, m)?;
    for k in 0..source_rank {
        let u = graded_basis_element(alg, m, k)?;
        let mut total = alg.free().zero();
        for i in 1..=pres.genus() {
            let abar = alg.abar(i);
            let bbar = alg.bbar(i);
            total = total.add(&abar.bracket(&u.bracket(&bbar)));
            total = total.add(&u.bracket(&abar).bracket(&bbar));
        }
        for j in 1..=pres.punctures() {
            total = total.add(&u.bracket(&alg.cbar(j)));
        }
        let coords = alg.graded_coordinates(m + 2, &total)?;
        if coords.iter().any(|c| !c.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Torsion finding, honest about what was actually computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TorsionReport {
    Exact(Vec<String>),
    Unverified { reason: String },
}

impl TorsionReport {
    pub fn exact(factors: Vec<BigInt>) -> Self {
        TorsionReport::Exact(factors.iter().map(|f| f.to_string()).collect())
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, TorsionReport::Exact(v) if v.is_empty())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactnessReport {
    pub degree: u32,
    pub source_rank: usize,
    pub middle_dim: usize,
    pub target_rank: usize,
    /// `f_m . g_m = 0` via the matrix product.
    pub fg_zero_matrix: bool,
    /// `f_m . g_m = 0` via direct evaluation in the Lie algebra.
    pub fg_zero_eval: bool,
    pub g_rank: RankInfo,
    pub g_injective: bool,
    pub f_rank: RankInfo,
    pub f_surjective_q: bool,
    pub f_coker_torsion: TorsionReport,
    /// `dim ker f - dim im g`, when both ranks are certified.
    pub out_rank: Option<u64>,
    /// `2g r_{m+1} + (n-1) r_m - r_{m+2}` (free case only).
    pub out_rank_formula: Option<i64>,
    pub ranks_agree: Option<bool>,
    /// Torsion of `ker f_m / im g_m`.
    pub quotient_torsion: TorsionReport,
}

impl ExactnessReport {
    pub fn all_good(&self) -> bool {
        self.fg_zero_matrix
            && self.fg_zero_eval
            && self.g_injective
            && self.f_surjective_q
            && self.ranks_agree != Some(false)
    }
}

/// Full exactness verification at degree `m`.
pub fn verify_exactness(alg: &SurfaceAlgebra, m: u32) -> Result<ExactnessReport> {
    let g = g_matrix(alg, m)?;
    let f = f_matrix(alg, m)?;
    let source_rank = g.matrix.cols();
    let middle_dim = g.matrix.rows();
    let target_rank = f.matrix.rows();
    let fg = f.matrix.mul(&g.matrix);
    let fg_zero_matrix = fg.is_zero();
    let fg_zero_eval = fg_zero_by_evaluation(alg, m)?;
    let g_rank = rank_info(&g.matrix, EXACT_CAP);
    let f_rank = rank_info(&f.matrix, EXACT_CAP);
    let g_injective = g_rank.certified && g_rank.rank == source_rank;
    let f_surjective_q = f_rank.certified && f_rank.rank == target_rank;
    let f_coker_torsion = if f.matrix.rows() * f.matrix.cols() <= EXACT_CAP {
        TorsionReport::exact(smith_normal_form(&f.matrix).nontrivial_factors())
    } else {
        TorsionReport::Unverified {
            reason: format!(
                "matrix {}x{} above the exact cap; torsion not computed",
                f.matrix.rows(),
                f.matrix.cols()
            ),
        }
    };
    let out_rank = if g_rank.certified && f_rank.certified {
        Some((middle_dim - f_rank.rank - g_rank.rank) as u64)
    } else {
        None
    };
    let out_rank_formula = if alg.is_closed() {
        None
    } else {
        let pres = alg.presentation();
        let r = |d: u32| alg.free().witt_rank(d) as i64;
        Some(
            2 * pres.genus() as i64 * r(m + 1) + (pres.punctures() as i64 - 1) * r(m)
                - r(m + 2),
        )
    };
    let ranks_agree = match (out_rank, out_rank_formula) {
        (Some(a), Some(b)) => Some(a as i64 == b),
        _ => None,
    };
    let quotient_torsion = quotient_torsion(&f.matrix, &g.matrix, fg_zero_matrix);
    Ok(ExactnessReport {
        degree: m,
        source_rank,
        middle_dim,
        target_rank,
        fg_zero_matrix,
        fg_zero_eval,
        g_rank,
        g_injective,
        f_rank,
        f_surjective_q,
        f_coker_torsion,
        out_rank,
        out_rank_formula,
        ranks_agree,
        quotient_torsion,
    })
}

fn quotient_torsion(f: &IntMat, g: &IntMat, fg_zero: bool) -> TorsionReport {
    if !fg_zero {
        return TorsionReport::Unverified { reason: "f.g != 0; quotient undefined".into() };
    }
    if f.rows() * f.cols() > EXACT_CAP {
        return TorsionReport::Unverified {
            reason: format!("kernel of a {}x{} matrix above the exact cap", f.rows(), f.cols()),
        };
    }
    let kernel = kernel_basis(f);
    // express the columns of g in the kernel basis (integral and saturated)
    let hnf = column_hnf(&kernel);
    let mut cols = Vec::new();
    for j in 0..g.cols() {
        match hnf.solve(&g.column(j)) {
            Some(y) => cols.push(y),
            None => {
                return TorsionReport::Unverified {
                    reason: "image of g does not lie in ker f over Z".into(),
                }
            }
        }
    }
    let y = IntMat::from_columns(kernel.cols(), &cols);
    TorsionReport::exact(smith_normal_form(&y).nontrivial_factors())
}

/// The graded piece `ker f_m / im g_m` with representatives; exact route,
/// so only available under the size cap.
pub struct OutGradedPiece {
    pub degree: u32,
    pub rank: u64,
    pub torsion: Vec<BigInt>,
    pub dim_ker_f: usize,
    pub dim_im_g: usize,
    /// Columns: middle-space coordinates of quotient representatives.
    pub representatives: IntMat,
}

pub fn out_graded_piece(alg: &SurfaceAlgebra, m: u32) -> Result<OutGradedPiece> {
    let report = verify_exactness(alg, m)?;
    if !(report.fg_zero_matrix && report.g_injective && report.f_surjective_q) {
        return Err(Error::ExactnessFailed(
            m,
            format!(
                "fg_zero={} g_injective={} f_surjective={}",
                report.fg_zero_matrix, report.g_injective, report.f_surjective_q
            ),
        ));
    }
    let f = f_matrix(alg, m)?;
    let g = g_matrix(alg, m)?;
    if f.matrix.rows() * f.matrix.cols() > EXACT_CAP {
        return Err(Error::Invalid(format!(
            "degree {m} middle space too large for exact quotient representatives"
        )));
    }
    let kernel = kernel_basis(&f.matrix);
    let hnf = column_hnf(&kernel);
    let mut cols = Vec::new();
    for j in 0..g.matrix.cols() {
        let y = hnf
            .solve(&g.matrix.column(j))
            .ok_or_else(|| Error::ExactnessFailed(m, "im g not in ker f over Z".into()))?;
        cols.push(y);
    }
    let y = IntMat::from_columns(kernel.cols(), &cols);
    let snf = smith_normal_form(&y);
    let quotient = crate::intmat::QuotientLattice::new(&y);
    let reps: Vec<Vec<BigInt>> =
        quotient.free_rows().iter().map(|&r| kernel.column(r)).collect();
    Ok(OutGradedPiece {
        degree: m,
        rank: quotient.quotient_rank() as u64,
        torsion: snf.nontrivial_factors(),
        dim_ker_f: kernel.cols(),
        dim_im_g: snf.rank,
        representatives: IntMat::from_columns(kernel.rows(), &reps),
    })
}

// ---------------------------------------------------------------------------
// Johnson-type classes
// ---------------------------------------------------------------------------

/// Depth of an automorphism: the generator-wise minimum of
/// `depth(phi(x) x^-1) - weight(x)` over the free generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutDepth {
    /// Identity to all computed depths.
    AtLeast(u32),
    /// Finite depth (possibly zero or negative contribution is reported as
    /// `NotPositive`).
    Finite(u32),
    /// Some generator contributes depth <= 0 (e.g. the abelianization is
    /// not the identity): the map is not in the positive filtration.
    NotPositive { generator: String, contribution: i64 },
}

pub fn automorphism_depth(phi: &GroupMap, alg: &SurfaceAlgebra, trunc: u32) -> Result<AutDepth> {
    let alphabet = alg.free().alphabet().clone();
    let pres = alg.presentation();
    let mut min_contribution: Option<(i64, String)> = None;
    for gen in 0..pres.free_rank() as u16 {
        let x = crate::word::Word::generator(gen);
        let u = phi.apply(&x).mul(&x.inverse());
        if u.is_identity() {
            continue;
        }
        let contribution = match depth_of_expansion(&magnus_expand(&alphabet, &u, trunc)?, trunc) {
            Depth::Finite { m, .. } => m as i64 - pres.weight(gen) as i64,
            Depth::DeeperThan(_) => continue,
        };
        if min_contribution.as_ref().is_none_or(|(c, _)| contribution < *c) {
            min_contribution = Some((contribution, pres.gen_name(gen)));
        }
    }
    Ok(match min_contribution {
        None => AutDepth::AtLeast(trunc.saturating_sub(2)),
        Some((c, gen)) if c <= 0 => AutDepth::NotPositive { generator: gen, contribution: c },
        Some((c, _)) => {
            if c as u32 + 2 > trunc {
                AutDepth::AtLeast(trunc.saturating_sub(2))
            } else {
                AutDepth::Finite(c as u32)
            }
        }
    })
}

#[derive(Debug, Clone)]
pub struct JohnsonClass {
    pub depth: u32,
    /// Middle-space coordinates at degree `depth`.
    pub class: Vec<BigInt>,
    /// The class is annihilated by `f_m` (consistency with the exact
    /// sequence; asserted by construction, recorded for reporting).
    pub f_annihilates: bool,
    /// The class lies in the image of `g_m`, i.e. vanishes in the graded
    /// outer piece.
    pub inner_class: bool,
    pub braid_exponents: Vec<i64>,
}

#[derive(Debug, Clone)]
pub enum JohnsonOutcome {
    Class(JohnsonClass),
    /// Identity to all depths computable at this truncation.
    DepthAtLeast(u32),
    NotPositive { generator: String, contribution: i64 },
}

/// Johnson-type class of a braid-type automorphism of a punctured surface.
///
/// The `a`/`b` slots carry the graded leading terms of `phi(x) x^-1` in
/// degree `m+1`; the `t_j` slot carries the degree-`m` class of the
/// conjugator, recovered from `[t_j, cbar_j] = class(phi(c_j) c_j^-1)` by
/// an exact linear solve (for `m = 2` the solution is normalized by the
/// Hermite form; it is inherently unique only up to `cbar_j`).
pub fn johnson_class(phi: &GroupMap, alg: &SurfaceAlgebra, trunc: u32) -> Result<JohnsonOutcome> {
    let pres = alg.presentation().clone();
    if pres.punctures() == 0 {
        return Err(Error::NotPunctured);
    }
    let witness = is_braid_type(phi).map_err(Error::NotBraidType)?;
    if let Some(j) = witness.exponents.iter().position(|&e| e != 1) {
        return Ok(JohnsonOutcome::NotPositive {
            generator: format!("c{}", j + 1),
            contribution: 0,
        });
    }
    let m = match automorphism_depth(phi, alg, trunc)? {
        AutDepth::Finite(m) => m,
        AutDepth::AtLeast(b) => return Ok(JohnsonOutcome::DepthAtLeast(b)),
        AutDepth::NotPositive { generator, contribution } => {
            return Ok(JohnsonOutcome::NotPositive { generator, contribution })
        }
    };
    let alphabet = alg.free().alphabet().clone();
    let layout = middle_layout(alg, m)?;
    let mut class = vec![BigInt::zero(); layout.dim()];
    let free = alg.free();
    // a/b slots: degree-(m+1) components of phi(x) x^-1
    for i in 1..=pres.genus() {
        for (gen, offset) in
            [(pres.a(i), layout.a_offset(i)), (pres.b(i), layout.b_offset(i))]
        {
            let x = crate::word::Word::generator(gen);
            let u = phi.apply(&x).mul(&x.inverse());
            if u.is_identity() {
                continue;
            }
            let exp = magnus_expand(&alphabet, &u, trunc)?;
            let part = exp.homogeneous_part(m + 1);
            let coords = free.coordinates(m + 1, &part)?;
            class[offset..offset + layout.ab_block].clone_from_slice(&coords);
        }
    }
    // t slots: solve [t_j, cbar_j] = class_{m+2}(phi(c_j) c_j^-1)
    for j in 1..=pres.punctures() {
        let c_word = pres.c_word(j);
        let u = phi.apply(&c_word).mul(&c_word.inverse());
        if u.is_identity() {
            continue;
        }
        let exp = magnus_expand(&alphabet, &u, trunc)?;
        let rhs_poly = exp.homogeneous_part(m + 2);
        let rhs = free.coordinates(m + 2, &rhs_poly)?;
        let cbar = alg.cbar(j);
        let basis_m = free.basis(m);
        let mut cols = Vec::with_capacity(basis_m.rank());
        for k in 0..basis_m.rank() {
            let t = LieElement::from_component(free.clone(), m, basis_m.expansions[k].clone());
            cols.push(t.bracket(&cbar).coordinates(m + 2)?);
        }
        let ad = IntMat::from_columns(free.basis(m + 2).rank(), &cols);
        let t = column_hnf(&ad).solve(&rhs).ok_or_else(|| {
            Error::Invalid(format!(
                "no integral conjugator class for c{j}: filtration theory violated"
            ))
        })?;
        let offset = layout.c_offset(j);
        class[offset..offset + layout.c_block].clone_from_slice(&t);
    }
    let f = f_matrix(alg, m)?;
    let f_annihilates = f.matrix.mul_vec(&class).iter().all(|v| v.is_zero());
    let g = g_matrix(alg, m)?;
    let inner_class = column_hnf(&g.matrix).solve(&class).is_some();
    Ok(JohnsonOutcome::Class(JohnsonClass {
        depth: m,
        class,
        f_annihilates,
        inner_class,
        braid_exponents: witness.exponents,
    }))
}

// ---------------------------------------------------------------------------
// The graded Dehn-Nielsen comparison map
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct DehnNielsenReport {
    pub degree: u32,
    pub source_rank: u64,
    pub target_rank: u64,
    pub surjective_q: bool,
    pub target_trivial: bool,
}

/// The map induced on graded outer pieces by killing the puncture classes
/// (`cbar_j -> 0`, `omega -> 0`): from the `(g, n)` piece onto the closed
/// `(g, 0)` piece in degree `m`. Surjectivity over Q is decided by a rank
/// comparison inside `ker f^X_m`.
pub fn dehn_nielsen_map(
    punctured: &SurfaceAlgebra,
    closed: &SurfaceAlgebra,
    m: u32,
) -> Result<DehnNielsenReport> {
    let pres_y = punctured.presentation();
    let pres_x = closed.presentation();
    if pres_y.punctures() == 0 {
        return Err(Error::NotPunctured);
    }
    if !closed.is_closed() {
        return Err(Error::NotClosed);
    }
    if pres_y.genus() != pres_x.genus() {
        return Err(Error::PresentationMismatch(
            pres_y.genus(),
            pres_y.punctures(),
            pres_x.genus(),
            pres_x.punctures(),
        ));
    }
    let genus = pres_x.genus();
    let piece_y = out_graded_piece(punctured, m)?;
    let target_rank = {
        let rep = verify_exactness(closed, m)?;
        rep.out_rank.ok_or_else(|| {
            Error::ExactnessFailed(m, "closed-side ranks not certified".into())
        })?
    };
    if target_rank == 0 {
        return Ok(DehnNielsenReport {
            degree: m,
            source_rank: piece_y.rank,
            target_rank,
            surjective_q: true,
            target_trivial: true,
        });
    }
    // project Y-middle representatives into the X middle space
    let layout_y = middle_layout(punctured, m)?;
    let layout_x = middle_layout(closed, m)?;
    let mut images: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..piece_y.representatives.cols() {
        let rep = piece_y.representatives.column(col);
        let mut out = vec![BigInt::zero(); layout_x.dim()];
        for slot in 0..2 * genus {
            let y_off = slot * layout_y.ab_block;
            let x_off = slot * layout_x.ab_block;
            // Y-coordinates -> free element -> drop c-letters -> X quotient
            let el = punctured
                .free()
                .element_from_coords(m + 1, &rep[y_off..y_off + layout_y.ab_block]);
            let projected = project_killing_punctures(&el, punctured, closed, m + 1)?;
            out[x_off..x_off + layout_x.ab_block].clone_from_slice(&projected);
        }
        images.push(out);
    }
    let f_x = f_matrix(closed, m)?;
    let g_x = g_matrix(closed, m)?;
    // images must lie in ker f^X
    let img_mat = IntMat::from_columns(layout_x.dim(), &images);
    if !f_x.matrix.mul(&img_mat).is_zero() {
        return Err(Error::ExactnessFailed(
            m,
            "projected classes do not lie in ker f of the closed side".into(),
        ));
    }
    // surjectivity over Q on ker/im: rank [images | im g_X] = dim ker f_X
    let dim_ker = layout_x.dim() - rank_info(&f_x.matrix, EXACT_CAP).rank;
    let mut combined_cols: Vec<Vec<BigInt>> = images;
    for j in 0..g_x.matrix.cols() {
        combined_cols.push(g_x.matrix.column(j));
    }
    let combined = IntMat::from_columns(layout_x.dim(), &combined_cols);
    let surjective_q = rank_info(&combined, EXACT_CAP).rank == dim_ker;
    Ok(DehnNielsenReport {
        degree: m,
        source_rank: piece_y.rank,
        target_rank,
        surjective_q,
        target_trivial: false,
    })
}

/// Sends `cbar_j -> 0` (drops every monomial containing a `c`-letter) and
/// reads the result in the closed quotient.
fn project_killing_punctures(
    el: &LieElement,
    punctured: &SurfaceAlgebra,
    closed: &SurfaceAlgebra,
    d: u32,
) -> Result<Vec<BigInt>> {
    let ab_letters = 2 * punctured.presentation().genus() as u8;
    let mut out = crate::tensor::TensorPoly::zero(closed.free().alphabet().clone(), d);
    if let Some(p) = el.component(d) {
        for (mono, c) in p.terms() {
            let letters = mono.to_vec();
            if letters.iter().any(|&l| l >= ab_letters) {
                continue;
            }
            out.add_term(mono, c.clone());
        }
    }
    let free_el = LieElement::from_component(closed.free().clone(), d, out);
    closed.graded_coordinates(d, &free_el)
}

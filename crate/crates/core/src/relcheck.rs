//! Relation verification in the outer automorphism group, degree by degree.
//!
//! A relation `L = R` between named automorphisms holds in `Out` when
//! `psi = L R^-1` is an inner automorphism. Truncated to level `m` this is
//! decided degreewise: at each depth the discrepancy classes of the
//! generators form an integer linear system against the adjoint map, a
//! solution yields an inner correction (the conjugator is built
//! incrementally as a group word), and an unsolvable system certifies
//! failure at that degree. Truncation can prove a relation false, but only
//! ever proves it true up to the level — unless the corrected map becomes
//! the literal identity, which certifies the relation in `Aut`.
//!
//! On closed surfaces depths and classes are computed in the quotient by
//! the relator ideal: whenever a leading term lies in the ideal lattice, it
//! is cancelled by multiplying with realizing relator words and the
//! expansion is recomputed one degree deeper.

use crate::autmap::GroupMap;
use crate::error::{Error, Result};
use crate::intmat::{column_hnf, IntMat};
use crate::lie::{LieElement, SurfaceAlgebra};
use crate::magnus::magnus_expand;
use crate::word::Word;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

/// A named, certified automorphism with its inverse (when available).
#[derive(Clone)]
pub struct NamedAut {
    pub map: GroupMap,
    pub inverse: Option<GroupMap>,
}

/// Evaluates a word in named maps, e.g. `[("s1", 2), ("s2", -1)]`.
pub fn evaluate_name_word(
    maps: &BTreeMap<String, NamedAut>,
    word: &[(String, i64)],
    pres: &std::sync::Arc<crate::surface::SurfacePresentation>,
) -> Result<GroupMap> {
    let mut acc = GroupMap::identity(pres.clone());
    for (name, exp) in word {
        let entry = maps.get(name).ok_or_else(|| Error::UndeclaredName(name.clone()))?;
        if *exp == 0 {
            return Err(Error::Invalid(format!("exponent 0 on `{name}`")));
        }
        let factor = if *exp > 0 {
            entry.map.clone()
        } else {
            entry.inverse.clone().ok_or(Error::NoInverse)?
        };
        for _ in 0..exp.unsigned_abs() {
            acc = acc.compose(&factor)?;
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationVerdict {
    /// The corrected map is the literal identity: the relation holds in
    /// `Aut` (hence in `Out`), with the recorded conjugator.
    HoldsExactly { conjugator: Word },
    /// Inner corrections exist at every degree up to the level; the
    /// relation holds in `Out` modulo `I^{level+1}` (inconclusive beyond).
    HoldsToLevel { level: u32, conjugator: Word },
    /// No inner correction exists at this degree.
    FailsAtDegree { degree: u32 },
}

impl RelationVerdict {
    pub fn holds_up_to(&self) -> Option<u32> {
        match self {
            RelationVerdict::HoldsExactly { .. } => Some(u32::MAX),
            RelationVerdict::HoldsToLevel { level, .. } => Some(*level),
            RelationVerdict::FailsAtDegree { .. } => None,
        }
    }
}

/// Depth/class of one word in the graded algebra (quotient-aware).
enum GradedLead {
    Finite { degree: u32, coords: Vec<BigInt>, adjusted: Word },
    Deeper(Word),
}

/// Computes the graded depth and leading class of `w` in the surface
/// algebra, eliminating relator-ideal leading terms in the closed case.
/// Returns the possibly adjusted word (original times relator words) whose
/// free leading term represents the quotient class.
fn graded_lead(alg: &SurfaceAlgebra, w: &Word, trunc: u32) -> Result<GradedLead> {
    let alphabet = alg.free().alphabet().clone();
    let mut word = w.clone();
    loop {
        if word.is_identity() {
            return Ok(GradedLead::Deeper(word));
        }
        let p = magnus_expand(&alphabet, &word, trunc)?;
        let Some(d) = p.min_nonconstant_weight() else {
            return Ok(GradedLead::Deeper(word));
        };
        let free_coords = alg.free().coordinates(d, &p.homogeneous_part(d))?;
        if !alg.is_closed() {
            return Ok(GradedLead::Finite { degree: d, coords: free_coords, adjusted: word });
        }
        let cd = alg.closed_degree(d)?;
        let qcoords = cd.quotient.project(&free_coords)?;
        if qcoords.iter().any(|c| !c.is_zero()) {
            return Ok(GradedLead::Finite { degree: d, coords: qcoords, adjusted: word });
        }
        // leading term lies in the relator ideal: cancel it and go deeper
        let lambda = cd.solve_in_ideal(&free_coords).ok_or_else(|| {
            Error::Invalid(format!(
                "degree-{d} leading term projects to zero but is not in the ideal lattice"
            ))
        })?;
        for (i, l) in lambda.iter().enumerate() {
            if l.is_zero() {
                continue;
            }
            let e = i64::try_from(l.clone())
                .map_err(|_| Error::Invalid("relator elimination exponent overflow".into()))?;
            word = word.mul(&cd.gen_word(i).pow(-e));
        }
        // the degree-d component now cancels; the loop recomputes at d+1
    }
}

/// The stacked adjoint matrix at depth `d`: columns over the degree-`d`
/// graded basis, rows blocked per free generator `x` with block
/// `gr^{d + w(x)}` and entry `[v, xbar]`.
fn stacked_ad_matrix(alg: &SurfaceAlgebra, d: u32) -> Result<IntMat> {
    let pres = alg.presentation();
    let rank_d = alg.graded_rank(d)? as usize;
    let mut block_rows = 0usize;
    let mut blocks: Vec<(u16, u32)> = Vec::new();
    for gen in 0..pres.free_rank() as u16 {
        let target = d + pres.weight(gen);
        blocks.push((gen, target));
        block_rows += alg.graded_rank(target)? as usize;
    }
    let mut cols = Vec::with_capacity(rank_d);
    for k in 0..rank_d {
        let v = graded_basis_rep(alg, d, k)?;
        let mut col = Vec::with_capacity(block_rows);
        for &(gen, target) in &blocks {
            let x = alg.free().generator(gen as u8);
            col.extend(alg.graded_coordinates(target, &v.bracket(&x))?);
        }
        cols.push(col);
    }
    Ok(IntMat::from_columns(block_rows, &cols))
}

fn graded_basis_rep(alg: &SurfaceAlgebra, d: u32, k: usize) -> Result<LieElement> {
    let basis = alg.free().basis(d);
    let idx = if alg.is_closed() { alg.closed_degree(d)?.quotient.free_rows()[k] } else { k };
    Ok(LieElement::from_component(alg.free().clone(), d, basis.expansions[idx].clone()))
}

/// Lifts quotient coordinates to free Lyndon coordinates (canonical
/// representatives at the free rows).
fn lift_coords(alg: &SurfaceAlgebra, d: u32, coords: &[BigInt]) -> Result<Vec<BigInt>> {
    if !alg.is_closed() {
        return Ok(coords.to_vec());
    }
    let cd = alg.closed_degree(d)?;
    let mut out = vec![BigInt::zero(); alg.free().basis(d).rank()];
    for (i, &row) in cd.quotient.free_rows().iter().enumerate() {
        out[row] = coords[i].clone();
    }
    Ok(out)
}

/// Decides whether `psi` agrees with an inner automorphism modulo
/// `I^{d+1}` for every `d <= max_level`, building the conjugator
/// incrementally.
pub fn verify_inner_in_out(
    alg: &SurfaceAlgebra,
    psi: &GroupMap,
    max_level: u32,
) -> Result<RelationVerdict> {
    let pres = alg.presentation().clone();
    let trunc = (max_level + 2).min(crate::alphabet::MAX_MONO_LEN as u32);
    let mut psi = psi.clone();
    let mut conjugator = Word::identity();
    loop {
        if psi.is_identity() {
            return Ok(RelationVerdict::HoldsExactly { conjugator });
        }
        // depth: generator-wise minimum of depth(psi(x) x^-1) - w(x)
        let mut min_c: Option<i64> = None;
        let mut leads: Vec<Option<(u32, Vec<BigInt>)>> = Vec::new();
        for gen in 0..pres.free_rank() as u16 {
            let x = Word::generator(gen);
            let u = psi.apply(&x).mul(&x.inverse());
            if u.is_identity() {
                leads.push(None);
                continue;
            }
            match graded_lead(alg, &u, trunc)? {
                GradedLead::Finite { degree, coords, .. } => {
                    let c = degree as i64 - pres.weight(gen) as i64;
                    if min_c.is_none_or(|m| c < m) {
                        min_c = Some(c);
                    }
                    leads.push(Some((degree, coords)));
                }
                GradedLead::Deeper(_) => leads.push(None),
            }
        }
        let Some(d) = min_c else {
            // identity on all generators to the computed depth
            return Ok(RelationVerdict::HoldsToLevel { level: max_level, conjugator });
        };
        if d <= 0 {
            // inner corrections act trivially on the abelianization and
            // cannot reach degree <= weight discrepancies
            return Ok(RelationVerdict::FailsAtDegree { degree: 0 });
        }
        let d = d as u32;
        if d > max_level {
            return Ok(RelationVerdict::HoldsToLevel { level: max_level, conjugator });
        }
        // assemble the discrepancy vector in the stacked-ad layout
        let mut rhs: Vec<BigInt> = Vec::new();
        for gen in 0..pres.free_rank() as u16 {
            let target = d + pres.weight(gen);
            let block = alg.graded_rank(target)? as usize;
            match &leads[gen as usize] {
                Some((degree, coords)) if *degree == target => rhs.extend(coords.iter().cloned()),
                _ => rhs.extend(std::iter::repeat_n(BigInt::zero(), block)),
            }
        }
        let ad = stacked_ad_matrix(alg, d)?;
        let Some(v) = column_hnf(&ad).solve(&rhs) else {
            return Ok(RelationVerdict::FailsAtDegree { degree: d });
        };
        let free_coords = lift_coords(alg, d, &v)?;
        let r = alg.free().realize_coords(d, &free_coords);
        // psi <- inner(r)^-1 . psi, pushing the discrepancy one degree down
        psi = GroupMap::inner(pres.clone(), &r.inverse()).compose(&psi)?;
        conjugator = conjugator.mul(&r);
    }
}

/// Verifies `lhs = rhs` as outer automorphisms up to the level.
pub fn verify_relation(
    alg: &SurfaceAlgebra,
    maps: &BTreeMap<String, NamedAut>,
    lhs: &[(String, i64)],
    rhs: &[(String, i64)],
    max_level: u32,
) -> Result<RelationVerdict> {
    let pres = alg.presentation();
    let left = evaluate_name_word(maps, lhs, pres)?;
    let psi = if rhs.is_empty() {
        left
    } else {
        let inverted: Vec<(String, i64)> =
            rhs.iter().rev().map(|(n, e)| (n.clone(), -e)).collect();
        let right_inv = evaluate_name_word(maps, &inverted, pres)?;
        left.compose(&right_inv)?
    };
    verify_inner_in_out(alg, &psi, max_level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autmap::certify_automorphism;
    use crate::surface::SurfacePresentation;
    use std::sync::Arc;

    fn setup_11() -> (Arc<SurfacePresentation>, SurfaceAlgebra) {
        let pres = SurfacePresentation::new(1, 1).unwrap();
        let alg = SurfaceAlgebra::new(pres.clone()).unwrap();
        (pres, alg)
    }

    fn named(map: GroupMap) -> NamedAut {
        let inverse = certify_automorphism(&map).ok().and_then(|c| c.inverse);
        NamedAut { map, inverse }
    }

    #[test]
    fn identity_relation_holds_exactly_with_zero_conjugator() {
        let (pres, alg) = setup_11();
        let tau = GroupMap::new(
            pres.clone(),
            vec![Word::generator(0), Word::from_pairs(&[(1, 1), (0, 1)])],
        )
        .unwrap();
        let mut maps = BTreeMap::new();
        maps.insert("s1".to_string(), named(tau));
        let verdict = verify_relation(
            &alg,
            &maps,
            &[("s1".into(), 1)],
            &[("s1".into(), 1)],
            4,
        )
        .unwrap();
        assert_eq!(verdict, RelationVerdict::HoldsExactly { conjugator: Word::identity() });
    }

    #[test]
    fn inner_map_is_trivial_in_out() {
        let (pres, alg) = setup_11();
        let conj_a = GroupMap::inner(pres.clone(), &Word::generator(0));
        let mut maps = BTreeMap::new();
        maps.insert("conj_a".to_string(), named(conj_a));
        let verdict =
            verify_relation(&alg, &maps, &[("conj_a".into(), 1)], &[], 4).unwrap();
        match verdict {
            RelationVerdict::HoldsExactly { conjugator } => {
                assert_eq!(conjugator, Word::generator(0));
            }
            other => panic!("inner map must be trivial in Out, got {other:?}"),
        }
    }

    #[test]
    fn deep_inner_map_is_trivial_in_out() {
        let (pres, alg) = setup_11();
        let w = Word::generator(0).commutator(&Word::generator(1));
        let conj = GroupMap::inner(pres.clone(), &w.mul(&Word::generator(0)));
        let mut maps = BTreeMap::new();
        maps.insert("u".to_string(), named(conj));
        let verdict = verify_relation(&alg, &maps, &[("u".into(), 1)], &[], 5).unwrap();
        assert!(matches!(verdict, RelationVerdict::HoldsExactly { .. }));
    }

    #[test]
    fn abelianization_mismatch_fails_at_zero() {
        let (pres, alg) = setup_11();
        let tau_a = GroupMap::new(
            pres.clone(),
            vec![Word::generator(0), Word::from_pairs(&[(1, 1), (0, 1)])],
        )
        .unwrap();
        let tau_b = GroupMap::new(
            pres.clone(),
            vec![Word::from_pairs(&[(0, 1), (1, 1)]), Word::generator(1)],
        )
        .unwrap();
        let mut maps = BTreeMap::new();
        maps.insert("ta".to_string(), named(tau_a));
        maps.insert("tb".to_string(), named(tau_b));
        let verdict =
            verify_relation(&alg, &maps, &[("ta".into(), 1)], &[("tb".into(), 1)], 4).unwrap();
        assert_eq!(verdict, RelationVerdict::FailsAtDegree { degree: 0 });
    }

    #[test]
    fn genuinely_outer_map_fails_at_its_depth() {
        // c_1 -> [a,b] c_1 [a,b]^-1 on (1,2): depth 2, non-inner class
        let pres = SurfacePresentation::new(1, 2).unwrap();
        let alg = SurfaceAlgebra::new(pres.clone()).unwrap();
        let w = Word::generator(0).commutator(&Word::generator(1));
        let phi = GroupMap::new(
            pres.clone(),
            vec![
                Word::generator(0),
                Word::generator(1),
                Word::generator(2).conjugated_by(&w),
            ],
        )
        .unwrap();
        let mut maps = BTreeMap::new();
        maps.insert("p".to_string(), named(phi));
        let verdict = verify_relation(&alg, &maps, &[("p".into(), 1)], &[], 5).unwrap();
        assert_eq!(verdict, RelationVerdict::FailsAtDegree { degree: 2 });
    }

    #[test]
    fn braid_relation_for_twists_on_the_punctured_torus() {
        // tau_a and tau_b satisfy the braid relation in the mapping class
        // group of the once-punctured torus: aba = bab should hold in Out.
        let (pres, alg) = setup_11();
        let tau_a = GroupMap::new(
            pres.clone(),
            vec![Word::generator(0), Word::from_pairs(&[(1, 1), (0, -1)])],
        )
        .unwrap();
        let tau_b = GroupMap::new(
            pres.clone(),
            vec![Word::from_pairs(&[(0, 1), (1, 1)]), Word::generator(1)],
        )
        .unwrap();
        let mut maps = BTreeMap::new();
        maps.insert("a".to_string(), named(tau_a));
        maps.insert("b".to_string(), named(tau_b));
        let lhs: Vec<(String, i64)> =
            vec![("a".into(), 1), ("b".into(), 1), ("a".into(), 1)];
        let rhs: Vec<(String, i64)> =
            vec![("b".into(), 1), ("a".into(), 1), ("b".into(), 1)];
        let verdict = verify_relation(&alg, &maps, &lhs, &rhs, 4).unwrap();
        assert!(
            verdict.holds_up_to().is_some(),
            "braid relation must not fail: {verdict:?}"
        );
    }

    #[test]
    fn closed_surface_inner_relation() {
        let pres = SurfacePresentation::new(2, 0).unwrap();
        let alg = SurfaceAlgebra::new(pres.clone()).unwrap();
        let u = Word::from_pairs(&[(0, 1), (2, -1)]);
        let conj = GroupMap::inner(pres.clone(), &u);
        let mut maps = BTreeMap::new();
        maps.insert("c".to_string(), named(conj));
        let verdict = verify_relation(&alg, &maps, &[("c".into(), 1)], &[], 3).unwrap();
        assert!(matches!(verdict, RelationVerdict::HoldsExactly { .. }), "{verdict:?}");
    }

    #[test]
    fn closed_depth_elimination_handles_relator_words() {
        // the relator itself is trivial in the quotient: conjugation by R
        // equals conjugation by nothing... but also the word R has infinite
        // quotient depth: graded_lead must keep eliminating
        let pres = SurfacePresentation::new(2, 0).unwrap();
        let alg = SurfaceAlgebra::new(pres.clone()).unwrap();
        let r = pres.closed_relator();
        match graded_lead(&alg, &r, 5).unwrap() {
            GradedLead::Deeper(_) => {}
            GradedLead::Finite { degree, .. } => {
                panic!("relator must vanish in the quotient, got degree {degree}")
            }
        }
        // a commutator word survives with its class
        let w = Word::generator(0).commutator(&Word::generator(1));
        match graded_lead(&alg, &w, 5).unwrap() {
            GradedLead::Finite { degree, coords, .. } => {
                assert_eq!(degree, 2);
                assert!(coords.iter().any(|c| !c.is_zero()));
            }
            _ => panic!("[a1,b1] is nonzero in the genus-2 quotient"),
        }
    }

    #[test]
    fn quarter_turn_power_four_is_inner_at_low_levels() {
        // alpha_0 is a quarter turn on handle 1; its fourth power acts as
        // an inner automorphism (it is the identity on the free images up
        // to conjugation), so the relation (alpha0)^4 = 1 must not fail
        let pres = SurfacePresentation::new(2, 0).unwrap();
        let alg = SurfaceAlgebra::new(pres.clone()).unwrap();
        let a0 = crate::builtin::suzuki_generator(&pres, 0).unwrap();
        let mut maps = BTreeMap::new();
        maps.insert("a0".to_string(), named(a0));
        let lhs: Vec<(String, i64)> = vec![("a0".into(), 4)];
        let verdict = verify_relation(&alg, &maps, &lhs, &[], 3).unwrap();
        assert!(verdict.holds_up_to().is_some(), "{verdict:?}");
    }
}

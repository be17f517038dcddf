//! Built-in generator tables and relation families for closed surfaces.
//!
//! The seven automorphisms `alpha_0 .. alpha_6` of the genus-`g` surface
//! group (the tables below act on handles 1 and 2 and require `g >= 2`;
//! `alpha_0`, `alpha_1`, `alpha_2`, `alpha_4` make sense for `g >= 1`), and
//! the five genus-2 relation families for the twist generators
//! `s1 .. s5`. Here `s_i` abbreviates the word `b_i^-1 a_i^-1 b_i a_i`.
//!
//! With the commutator convention `[x,y] = x^-1 y^-1 x y` used throughout
//! this crate, the maps `alpha_0` and `alpha_3..alpha_6` fix the relator
//! `prod [a_i,b_i]` exactly and `alpha_1` rotates it; `alpha_2` only
//! defines an automorphism of the closed surface group for `g = 1`
//! (inverting a single `b`-generator cannot preserve the intersection
//! pairing in higher genus).

use crate::autmap::GroupMap;
use crate::error::Result;
use crate::surface::SurfacePresentation;
use crate::word::Word;
use std::sync::Arc;

fn gen(pres: &SurfacePresentation, name: char, i: usize) -> Word {
    match name {
        'a' => Word::generator(pres.a(i)),
        'b' => Word::generator(pres.b(i)),
        _ => unreachable!(),
    }
}

/// `s_i = b_i^-1 a_i^-1 b_i a_i`.
pub fn s_word(pres: &SurfacePresentation, i: usize) -> Word {
    let a = gen(pres, 'a', i);
    let b = gen(pres, 'b', i);
    b.inverse().mul(&a.inverse()).mul(&b).mul(&a)
}

fn product(words: &[Word]) -> Word {
    words.iter().fold(Word::identity(), |acc, w| acc.mul(w))
}

/// The table of `alpha_k` on the closed genus-`g` surface. Indices 0..=6;
/// `alpha_3`, `alpha_5`, `alpha_6` require `g >= 2`.
pub fn suzuki_generator(pres: &Arc<SurfacePresentation>, k: usize) -> Result<GroupMap> {
    let g = pres.genus();
    assert!(pres.punctures() == 0, "the generator tables live on closed surfaces");
    let needs_two_handles = matches!(k, 3 | 5 | 6);
    if needs_two_handles && g < 2 {
        return Err(crate::error::Error::Invalid(format!(
            "alpha_{k} acts on two handles and needs genus >= 2"
        )));
    }
    let mut images: Vec<Word> = (0..pres.free_rank() as u16).map(Word::generator).collect();
    let a = |i: usize| gen(pres, 'a', i);
    let b = |i: usize| gen(pres, 'b', i);
    let set_a = |images: &mut Vec<Word>, i: usize, w: Word| images[pres.a(i) as usize] = w;
    let set_b = |images: &mut Vec<Word>, i: usize, w: Word| images[pres.b(i) as usize] = w;
    match k {
        0 => {
            // a1 -> b1^-1, b1 -> b1^-1 a1 b1
            set_a(&mut images, 1, b(1).inverse());
            set_b(&mut images, 1, product(&[b(1).inverse(), a(1), b(1)]));
        }
        1 => {
            // cyclic shift of the handles
            for i in 1..=g {
                let next = if i == g { 1 } else { i + 1 };
                set_a(&mut images, i, a(next));
                set_b(&mut images, i, b(next));
            }
        }
        2 => {
            // b1 -> b1^-1
            set_b(&mut images, 1, b(1).inverse());
        }
        3 => {
            // a2 -> b2 a2 (b1^-1 a1 b1)(a2^-1 b2^-1 a2), b1 -> b1 (a2^-1 b2^-1 a2)
            let inner1 = product(&[b(1).inverse(), a(1), b(1)]);
            let inner2 = product(&[a(2).inverse(), b(2).inverse(), a(2)]);
            set_a(&mut images, 2, product(&[b(2), a(2), inner1, inner2.clone()]));
            set_b(&mut images, 1, product(&[b(1), inner2]));
        }
        4 => {
            // a1 -> b1^-1 a1^-1 b1, b1 -> b1^-1 s1^-1
            let s1 = s_word(pres, 1);
            set_a(&mut images, 1, product(&[b(1).inverse(), a(1).inverse(), b(1)]));
            set_b(&mut images, 1, product(&[b(1).inverse(), s1.inverse()]));
        }
        5 => {
            // a1 -> s1^-1 a2 s1, a2 -> a1, b1 -> s1^-1 b2 s1, b2 -> b1
            let s1 = s_word(pres, 1);
            set_a(&mut images, 1, product(&[s1.inverse(), a(2), s1.clone()]));
            set_a(&mut images, 2, a(1));
            set_b(&mut images, 1, product(&[s1.inverse(), b(2), s1]));
            set_b(&mut images, 2, b(1));
        }
        6 => {
            // b1 -> a1 b1 a2^-1 s2 (b1^-1 a1^-1 b1),
            // b2 -> b2 a2 (b1^-1 a1^-1 b1) a2^-1
            let s2 = s_word(pres, 2);
            let t = product(&[b(1).inverse(), a(1).inverse(), b(1)]);
            set_b(&mut images, 1, product(&[a(1), b(1), a(2).inverse(), s2, t.clone()]));
            set_b(&mut images, 2, product(&[b(2), a(2), t, a(2).inverse()]));
        }
        _ => return Err(crate::error::Error::Invalid(format!("no generator alpha_{k}"))),
    }
    GroupMap::new(pres.clone(), images)
}

/// All tables defined for this genus, as `(name, map)` pairs.
pub fn suzuki_generators(pres: &Arc<SurfacePresentation>) -> Result<Vec<(String, GroupMap)>> {
    let ks: &[usize] = if pres.genus() >= 2 { &[0, 1, 2, 3, 4, 5, 6] } else { &[0, 1, 2, 4] };
    ks.iter()
        .map(|&k| Ok((format!("alpha{k}"), suzuki_generator(pres, k)?)))
        .collect()
}

/// A relation between two products of named maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub label: String,
    pub lhs: Vec<(String, i64)>,
    pub rhs: Vec<(String, i64)>,
}

impl Relation {
    fn word(label: String, lhs: Vec<(&str, i64)>, rhs: Vec<(&str, i64)>) -> Self {
        Relation {
            label,
            lhs: lhs.into_iter().map(|(s, e)| (s.to_string(), e)).collect(),
            rhs: rhs.into_iter().map(|(s, e)| (s.to_string(), e)).collect(),
        }
    }
}

/// The genus-2 relation families for the five twist generators `s1..s5`:
/// distant twists commute; adjacent twists braid; `(s1 s2 s3 s4 s5)^6 = 1`;
/// `(s1 s2 s3 s4 s5^2 s4 s3 s2 s1)^2 = 1`; and the word
/// `s1 s2 s3 s4 s5^2 s4 s3 s2 s1` is central.
pub fn birman_relations() -> Vec<Relation> {
    let name = |i: usize| format!("s{i}");
    let mut rels = Vec::new();
    for i in 1..=5usize {
        for j in i + 2..=5usize {
            rels.push(Relation::word(
                format!("commute_s{i}_s{j}"),
                vec![(&name(i), 1), (&name(j), 1)],
                vec![(&name(j), 1), (&name(i), 1)],
            ));
        }
    }
    for i in 1..=4usize {
        rels.push(Relation::word(
            format!("braid_s{i}_s{}", i + 1),
            vec![(&name(i), 1), (&name(i + 1), 1), (&name(i), 1)],
            vec![(&name(i + 1), 1), (&name(i), 1), (&name(i + 1), 1)],
        ));
    }
    let full: Vec<(String, i64)> = (1..=5).map(|i| (name(i), 1)).collect();
    let mut six = Vec::new();
    for _ in 0..6 {
        six.extend(full.clone());
    }
    rels.push(Relation { label: "power_six".into(), lhs: six, rhs: vec![] });
    let chain: Vec<(String, i64)> = vec![
        (name(1), 1),
        (name(2), 1),
        (name(3), 1),
        (name(4), 1),
        (name(5), 2),
        (name(4), 1),
        (name(3), 1),
        (name(2), 1),
        (name(1), 1),
    ];
    let mut squared = chain.clone();
    squared.extend(chain.clone());
    rels.push(Relation { label: "chain_squared".into(), lhs: squared, rhs: vec![] });
    for i in 1..=5usize {
        let mut lhs = chain.clone();
        lhs.push((name(i), 1));
        let mut rhs = vec![(name(i), 1)];
        rhs.extend(chain.clone());
        rels.push(Relation { label: format!("chain_central_s{i}"), lhs, rhs });
    }
    rels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autmap::{certify_automorphism, relator_conjugacy_class, symplectic_class};
    use num_bigint::BigInt;

    fn genus2() -> Arc<SurfacePresentation> {
        SurfacePresentation::new(2, 0).unwrap()
    }

    #[test]
    fn table_entries_match_the_source() {
        let pres = genus2();
        let a2 = suzuki_generator(&pres, 2).unwrap();
        assert_eq!(a2.image(pres.b(1)), &Word::generator_inv(pres.b(1)));

        let a0 = suzuki_generator(&pres, 0).unwrap();
        let b1 = Word::generator(pres.b(1));
        let a1w = Word::generator(pres.a(1));
        assert_eq!(a0.image(pres.b(1)), &b1.inverse().mul(&a1w).mul(&b1));

        // alpha_3(b_1) = b_1 (a_2^-1 b_2^-1 a_2)
        let a3 = suzuki_generator(&pres, 3).unwrap();
        let a2w = Word::generator(pres.a(2));
        let b2w = Word::generator(pres.b(2));
        let expect = b1.mul(&a2w.inverse()).mul(&b2w.inverse()).mul(&a2w);
        assert_eq!(a3.image(pres.b(1)), &expect);

        // alpha_5(a_2) = a_1
        let a5 = suzuki_generator(&pres, 5).unwrap();
        assert_eq!(a5.image(pres.a(2)), &Word::generator(pres.a(1)));

        // alpha_6(b_2) = b_2 a_2 (b_1^-1 a_1^-1 b_1) a_2^-1
        let a6 = suzuki_generator(&pres, 6).unwrap();
        let expect = b2w
            .mul(&a2w)
            .mul(&b1.inverse())
            .mul(&a1w.inverse())
            .mul(&b1)
            .mul(&a2w.inverse());
        assert_eq!(a6.image(pres.b(2)), &expect);
    }

    #[test]
    fn s_word_is_inverse_commutator() {
        // s_i = b^-1 a^-1 b a = [b, a] = [a, b]^-1 with our convention
        let pres = genus2();
        let s1 = s_word(&pres, 1);
        let com = Word::generator(pres.a(1)).commutator(&Word::generator(pres.b(1)));
        assert_eq!(s1, com.inverse());
    }

    #[test]
    fn relator_behavior_of_the_tables() {
        let pres = genus2();
        let r = pres.closed_relator();
        // alpha_0, alpha_3..alpha_6 fix the relator exactly
        for k in [0usize, 3, 4, 5, 6] {
            let alpha = suzuki_generator(&pres, k).unwrap();
            assert_eq!(alpha.apply(&r), r, "alpha_{k} must fix the relator");
        }
        // alpha_1 sends it to a rotation
        let a1 = suzuki_generator(&pres, 1).unwrap();
        assert_eq!(relator_conjugacy_class(&a1.apply(&r), &pres), Some(1));
        // alpha_2 does not preserve the relator class in genus 2
        let a2 = suzuki_generator(&pres, 2).unwrap();
        assert_eq!(relator_conjugacy_class(&a2.apply(&r), &pres), None);
    }

    #[test]
    fn certification_of_the_tables() {
        let pres = genus2();
        for k in [0usize, 1, 3, 4, 5, 6] {
            let alpha = suzuki_generator(&pres, k).unwrap();
            let cert = certify_automorphism(&alpha)
                .unwrap_or_else(|e| panic!("alpha_{k} must certify: {e}"));
            assert!(cert.inverse.is_some(), "alpha_{k} is a free-group automorphism too");
            let nu = symplectic_class(&alpha.abelianization_matrix())
                .unwrap_or_else(|e| panic!("alpha_{k} must be a similitude: {e}"));
            assert_eq!(nu, BigInt::from(1), "alpha_{k}");
        }
        // alpha_2 in genus >= 2 fails both closed-case checks
        let a2 = suzuki_generator(&pres, 2).unwrap();
        assert!(certify_automorphism(&a2).is_err());
        assert!(symplectic_class(&a2.abelianization_matrix()).is_err());
    }

    #[test]
    fn alpha2_works_in_genus_one_as_a_reflection() {
        // genus 1 needs a puncture to be hyperbolic; check on the free group
        // F_2 = pi_1 of the torus directly: [a, b^-1] is conjugate to [a,b]^-1
        let a = Word::generator(0);
        let b = Word::generator(1);
        let image = a.commutator(&b.inverse());
        let r = a.commutator(&b);
        let (core, _) = image.cyclically_reduce();
        assert!(core.is_rotation_of(&r.inverse()));
    }

    #[test]
    fn orientation_classes() {
        let pres = genus2();
        for (k, expect) in [(0usize, 1i8), (1, 1), (3, 1), (4, 1), (5, 1), (6, 1)] {
            let alpha = suzuki_generator(&pres, k).unwrap();
            let cert = certify_automorphism(&alpha).unwrap();
            assert_eq!(cert.orientation, Some(expect), "alpha_{k}");
        }
    }

    #[test]
    fn relation_families_have_expected_shape() {
        let rels = birman_relations();
        // 6 commuting + 4 braid + power six + chain squared + 5 central
        assert_eq!(rels.len(), 6 + 4 + 1 + 1 + 5);
        let six = rels.iter().find(|r| r.label == "power_six").unwrap();
        assert_eq!(six.lhs.len(), 30);
        assert!(six.rhs.is_empty());
        let braid = rels.iter().find(|r| r.label == "braid_s1_s2").unwrap();
        assert_eq!(braid.lhs, vec![("s1".to_string(), 1), ("s2".to_string(), 1), ("s1".to_string(), 1)]);
    }
}

//! The graded derivation algebra of a free Lie algebra.
//!
//! A derivation is determined by its images on the free generators and
//! extends by the Leibniz rule. We extend through the associative envelope
//! instead: replacing one letter at a time in each monomial is the unique
//! associative derivation restricting to the Lie one, so applying a
//! derivation to a stored tensor expansion needs no bracket tree.
//!
//! A derivation of shift `i` sends the degree-`j` component into degree
//! `i + j`; `[D^i, D^j] <= D^{i+j}`. Inner derivations are the image of the
//! adjoint map, and for the rank-two algebra Ihara's special derivation
//! `D_f` fixes `x` and sends `y` to `[y, f]`.

use crate::error::{Error, Result};
use crate::intmat::{rank_exact, smith_normal_form, IntMat};
use crate::lie::{FreeLieAlgebra, LieElement};
use crate::tensor::TensorPoly;
use num_bigint::BigInt;
use num_traits::Zero;

/// A derivation of pure weight `shift`, given by homogeneous generator
/// images: the letter of weight `w` maps into degree `w + shift`.
#[derive(Clone)]
pub struct GradedDerivation {
    algebra: FreeLieAlgebra,
    shift: i64,
    /// one image per letter; each zero or homogeneous of degree w(letter)+shift
    images: Vec<LieElement>,
}

impl GradedDerivation {
    pub fn new(algebra: FreeLieAlgebra, shift: i64, images: Vec<LieElement>) -> Result<Self> {
        let alphabet = algebra.alphabet().clone();
        if images.len() != alphabet.len() {
            return Err(Error::Invalid(format!(
                "expected {} generator images, got {}",
                alphabet.len(),
                images.len()
            )));
        }
        for (l, img) in images.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let expect = alphabet.weight(l as u8) as i64 + shift;
            if expect < 1 || img.degree() != Some(expect as u32) {
                return Err(Error::Invalid(format!(
                    "image of letter {l} must be homogeneous of degree {expect}"
                )));
            }
        }
        Ok(GradedDerivation { algebra, shift, images })
    }

    pub fn zero(algebra: FreeLieAlgebra, shift: i64) -> Self {
        let images = vec![algebra.zero(); algebra.alphabet().len()];
        GradedDerivation { algebra, shift, images }
    }

    /// The inner derivation `ad(v): u -> [v, u]` for homogeneous `v`.
    pub fn inner(v: &LieElement) -> Result<Self> {
        let algebra = v.algebra().clone();
        let Some(deg) = v.degree() else {
            return Err(Error::Invalid("ad needs a homogeneous element".into()));
        };
        let images = (0..algebra.alphabet().len() as u8)
            .map(|l| v.bracket(&algebra.generator(l)))
            .collect();
        Self::new(algebra, deg as i64, images)
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn algebra(&self) -> &FreeLieAlgebra {
        &self.algebra
    }

    pub fn image_of_letter(&self, l: u8) -> &LieElement {
        &self.images[l as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|i| i.is_zero())
    }

    /// Applies the associative Leibniz extension to one monomial component.
    fn apply_poly(&self, p: &TensorPoly, degree: u32) -> LieElement {
        let new_degree = degree as i64 + self.shift;
        let mut out = self.algebra.zero();
        if new_degree < 1 {
            return out;
        }
        let trunc = new_degree as u32;
        let alphabet = self.algebra.alphabet().clone();
        let mut acc = TensorPoly::zero(alphabet.clone(), trunc);
        for (mono, c) in p.terms() {
            let letters = mono.to_vec();
            for (pos, &l) in letters.iter().enumerate() {
                let img = &self.images[l as usize];
                let Some(img_poly) = img.degree().and_then(|d| img.component(d)) else {
                    continue;
                };
                // prefix * image * suffix
                let prefix = crate::alphabet::Mono::from_slice(&letters[..pos]);
                let suffix = crate::alphabet::Mono::from_slice(&letters[pos + 1..]);
                for (m2, c2) in img_poly.terms() {
                    let new_mono = prefix.concat(m2).concat(suffix);
                    acc.add_term(new_mono, c * c2);
                }
            }
        }
        if !acc.is_zero() {
            out = LieElement::from_component(self.algebra.clone(), trunc, acc);
        }
        out
    }

    /// The unique Leibniz extension applied to an element.
    pub fn apply(&self, u: &LieElement) -> LieElement {
        let mut out = self.algebra.zero();
        for d in u.degrees().collect::<Vec<_>>() {
            let p = u.component(d).expect("degree listed");
            out = out.add(&self.apply_poly(p, d));
        }
        out
    }

    pub fn add(&self, other: &GradedDerivation) -> Result<Self> {
        if self.shift != other.shift {
            return Err(Error::Invalid("adding derivations of different shifts".into()));
        }
        let images =
            self.images.iter().zip(&other.images).map(|(a, b)| a.add(b)).collect();
        Self::new(self.algebra.clone(), self.shift, images)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let images = self.images.iter().map(|i| i.scale(c)).collect();
        GradedDerivation { algebra: self.algebra.clone(), shift: self.shift, images }
    }

    /// Commutator `D1 o D2 - D2 o D1`, again a derivation, of shift
    /// `i1 + i2`, represented by its generator images.
    pub fn bracket(&self, other: &GradedDerivation) -> Result<GradedDerivation> {
        let algebra = self.algebra.clone();
        let images = (0..algebra.alphabet().len() as u8)
            .map(|l| {
                let a = self.apply(&other.images[l as usize]);
                let b = other.apply(&self.images[l as usize]);
                a.sub(&b)
            })
            .collect();
        Self::new(algebra, self.shift + other.shift, images)
    }
}

/// Rank of the space of shift-`i` derivations: one free generator image per
/// letter, each from the degree-`(w+i)` component.
pub fn der_rank(algebra: &FreeLieAlgebra, i: i64) -> u64 {
    let alphabet = algebra.alphabet();
    let mut total = 0u64;
    for l in 0..alphabet.len() as u8 {
        let d = alphabet.weight(l) as i64 + i;
        if d >= 1 {
            total += algebra.witt_rank(d as u32);
        }
    }
    total
}

/// The matrix of `ad: L_i -> (+)_l L_{w(l)+i}` over the Lyndon bases.
pub fn ad_matrix(algebra: &FreeLieAlgebra, i: i64) -> IntMat {
    if i < 1 {
        return IntMat::zeros(der_rank(algebra, i) as usize, 0);
    }
    let i = i as u32;
    let alphabet = algebra.alphabet().clone();
    let source = algebra.basis(i);
    let mut row_blocks: Vec<u32> = Vec::new();
    for l in 0..alphabet.len() as u8 {
        row_blocks.push(alphabet.weight(l) + i);
    }
    let total_rows: usize =
        row_blocks.iter().map(|&d| algebra.basis(d).rank()).sum();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for bi in 0..source.rank() {
        let v = algebra.element_from_coords(
            i,
            &unit_vector(source.rank(), bi),
        );
        let mut col: Vec<BigInt> = Vec::with_capacity(total_rows);
        for l in 0..alphabet.len() as u8 {
            let img = v.bracket(&algebra.generator(l));
            let coords = img
                .coordinates(row_blocks[l as usize])
                .expect("brackets of basis elements stay in the lattice");
            col.extend(coords);
        }
        cols.push(col);
    }
    IntMat::from_columns(total_rows, &cols)
}

fn unit_vector(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::from(1);
    v
}

/// Rank of the inner derivations of shift `i` (the adjoint map is computed,
/// not assumed injective).
pub fn inner_rank(algebra: &FreeLieAlgebra, i: i64) -> u64 {
    if i < 1 {
        return 0;
    }
    rank_exact(&ad_matrix(algebra, i)) as u64
}

/// Rank and cokernel torsion of `Der^i / Inn^i`.
pub struct DerModInner {
    pub der_rank: u64,
    pub inner_rank: u64,
    pub quotient_rank: u64,
    /// invariant factors (different from 1) of the cokernel of `ad`
    pub torsion: Vec<BigInt>,
}

pub fn der_mod_inner(algebra: &FreeLieAlgebra, i: i64) -> DerModInner {
    let der = der_rank(algebra, i);
    if i < 1 {
        return DerModInner { der_rank: der, inner_rank: 0, quotient_rank: der, torsion: vec![] };
    }
    let m = ad_matrix(algebra, i);
    let snf = smith_normal_form(&m);
    DerModInner {
        der_rank: der,
        inner_rank: snf.rank as u64,
        quotient_rank: der - snf.rank as u64,
        torsion: snf.nontrivial_factors(),
    }
}

/// Ihara's special derivation on the rank-two algebra: `D_f(x) = 0`,
/// `D_f(y) = [y, f]` for homogeneous `f`.
pub fn ihara_special(f: &LieElement) -> Result<GradedDerivation> {
    let algebra = f.algebra().clone();
    if algebra.alphabet().len() != 2 {
        return Err(Error::WrongAlphabet);
    }
    if f.is_zero() {
        // degree convention: the zero derivation of shift 0
        return Ok(GradedDerivation::zero(algebra, 0));
    }
    let Some(m) = f.degree() else {
        return Err(Error::Invalid("f must be homogeneous".into()));
    };
    let y = algebra.generator(1);
    let images = vec![algebra.zero(), y.bracket(f)];
    GradedDerivation::new(algebra, m as i64, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::WeightedAlphabet;

    fn free2() -> FreeLieAlgebra {
        FreeLieAlgebra::new(WeightedAlphabet::uniform(2))
    }

    #[test]
    fn zero_derivation_kills_everything() {
        let alg = free2();
        let d = GradedDerivation::zero(alg.clone(), 3);
        let x = alg.generator(0);
        let y = alg.generator(1);
        assert!(d.apply(&x.bracket(&y)).is_zero());
        assert!(d.is_zero());
    }

    #[test]
    fn inner_derivation_is_bracketing() {
        let alg = free2();
        let x = alg.generator(0);
        let y = alg.generator(1);
        let v = x.bracket(&y);
        let ad_v = GradedDerivation::inner(&v).unwrap();
        assert_eq!(ad_v.shift(), 2);
        let u = y.bracket(&x.bracket(&y));
        assert_eq!(ad_v.apply(&u), v.bracket(&u));
    }

    #[test]
    fn leibniz_by_hand() {
        // D(x) = 0, D(y) = [y,x]: D([x,y]) = [x,[y,x]]
        let alg = free2();
        let x = alg.generator(0);
        let y = alg.generator(1);
        let d = GradedDerivation::new(
            alg.clone(),
            1,
            vec![alg.zero(), y.bracket(&x)],
        )
        .unwrap();
        let lhs = d.apply(&x.bracket(&y));
        let rhs = x.bracket(&y.bracket(&x));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_rule_holds_for_inner_and_special() {
        let alg = free2();
        let x = alg.generator(0);
        let y = alg.generator(1);
        let f = x.bracket(&y).bracket(&y);
        let candidates = vec![
            GradedDerivation::inner(&f).unwrap(),
            ihara_special(&f).unwrap(),
            ihara_special(&x.bracket(&y)).unwrap(),
        ];
        let pairs = vec![
            (x.clone(), y.clone()),
            (x.bracket(&y), y.clone()),
            (x.bracket(&y).bracket(&x), y.bracket(&x)),
        ];
        for d in &candidates {
            for (u, v) in &pairs {
                let lhs = d.apply(&u.bracket(v));
                let rhs = d.apply(u).bracket(v).add(&u.bracket(&d.apply(v)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn derivation_bracket_shifts_add_and_ad_is_a_homomorphism() {
        let alg = free2();
        let x = alg.generator(0);
        let y = alg.generator(1);
        let u = x.bracket(&y);
        let v = y.bracket(&x.bracket(&y));
        let ad_u = GradedDerivation::inner(&u).unwrap();
        let ad_v = GradedDerivation::inner(&v).unwrap();
        let lhs = ad_u.bracket(&ad_v).unwrap();
        assert_eq!(lhs.shift(), 5);
        let rhs = GradedDerivation::inner(&u.bracket(&v)).unwrap();
        // [ad u, ad v] = ad [u,v] exactly, image by image
        for l in 0..2u8 {
            assert_eq!(lhs.image_of_letter(l), rhs.image_of_letter(l));
        }
        // [D, D] = 0
        let self_bracket = ad_u.bracket(&ad_u).unwrap();
        assert!(self_bracket.is_zero());
    }

    #[test]
    fn ranks_on_two_letters() {
        let alg = free2();
        // der_rank(i=1) = 2 * r_2 = 2
        assert_eq!(der_rank(&alg, 1), 2);
        // ad is injective on L_1 in a free Lie algebra of rank >= 2
        assert_eq!(inner_rank(&alg, 1), 2);
        // i = -1: no degree-0 component
        assert_eq!(der_rank(&alg, -1), 0);
        let data = der_mod_inner(&alg, 2);
        assert_eq!(data.der_rank, 2 * alg.witt_rank(3));
        assert_eq!(data.inner_rank, alg.witt_rank(2));
        assert_eq!(data.quotient_rank, data.der_rank - data.inner_rank);
    }

    #[test]
    fn ihara_special_matches_definition() {
        let alg = free2();
        let x = alg.generator(0);
        let y = alg.generator(1);
        // f = x: D(y) = [y,x] nonzero
        let d = ihara_special(&x).unwrap();
        assert!(d.image_of_letter(0).is_zero());
        assert_eq!(*d.image_of_letter(1), y.bracket(&x));
        assert!(!d.is_zero());
        // f = 0: the zero derivation
        assert!(ihara_special(&alg.zero()).unwrap().is_zero());
        // wrong alphabet
        let alg3 = FreeLieAlgebra::new(WeightedAlphabet::uniform(3));
        assert!(matches!(
            ihara_special(&alg3.generator(0)),
            Err(Error::WrongAlphabet)
        ));
    }

    #[test]
    fn ihara_injective_small_degrees() {
        // f -> D_f is linear with D_f(y) = [y,f]; the kernel of ad(y) is the
        // span of y itself, so the map is injective degreewise for m >= 2
        // and on the complement of y in degree 1 (D_y(y) = [y,y] = 0).
        let alg = free2();
        for m in 1..=5u32 {
            let basis = alg.basis(m);
            let mut cols = Vec::new();
            let mut zero_images = 0usize;
            for i in 0..basis.rank() {
                let f = alg.element_from_coords(m, &unit_vector(basis.rank(), i));
                let d = ihara_special(&f).unwrap();
                let img = d.image_of_letter(1);
                if img.is_zero() {
                    zero_images += 1;
                }
                cols.push(img.coordinates(m + 1).unwrap());
            }
            let mat = IntMat::from_columns(alg.basis(m + 1).rank(), &cols);
            let expected_zero = if m == 1 { 1 } else { 0 };
            assert_eq!(zero_images, expected_zero, "degree {m}");
            assert_eq!(rank_exact(&mat), basis.rank() - expected_zero, "degree {m}");
        }
    }
}

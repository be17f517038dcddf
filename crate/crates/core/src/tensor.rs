//! Weight-truncated noncommutative polynomials over the integers.
//!
//! Monomials are words in the letters of a [`WeightedAlphabet`]; only
//! monomials of total weight at most the truncation bound are stored, and
//! multiplication silently drops overweight products, making truncation a
//! ring congruence.

use crate::alphabet::{Mono, WeightedAlphabet};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone)]
pub struct TensorPoly {
    alphabet: Arc<WeightedAlphabet>,
    trunc: u32,
    terms: BTreeMap<Mono, BigInt>,
}

impl PartialEq for TensorPoly {
    fn eq(&self, other: &Self) -> bool {
        self.trunc == other.trunc && self.terms == other.terms
    }
}
impl Eq for TensorPoly {}

impl std::fmt::Debug for TensorPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.display())
    }
}

impl TensorPoly {
    pub fn zero(alphabet: Arc<WeightedAlphabet>, trunc: u32) -> Self {
        TensorPoly { alphabet, trunc, terms: BTreeMap::new() }
    }

    pub fn one(alphabet: Arc<WeightedAlphabet>, trunc: u32) -> Self {
        let mut p = Self::zero(alphabet, trunc);
        p.terms.insert(Mono::EMPTY, BigInt::one());
        p
    }

    pub fn generator(alphabet: Arc<WeightedAlphabet>, letter: u8, trunc: u32) -> Self {
        let mut p = Self::zero(alphabet.clone(), trunc);
        if alphabet.weight(letter) <= trunc {
            p.terms.insert(Mono::letter(letter), BigInt::one());
        }
        p
    }

    pub fn from_terms(
        alphabet: Arc<WeightedAlphabet>,
        trunc: u32,
        terms: impl IntoIterator<Item = (Mono, BigInt)>,
    ) -> Self {
        let mut p = Self::zero(alphabet, trunc);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn alphabet(&self) -> &Arc<WeightedAlphabet> {
        &self.alphabet
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mono, &BigInt)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: Mono) -> BigInt {
        self.terms.get(&m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(Mono::EMPTY)
    }

    /// Adds `c * m`, dropping overweight monomials and zero results.
    pub fn add_term(&mut self, m: Mono, c: BigInt) {
        if c.is_zero() || self.alphabet.mono_weight(m) > self.trunc {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_assign(&mut self, other: &TensorPoly) {
        self.check_compat(other);
        for (&m, c) in &other.terms {
            self.add_term(m, c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &TensorPoly) {
        self.check_compat(other);
        for (&m, c) in &other.terms {
            self.add_term(m, -c.clone());
        }
    }

    pub fn add(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn neg(&self) -> TensorPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> TensorPoly {
        if c.is_zero() {
            return Self::zero(self.alphabet.clone(), self.trunc);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    /// `scaled_add`: self += c * other.
    pub fn scaled_add_assign(&mut self, c: &BigInt, other: &TensorPoly) {
        self.check_compat(other);
        if c.is_zero() {
            return;
        }
        for (&m, v) in &other.terms {
            self.add_term(m, c * v);
        }
    }

    pub fn mul(&self, other: &TensorPoly) -> TensorPoly {
        self.check_compat(other);
        let mut out = Self::zero(self.alphabet.clone(), self.trunc);
        for (&m1, c1) in &self.terms {
            let w1 = self.alphabet.mono_weight(m1);
            if w1 > self.trunc {
                continue;
            }
            for (&m2, c2) in &other.terms {
                if w1 + self.alphabet.mono_weight(m2) > self.trunc {
                    continue;
                }
                out.add_term(m1.concat(m2), c1 * c2);
            }
        }
        out
    }

    /// The same polynomial under a different truncation bound; terms beyond
    /// the new bound are dropped.
    pub fn retruncated(&self, trunc: u32) -> TensorPoly {
        let mut out = Self::zero(self.alphabet.clone(), trunc);
        for (&m, c) in &self.terms {
            if self.alphabet.mono_weight(m) <= trunc {
                out.terms.insert(m, c.clone());
            }
        }
        out
    }

    /// self * X_l.
    pub fn mul_letter(&self, letter: u8) -> TensorPoly {
        let mut out = Self::zero(self.alphabet.clone(), self.trunc);
        let w = self.alphabet.weight(letter);
        for (&m, c) in &self.terms {
            if self.alphabet.mono_weight(m) + w <= self.trunc {
                out.terms.insert(m.append(letter), c.clone());
            }
        }
        out
    }

    /// self * (1 + e*X_l), used as the hot path of the Magnus expansion.
    pub fn mul_one_plus_letter(&self, letter: u8, sign: i64) -> TensorPoly {
        let mut out = self.clone();
        let w = self.alphabet.weight(letter);
        let s = BigInt::from(sign);
        for (&m, c) in &self.terms {
            if self.alphabet.mono_weight(m) + w <= self.trunc {
                out.add_term(m.append(letter), c * &s);
            }
        }
        out
    }

    /// Lie bracket `self * other - other * self` in the associative envelope.
    pub fn bracket(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = self.mul(other);
        out.sub_assign(&other.mul(self));
        out
    }

    /// The homogeneous component of total weight `w`.
    pub fn homogeneous_part(&self, w: u32) -> TensorPoly {
        let mut out = Self::zero(self.alphabet.clone(), self.trunc);
        for (&m, c) in &self.terms {
            if self.alphabet.mono_weight(m) == w {
                out.terms.insert(m, c.clone());
            }
        }
        out
    }

    /// Smallest weight of a nonconstant term, if any.
    pub fn min_nonconstant_weight(&self) -> Option<u32> {
        self.terms
            .keys()
            .filter(|m| !m.is_empty())
            .map(|&m| self.alphabet.mono_weight(m))
            .min()
    }

    pub fn is_homogeneous_of(&self, w: u32) -> bool {
        self.terms.keys().all(|&m| self.alphabet.mono_weight(m) == w)
    }

    /// Largest coefficient magnitude; handy for sanity output.
    pub fn max_abs_coefficient(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Deconcatenation coproduct, restricted to the stored component.
    /// An element `p` with zero constant term is primitive when
    /// `coproduct(p) = p (x) 1 + 1 (x) p`; this is the test used to confirm
    /// that Magnus leading terms are Lie elements.
    pub fn coproduct(&self) -> BTreeMap<(Mono, Mono), BigInt> {
        let mut out: BTreeMap<(Mono, Mono), BigInt> = BTreeMap::new();
        for (&m, c) in &self.terms {
            let letters = m.to_vec();
            let n = letters.len();
            // all 2^n splits of the positions into left/right tensor factors
            for mask in 0u32..(1u32 << n) {
                let mut left = Vec::new();
                let mut right = Vec::new();
                for (i, &l) in letters.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        left.push(l);
                    } else {
                        right.push(l);
                    }
                }
                let key = (Mono::from_slice(&left), Mono::from_slice(&right));
                let entry = out.entry(key).or_insert_with(BigInt::zero);
                *entry += c;
                if entry.is_zero() {
                    out.remove(&(Mono::from_slice(&left), Mono::from_slice(&right)));
                }
            }
        }
        out
    }

    /// Primitivity check via the coproduct (exponential cost in the word
    /// length; intended for tests at small truncation).
    pub fn is_primitive(&self) -> bool {
        if !self.constant_term().is_zero() {
            return false;
        }
        let mut expected: BTreeMap<(Mono, Mono), BigInt> = BTreeMap::new();
        for (&m, c) in &self.terms {
            *expected.entry((m, Mono::EMPTY)).or_insert_with(BigInt::zero) += c;
            *expected.entry((Mono::EMPTY, m)).or_insert_with(BigInt::zero) += c;
        }
        expected.retain(|_, v| !v.is_zero());
        self.coproduct() == expected
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (&m, c) in &self.terms {
            let mono = if m.is_empty() { "1".to_string() } else { self.alphabet.mono_string(m) };
            parts.push(format!("{c}*{mono}"));
        }
        parts.join(" + ")
    }

    fn check_compat(&self, other: &TensorPoly) {
        assert_eq!(self.trunc, other.trunc, "mismatched truncation bounds");
        debug_assert_eq!(self.alphabet.weights(), other.alphabet.weights(), "mismatched alphabets");
    }
}

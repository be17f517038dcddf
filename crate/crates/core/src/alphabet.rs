//! Weighted alphabets and packed noncommutative monomials.
//!
//! A monomial is a word in at most 15 letters, packed into a `u64`
//! (length byte followed by 4-bit letters from the high end). The derived
//! `Ord` compares length first and then letters lexicographically, which is
//! exactly the order the Lyndon-basis elimination in [`crate::lie`] relies on.

use crate::error::{Error, Result};
use std::sync::Arc;

pub const MAX_LETTERS: usize = 15;
pub const MAX_MONO_LEN: usize = 13;

/// An alphabet of letters with positive integer weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedAlphabet {
    weights: Vec<u32>,
    names: Vec<String>,
    uniform_weight_one: bool,
}

impl WeightedAlphabet {
    pub fn new(names: Vec<String>, weights: Vec<u32>) -> Result<Arc<Self>> {
        assert_eq!(names.len(), weights.len());
        if names.len() > MAX_LETTERS {
            return Err(Error::AlphabetTooLarge(names.len()));
        }
        assert!(weights.iter().all(|&w| w >= 1), "letter weights must be positive");
        let uniform = weights.iter().all(|&w| w == 1);
        Ok(Arc::new(WeightedAlphabet { weights, names, uniform_weight_one: uniform }))
    }

    /// `k` letters of weight one, named x1..xk (or x, y for k = 2).
    pub fn uniform(k: usize) -> Arc<Self> {
        let names = if k == 2 {
            vec!["x".to_string(), "y".to_string()]
        } else {
            (1..=k).map(|i| format!("x{i}")).collect()
        };
        Self::new(names, vec![1; k]).expect("uniform alphabet in range")
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    #[inline]
    pub fn weight(&self, letter: u8) -> u32 {
        self.weights[letter as usize]
    }

    pub fn max_weight(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    pub fn name(&self, letter: u8) -> &str {
        &self.names[letter as usize]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    #[inline]
    pub fn mono_weight(&self, m: Mono) -> u32 {
        if self.uniform_weight_one {
            return m.len() as u32;
        }
        let mut w = 0;
        for i in 0..m.len() {
            w += self.weights[m.get(i) as usize];
        }
        w
    }

    /// Number of letters of each weight, indexed from weight 1.
    pub fn letter_counts_by_weight(&self) -> Vec<usize> {
        let max = self.max_weight() as usize;
        let mut counts = vec![0usize; max];
        for &w in &self.weights {
            counts[w as usize - 1] += 1;
        }
        counts
    }

    pub fn mono_string(&self, m: Mono) -> String {
        if m.is_empty() {
            return "1".to_string();
        }
        (0..m.len()).map(|i| self.name(m.get(i)).to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Packed monomial: high byte = length, then 4 bits per letter from the top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(u64);

const LEN_SHIFT: u32 = 56;

impl Mono {
    pub const EMPTY: Mono = Mono(0);

    pub fn letter(l: u8) -> Mono {
        debug_assert!((l as usize) < MAX_LETTERS);
        Mono((1u64 << LEN_SHIFT) | ((l as u64) << (LEN_SHIFT - 4)))
    }

    pub fn from_slice(letters: &[u8]) -> Mono {
        assert!(letters.len() <= MAX_MONO_LEN, "monomial too long");
        let mut v = (letters.len() as u64) << LEN_SHIFT;
        for (i, &l) in letters.iter().enumerate() {
            debug_assert!((l as usize) < MAX_LETTERS);
            v |= (l as u64) << (LEN_SHIFT - 4 - 4 * i as u32);
        }
        Mono(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        (self.0 >> LEN_SHIFT) as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        debug_assert!(i < self.len());
        ((self.0 >> (LEN_SHIFT - 4 - 4 * i as u32)) & 0xF) as u8
    }

    /// Concatenation; panics if the result exceeds the supported length.
    #[inline]
    pub fn concat(&self, other: Mono) -> Mono {
        let l1 = self.len();
        let l2 = other.len();
        assert!(l1 + l2 <= MAX_MONO_LEN, "monomial length overflow");
        let letters1 = self.0 & !(0xFFu64 << LEN_SHIFT);
        let letters2 = other.0 & !(0xFFu64 << LEN_SHIFT);
        Mono((((l1 + l2) as u64) << LEN_SHIFT) | letters1 | (letters2 >> (4 * l1 as u32)))
    }

    pub fn append(&self, l: u8) -> Mono {
        self.concat(Mono::letter(l))
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// Split into (prefix of length `k`, rest).
    pub fn split_at(&self, k: usize) -> (Mono, Mono) {
        let v = self.to_vec();
        (Mono::from_slice(&v[..k]), Mono::from_slice(&v[k..]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_roundtrip() {
        let m = Mono::from_slice(&[0, 3, 1, 14]);
        assert_eq!(m.len(), 4);
        assert_eq!(m.to_vec(), vec![0, 3, 1, 14]);
        let (a, b) = m.split_at(2);
        assert_eq!(a.to_vec(), vec![0, 3]);
        assert_eq!(b.to_vec(), vec![1, 14]);
        assert_eq!(a.concat(b), m);
    }

    #[test]
    fn order_is_length_then_lex() {
        let a = Mono::from_slice(&[1]);
        let b = Mono::from_slice(&[0, 1]);
        let c = Mono::from_slice(&[1, 0]);
        assert!(a < b, "shorter words come first");
        assert!(b < c, "same length compares lexicographically");
        assert!(Mono::EMPTY < a);
    }

    #[test]
    fn weights() {
        let alph = WeightedAlphabet::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![1, 1, 2],
        )
        .unwrap();
        let m = Mono::from_slice(&[0, 2, 1]);
        assert_eq!(alph.mono_weight(m), 4);
        assert_eq!(alph.letter_counts_by_weight(), vec![2, 1]);
        assert_eq!(alph.mono_string(m), "a.c.b");
    }
}

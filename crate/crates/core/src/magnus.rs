//! The Magnus expansion and the weight filtration it computes.
//!
//! Each free generator maps to `1 + X` for its letter; an inverse letter
//! contributes the truncated alternating geometric series. The depth of a
//! word is the smallest weight of a nonconstant term of its expansion, and
//! the homogeneous part in that weight is its graded leading term (always a
//! Lie element of the free Lie algebra).

use crate::alphabet::WeightedAlphabet;
use crate::error::{Error, Result};
use crate::tensor::TensorPoly;
use crate::word::Word;
use std::sync::Arc;

/// Expansion of a reduced word at truncation weight `trunc`.
pub fn magnus_expand(
    alphabet: &Arc<WeightedAlphabet>,
    w: &Word,
    trunc: u32,
) -> Result<TensorPoly> {
    if trunc < alphabet.max_weight() {
        return Err(Error::TruncationTooSmall { bound: trunc, weight: alphabet.max_weight() });
    }
    if trunc as usize > crate::alphabet::MAX_MONO_LEN {
        return Err(Error::TruncationTooLarge(trunc));
    }
    let mut p = TensorPoly::one(alphabet.clone(), trunc);
    for l in w.letters() {
        let letter = l.gen as u8;
        assert!((l.gen as usize) < alphabet.len(), "letter outside the alphabet");
        if !l.inv {
            p = p.mul_one_plus_letter(letter, 1);
        } else {
            // p * (1 - X + X^2 - ...): accumulate p * X^k one power at a time
            let mut acc = p.clone();
            let mut power = p;
            let w_letter = alphabet.weight(letter);
            let mut k = 1;
            while k * w_letter <= trunc {
                power = power.mul_letter(letter);
                if power.is_zero() {
                    break;
                }
                if k % 2 == 1 {
                    acc.sub_assign(&power);
                } else {
                    acc.add_assign(&power);
                }
                k += 1;
            }
            p = acc;
        }
    }
    Ok(p)
}

/// The outcome of a depth computation at a finite truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Depth {
    /// The word lies in `I^m` but not `I^{m+1}`; carries the homogeneous
    /// leading term of weight `m`.
    Finite { m: u32, leading: TensorPoly },
    /// All nonconstant terms vanish up to the truncation bound: depth
    /// exceeds the bound (or the element is trivial).
    DeeperThan(u32),
}

impl Depth {
    pub fn finite(&self) -> Option<(u32, &TensorPoly)> {
        match self {
            Depth::Finite { m, leading } => Some((*m, leading)),
            Depth::DeeperThan(_) => None,
        }
    }
}

/// Filtration depth of a reduced nonempty word. The identity word is an
/// error (its depth is infinite and the leading term undefined).
pub fn filtration_depth(
    alphabet: &Arc<WeightedAlphabet>,
    w: &Word,
    trunc: u32,
) -> Result<Depth> {
    if w.is_identity() {
        return Err(Error::IdentityWord);
    }
    let p = magnus_expand(alphabet, w, trunc)?;
    Ok(depth_of_expansion(&p, trunc))
}

/// Depth data read off an existing expansion.
pub fn depth_of_expansion(p: &TensorPoly, trunc: u32) -> Depth {
    match p.min_nonconstant_weight() {
        Some(m) => Depth::Finite { m, leading: p.homogeneous_part(m) },
        None => Depth::DeeperThan(trunc),
    }
}

//! Surface group presentations.
//!
//! The fundamental group of a genus-`g` surface with `n` punctures is
//! presented by generators `a_1..a_g, b_1..b_g, c_1..c_n` and the single
//! relator `R = prod [a_i, b_i] * prod c_j` (commutator `x^-1 y^-1 x y`).
//! For `n >= 1` the group is free of rank `2g + n - 1`: we take
//! `a_1..b_g, c_1..c_{n-1}` as the free basis and treat `c_n` as the derived
//! generator `c_n = (prod [a_i,b_i] * prod_{j<n} c_j)^-1`.

use crate::alphabet::WeightedAlphabet;
use crate::error::{Error, Result};
use crate::word::Word;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfacePresentation {
    genus: usize,
    punctures: usize,
    hyperbolic: bool,
}

/// A generator token: either one of the free basis generators or the
/// derived puncture generator `c_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenRef {
    Free(u16),
    DerivedC,
}

impl SurfacePresentation {
    /// Builds a presentation. Hyperbolic surfaces (`2g - 2 + n > 0`) and the
    /// closed torus `(1, 0)` are supported; the torus carries
    /// `is_hyperbolic() == false` and exists so that closed-case sanity
    /// checks and the graded Dehn-Nielsen comparison have a genus-1 target.
    pub fn new(genus: usize, punctures: usize) -> Result<Arc<Self>> {
        let chi = 2 * genus as i64 - 2 + punctures as i64;
        let hyperbolic = chi > 0;
        if !hyperbolic && !(genus >= 1 && punctures == 0) {
            return Err(Error::NotHyperbolic(chi));
        }
        Ok(Arc::new(SurfacePresentation { genus, punctures, hyperbolic }))
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.hyperbolic
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn punctures(&self) -> usize {
        self.punctures
    }

    pub fn is_closed(&self) -> bool {
        self.punctures == 0
    }

    /// Rank of the underlying free group (for `n >= 1`), or the number of
    /// free-basis generators `a_1..b_g` in the one-relator case.
    pub fn free_rank(&self) -> usize {
        2 * self.genus + self.punctures.saturating_sub(1)
    }

    /// Weight of a free-basis generator: 1 for `a_i`/`b_i`, 2 for `c_j`.
    pub fn weight(&self, gen: u16) -> u32 {
        if (gen as usize) < 2 * self.genus {
            1
        } else {
            2
        }
    }

    pub fn gen_name(&self, gen: u16) -> String {
        let g = self.genus;
        let i = gen as usize;
        if i < g {
            format!("a{}", i + 1)
        } else if i < 2 * g {
            format!("b{}", i - g + 1)
        } else {
            format!("c{}", i - 2 * g + 1)
        }
    }

    pub fn a(&self, i: usize) -> u16 {
        assert!((1..=self.genus).contains(&i));
        (i - 1) as u16
    }

    pub fn b(&self, i: usize) -> u16 {
        assert!((1..=self.genus).contains(&i));
        (self.genus + i - 1) as u16
    }

    /// Free-basis index of `c_j` for `1 <= j <= n-1`.
    pub fn c(&self, j: usize) -> u16 {
        assert!(self.punctures >= 1 && (1..self.punctures).contains(&j));
        (2 * self.genus + j - 1) as u16
    }

    /// Resolves a textual generator token (`a2`, `b1`, `c3`).
    pub fn resolve_token(&self, tok: &str) -> Result<GenRef> {
        let (kind, idx_str) = tok.split_at(1);
        let idx: usize = idx_str
            .parse()
            .map_err(|_| Error::Invalid(format!("bad generator token `{tok}`")))?;
        match kind {
            "a" if (1..=self.genus).contains(&idx) => Ok(GenRef::Free(self.a(idx))),
            "b" if (1..=self.genus).contains(&idx) => Ok(GenRef::Free(self.b(idx))),
            "c" if self.punctures >= 1 && (1..self.punctures).contains(&idx) => {
                Ok(GenRef::Free(self.c(idx)))
            }
            "c" if self.punctures >= 1 && idx == self.punctures => Ok(GenRef::DerivedC),
            "a" | "b" => Err(Error::GeneratorOutOfRange {
                kind: kind.chars().next().unwrap(),
                index: idx,
                max: self.genus,
            }),
            "c" => Err(Error::GeneratorOutOfRange { kind: 'c', index: idx, max: self.punctures }),
            _ => Err(Error::Invalid(format!("unknown generator `{tok}`"))),
        }
    }

    /// The word for `c_n` in the free basis:
    /// `c_n = (prod_i [a_i, b_i] * prod_{j<n} c_j)^-1`.
    pub fn derived_c_word(&self) -> Word {
        assert!(self.punctures >= 1, "derived generator only exists for n >= 1");
        self.partial_relator().inverse()
    }

    /// `prod_i [a_i, b_i] * prod_{j<n} c_j` over the free basis.
    fn partial_relator(&self) -> Word {
        let mut r = Word::identity();
        for i in 1..=self.genus {
            let com = Word::generator(self.a(i)).commutator(&Word::generator(self.b(i)));
            r = r.mul(&com);
        }
        for j in 1..self.punctures {
            r = r.mul(&Word::generator(self.c(j)));
        }
        r
    }

    /// The word of the puncture generator `c_j` (`1 <= j <= n`) in the free
    /// basis; `c_n` expands to the derived word.
    pub fn c_word(&self, j: usize) -> Word {
        assert!(self.punctures >= 1 && (1..=self.punctures).contains(&j));
        if j < self.punctures {
            Word::generator(self.c(j))
        } else {
            self.derived_c_word()
        }
    }

    /// The closed-surface relator `prod_i [a_i, b_i]` (only meaningful as a
    /// relator when `n = 0`, but usable as a word for any surface).
    pub fn closed_relator(&self) -> Word {
        let mut r = Word::identity();
        for i in 1..=self.genus {
            r = r.mul(&Word::generator(self.a(i)).commutator(&Word::generator(self.b(i))));
        }
        r
    }

    /// Expands a token word to the free basis, substituting the derived
    /// generator.
    pub fn word_from_refs(&self, refs: &[(GenRef, i64)]) -> Word {
        let mut w = Word::identity();
        for &(r, e) in refs {
            let base = match r {
                GenRef::Free(g) => Word::generator(g),
                GenRef::DerivedC => self.derived_c_word(),
            };
            w = w.mul(&base.pow(e));
        }
        w
    }

    /// Letters of the weighted alphabet for the graded Lie algebra: one
    /// letter per free generator, weights as in [`Self::weight`].
    pub fn alphabet(&self) -> Result<Arc<WeightedAlphabet>> {
        let n = self.free_rank();
        let names = (0..n as u16).map(|g| self.gen_name(g)).collect();
        let weights = (0..n as u16).map(|g| self.weight(g)).collect();
        WeightedAlphabet::new(names, weights)
    }

    pub fn symplectic_form_dim(&self) -> usize {
        2 * self.genus
    }
}

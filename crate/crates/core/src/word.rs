//! Freely reduced words in a free group.
//!
//! Generators are abstract indices; [`crate::surface`] assigns them names.
//! Words are kept reduced at all times. Throughout the crate the group
//! commutator is `[u, v] = u^-1 v^-1 u v`; this is the convention under
//! which the shipped mapping-class generator tables preserve the surface
//! relator (see [`crate::builtin`]).

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: u16,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: u16, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl std::fmt::Debug for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| format!("g{}{}", l.gen, if l.inv { "'" } else { "" }))
            .collect();
        write!(f, "{}", parts.join("."))
    }
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn generator(gen: u16) -> Self {
        Word { letters: vec![Letter::new(gen, false)] }
    }

    pub fn generator_inv(gen: u16) -> Self {
        Word { letters: vec![Letter::new(gen, true)] }
    }

    /// Builds a word, freely reducing as it goes.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last().is_some_and(|last| last.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    /// (generator, exponent) pairs with exponent +-1.
    pub fn from_pairs(pairs: &[(u16, i8)]) -> Self {
        Self::from_letters(pairs.iter().map(|&(g, e)| {
            assert!(e == 1 || e == -1);
            Letter::new(g, e < 0)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_generator(&self) -> Option<u16> {
        self.letters.iter().map(|l| l.gen).max()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn mul(&self, other: &Word) -> Word {
        Self::from_letters(self.letters.iter().copied().chain(other.letters.iter().copied()))
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `u * self * u^-1`.
    pub fn conjugated_by(&self, u: &Word) -> Word {
        u.mul(self).mul(&u.inverse())
    }

    /// Group commutator `self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Word) -> Word {
        self.inverse().mul(&other.inverse()).mul(self).mul(other)
    }

    /// Writes `self = conjugator * core * conjugator^-1` with a cyclically
    /// reduced core.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let mut core = self.letters.clone();
        let mut conj = Vec::new();
        while core.len() >= 2 && core[0].cancels(*core.last().unwrap()) {
            conj.push(core[0]);
            core.remove(0);
            core.pop();
        }
        (Word { letters: core }, Word { letters: conj })
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.letters.len() < 2 || !self.letters[0].cancels(*self.letters.last().unwrap())
    }

    /// True when `self` is a cyclic rotation of `other` (both as given, no
    /// reduction performed; intended for cyclically reduced words).
    pub fn is_rotation_of(&self, other: &Word) -> bool {
        self.rotation_offset(other).is_some()
    }

    /// If `self = rot_k(other)`, returns some such `k`.
    pub fn rotation_offset(&self, other: &Word) -> Option<usize> {
        if self.len() != other.len() {
            return None;
        }
        if self.is_empty() {
            return Some(0);
        }
        let doubled: Vec<Letter> =
            other.letters.iter().chain(other.letters.iter()).copied().collect();
        (0..other.len()).find(|&k| doubled[k..k + self.len()] == self.letters[..])
    }

    /// Rotation by `k`: letters `k..` followed by letters `..k`.
    pub fn rotate(&self, k: usize) -> Word {
        let n = self.len();
        if n == 0 {
            return Word::identity();
        }
        let k = k % n;
        Word::from_letters(self.letters[k..].iter().chain(self.letters[..k].iter()).copied())
    }

    /// Prefix of length `k` (not reduced further; prefixes of reduced words
    /// are reduced).
    pub fn prefix(&self, k: usize) -> Word {
        Word { letters: self.letters[..k].to_vec() }
    }

    pub fn ends_with(&self, suffix: &Word) -> bool {
        self.len() >= suffix.len() && self.letters[self.len() - suffix.len()..] == suffix.letters[..]
    }

    pub fn strip_suffix(&self, suffix: &Word) -> Option<Word> {
        if self.ends_with(suffix) {
            Some(Word { letters: self.letters[..self.len() - suffix.len()].to_vec() })
        } else {
            None
        }
    }
}

/// Decides whether `w` is conjugate to a nonzero power of `base` and returns
/// the witness: `w = conj * base^e * conj^-1`. `base` must be cyclically
/// reduced and nonempty.
pub fn conjugate_to_power(w: &Word, base: &Word) -> Option<(Word, i64)> {
    assert!(!base.is_empty() && base.is_cyclically_reduced());
    let (core, u) = w.cyclically_reduce();
    if core.is_empty() || core.len() % base.len() != 0 {
        return None;
    }
    let k = (core.len() / base.len()) as i64;
    for e in [k, -k] {
        let target = base.pow(e);
        if let Some(r) = core.rotation_offset(&target) {
            // rot_r(t) = prefix^-1 * t * prefix
            let prefix = target.prefix(r);
            let mut conj = u.mul(&prefix.inverse());
            // canonical witness: drop trailing powers of base
            loop {
                if let Some(s) = conj.strip_suffix(base) {
                    conj = s;
                } else if let Some(s) = conj.strip_suffix(&base.inverse()) {
                    conj = s;
                } else {
                    break;
                }
            }
            debug_assert_eq!(base.pow(e).conjugated_by(&conj), *w);
            return Some((conj, e));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(pairs: &[(u16, i8)]) -> Word {
        Word::from_pairs(pairs)
    }

    #[test]
    fn free_reduction() {
        // a a^-1 b -> b
        assert_eq!(w(&[(0, 1), (0, -1), (1, 1)]), w(&[(1, 1)]));
        // empty stays empty
        assert_eq!(Word::identity(), w(&[]));
        // a b b^-1 a^-1 c -> c
        assert_eq!(w(&[(0, 1), (1, 1), (1, -1), (0, -1), (2, 1)]), w(&[(2, 1)]));
    }

    #[test]
    fn reduction_is_idempotent_and_nonincreasing() {
        let v = w(&[(0, 1), (1, 1), (1, -1), (2, 1), (2, -1), (0, -1)]);
        let again = Word::from_letters(v.letters().iter().copied());
        assert_eq!(v, again);
        assert!(v.len() <= 6);
    }

    #[test]
    fn cyclic_reduction() {
        // a b a^-1 -> core b, conjugator a
        let (core, conj) = w(&[(0, 1), (1, 1), (0, -1)]).cyclically_reduce();
        assert_eq!(core, w(&[(1, 1)]));
        assert_eq!(conj, w(&[(0, 1)]));
        // commutator already cyclically reduced
        let comm = Word::generator(0).commutator(&Word::generator(1));
        let (core, conj) = comm.cyclically_reduce();
        assert_eq!(core, comm);
        assert!(conj.is_empty());
        // a^-1 c c a -> (c c, a^-1)
        let (core, conj) = w(&[(0, -1), (2, 1), (2, 1), (0, 1)]).cyclically_reduce();
        assert_eq!(core, w(&[(2, 1), (2, 1)]));
        assert_eq!(conj, w(&[(0, -1)]));
        assert_eq!(core.conjugated_by(&conj), w(&[(0, -1), (2, 1), (2, 1), (0, 1)]));
    }

    #[test]
    fn rotations() {
        let r = Word::generator(0).commutator(&Word::generator(1));
        for k in 0..r.len() {
            assert!(r.rotate(k).is_rotation_of(&r));
        }
        assert!(!Word::generator(0).is_rotation_of(&Word::generator(1)));
    }

    #[test]
    fn conjugate_power_witness() {
        let a = Word::generator(0);
        let c = Word::generator(2);
        // (a c^3 a^-1) is conjugate to c^3 with witness a
        let x = c.pow(3).conjugated_by(&a);
        let (conj, e) = conjugate_to_power(&x, &c).unwrap();
        assert_eq!(e, 3);
        assert_eq!(c.pow(e).conjugated_by(&conj), x);
        // witness is canonical: trailing powers of c are stripped
        let y = c.pow(-2).conjugated_by(&a.mul(&c.pow(5)));
        let (conj, e) = conjugate_to_power(&y, &c).unwrap();
        assert_eq!(e, -2);
        assert_eq!(conj, a);
        // a power of a different generator is not conjugate to a power of c
        assert!(conjugate_to_power(&a.pow(2), &c).is_none());
        // c * a is not conjugate to any power of c
        assert!(conjugate_to_power(&c.mul(&a), &c).is_none());
    }

    #[test]
    fn commutator_convention() {
        // [u, v] = u^-1 v^-1 u v
        let u = Word::generator(0);
        let v = Word::generator(1);
        let c = u.commutator(&v);
        assert_eq!(c, w(&[(0, -1), (1, -1), (0, 1), (1, 1)]));
        assert_eq!(c.inverse(), v.commutator(&u));
    }
}

use num_bigint::BigInt;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("presentation is not hyperbolic: 2g-2+n = {0} <= 0")]
    NotHyperbolic(i64),
    #[error("generator index {index} out of range for {kind} (max {max})")]
    GeneratorOutOfRange { kind: char, index: usize, max: usize },
    #[error("incompatible presentations: ({0},{1}) vs ({2},{3})")]
    PresentationMismatch(usize, usize, usize, usize),
    #[error("truncation bound {bound} is below the largest generator weight {weight}")]
    TruncationTooSmall { bound: u32, weight: u32 },
    #[error("word is the identity; filtration depth is infinite")]
    IdentityWord,
    #[error("map is not surjective: Stallings folding leaves a proper subgroup")]
    NotSurjective,
    #[error("relator image is not conjugate to the relator or its inverse")]
    RelatorNotPreserved,
    #[error("abelianization matrix is not invertible over the integers (det {0})")]
    NonUnimodularAbelianization(BigInt),
    #[error("matrix is not a symplectic similitude: M^T J M is not an integer multiple of J")]
    NotSimilitude,
    #[error("map is not certified as an automorphism")]
    NotCertified,
    #[error("map is not of braid type: c_{0} is not sent to a conjugate of a power of itself")]
    NotBraidType(usize),
    #[error("no inverse available for this map")]
    NoInverse,
    #[error("element does not lie in the integral span of the Lyndon basis (offending monomial {0})")]
    NotInLattice(String),
    #[error("witt_rank is only defined for the free case; use graded_rank on closed algebras")]
    WittRankOnClosed,
    #[error("closed-case quotient has torsion in degree {degree}: invariant factors {factors:?}")]
    QuotientTorsion { degree: u32, factors: Vec<BigInt> },
    #[error("operation requires a closed (n = 0) surface algebra")]
    NotClosed,
    #[error("operation requires a punctured (n >= 1) surface algebra")]
    NotPunctured,
    #[error("exactness verification failed at degree {0}: {1}")]
    ExactnessFailed(u32, String),
    #[error("derivation alphabet mismatch: expected exactly two generators")]
    WrongAlphabet,
    #[error("alphabet too large: at most 15 letters are supported (got {0})")]
    AlphabetTooLarge(usize),
    #[error("truncation weight {0} exceeds the supported maximum of 13")]
    TruncationTooLarge(u32),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("undeclared name `{0}` in relation")]
    UndeclaredName(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Computational algebra for the weight filtration on surface groups.
//!
//! The crate implements, over the integers:
//!
//! * free-group word arithmetic for surface presentations, endomorphisms
//!   given by generator images, and automorphism certification
//!   ([`word`], [`surface`], [`autmap`], [`builtin`]);
//! * weight-truncated noncommutative polynomials and the Magnus expansion,
//!   which measures the filtration depth of group elements ([`tensor`],
//!   [`magnus`]);
//! * graded free Lie algebras on weighted alphabets with Lyndon bases,
//!   Witt-formula ranks, and the closed-surface quotient by the relator
//!   ideal ([`lie`]);
//! * graded derivation algebras with the shift grading and Ihara's special
//!   derivations ([`derivation`]);
//! * the exact sequence machinery computing graded pieces of braid-type
//!   outer automorphism groups, Johnson-type classes of automorphisms, and
//!   the graded Dehn-Nielsen comparison map ([`outgraded`]);
//! * relation verification for mapping-class-group presentations in the
//!   outer automorphism group, degree by degree ([`relcheck`]).
//!
//! All linear algebra is exact, via Smith/Hermite normal forms over
//! arbitrary-precision integers ([`intmat`]).

pub mod alphabet;
pub mod autmap;
pub mod builtin;
pub mod cli;
pub mod derivation;
pub mod error;
pub mod intmat;
pub mod lie;
pub mod magnus;
pub mod outgraded;
pub mod presfile;
pub mod relcheck;
pub mod report;
pub mod surface;
pub mod tensor;
pub mod word;

pub use error::Error;

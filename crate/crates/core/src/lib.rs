//! Exact computations with the graded Weyl algebra of a weighted projective
//! stack: the semigroup of weights, twisted differential operators
//! `D / D(E - lambda)`, windowed Koszul homology, and the resulting
//! classification of twists.

pub mod linalg;
pub mod scalar;
pub mod semigroup;
pub mod twist;
pub mod weyl;
pub mod graded;
pub mod classify;
pub mod cli;

pub use scalar::{Fp, Poly, RatFunc, Scalar, Q};
pub use semigroup::WeightSystem;
pub use twist::TwistParameter;
pub use weyl::WeylElement;

//! Exact rational scalars, vectors and matrices.
//!
//! Every combinatorial or geometric result in this crate is decided with these
//! types. Floating point only proposes candidates (closest-point search) and
//! drives the Monte-Carlo estimators.

mod matrix;
mod rational;
mod scaled;
mod vector;

use thiserror::Error;

pub use matrix::{affine_rank, rank, solve, RMatrix};
pub use rational::Rational;
pub(crate) use rational::decimal_from_parts;
pub use scaled::{affine_rank_scaled, common_denominator, max_abs_numerator, rank_scaled, EchelonBasis, ScaledVec};
pub use vector::RVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("linear system has no solution")]
    NoSolution,
    #[error("linear system has no unique solution")]
    Underdetermined,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square")]
    NotSquare,
    #[error("rows have differing lengths")]
    Ragged,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("value does not fit the fixed-width representation")]
    Overflow,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

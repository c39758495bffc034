//! Sparse exact linear algebra over the rationals.
//!
//! Rank, kernel bases, and membership-in-image solves by exact sparse
//! Gaussian elimination with Markowitz-style minimum-fill pivoting.  An
//! optional modular fast path computes the rank modulo two fixed 62-bit
//! primes (a third on disagreement) and accepts the answer only after the
//! pivotal minor is confirmed nonsingular in exact arithmetic; any failure
//! falls back to exact elimination with a logged warning.

mod elim;
mod matrix;
mod modular;

pub use matrix::{ImageOutcome, SparseRationalMatrix};
pub use modular::MODULAR_PRIMES;

pub type Rational = num_rational::BigRational;

/// Largest number of stored nonzeros a matrix may carry.
pub const MAX_NNZ: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("entry ({0}, {1}) out of range for a {2}x{3} matrix")]
    IndexOutOfRange(usize, usize, usize, usize),
    #[error("matrix has {0} nonzeros, limit is {MAX_NNZ}")]
    TooManyNonzeros(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// How [`SparseRationalMatrix::rank`] computes its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMode {
    /// Exact elimination over the rationals.
    Exact,
    /// Modular elimination cross-checked by an exact pivotal minor;
    /// falls back to exact elimination when the check fails.
    ModularVerified,
}

//! Polynomial polyvector fields on `R^n` in exact rational arithmetic, the
//! odd Poisson (Schouten) bracket, the action of graph sums on tuples of
//! polyvector fields, and weight-truncated Chevalley–Eilenberg cochains.
//!
//! A polyvector field is encoded as a polynomial in commuting variables
//! `x1..xn` and anticommuting variables `xi1..xin`.  Graphs act through
//! tensor-product edge operators: a directed edge contracts a `xi`-derivative
//! at its source with an `x`-derivative at its target, and the external legs
//! of a graph with inputs and one output vertex fix the bidegrees that an
//! argument tuple must have for the term to survive.
//!
//! All coefficients are exact `Rational`s; nothing in this crate rounds.

mod action;
mod cochain;
mod poly;

pub use action::{gra_action, gra_term_action, xgra_action, xgra_term_action};
pub use cochain::{
    canonical_tuples_up_to_weight, chevalley_diff, coboundary_remark_check, euler_bracket_operator,
    wheel_cocycle, xgra_cochain, ChevalleyCochain, RemarkReport,
};
pub use poly::{
    contragredient, euler_field, gl_element, gl_matrix_of, monomials_up_to_weight,
    monomials_with_weight, schouten, Monomial, SuperPolynomial,
};

pub use graph_core::Rational;

/// Largest number of variable pairs `(x_i, xi_i)` a polynomial may use.
/// The anticommuting part of a monomial is stored as a bitmask, so this is
/// a hard representation limit, far above what exhaustive tests ever need.
pub const MAX_VARS: usize = 32;

/// Errors reported by polyvector-field operations.
#[derive(Debug, thiserror::Error)]
pub enum PolyError {
    /// Two operands live over different numbers of variables.
    #[error("variable-count mismatch: {left} vs {right}")]
    VarMismatch { left: usize, right: usize },

    /// More variable pairs requested than the representation supports.
    #[error("{0} variables requested, limit is {MAX_VARS}")]
    TooManyVars(usize),

    /// A graph of arity `expected` was applied to `got` arguments.
    #[error("arity mismatch: graph expects {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    /// A truncated graph sum was asked about a weight its bound cannot
    /// certify: terms dropped by the truncation could still contribute.
    #[error("truncation too small: bound {bound} cannot certify weight {weight} (needs at least {needed})")]
    TruncationTooSmall {
        bound: usize,
        weight: usize,
        needed: usize,
    },

    /// An argument tuple exceeds the weight cap a cochain was built with.
    #[error("argument weight {weight} exceeds the cochain weight cap {cap}")]
    WeightCapExceeded { weight: usize, cap: usize },

    /// An operation needed a homogeneity property the input lacks.
    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),

    /// Wheel cochains exist only for odd length.
    #[error("wheel length must be odd and positive, got {0}")]
    EvenWheel(usize),

    /// A polynomial in text form could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// An underlying graph-operad operation failed.
    #[error(transparent)]
    Operad(#[from] gra_operads::OperadError),

    /// An internal consistency check failed; indicates a bug in this crate.
    #[error("internal error: {0}")]
    Internal(String),
}

//! Graph cohomology workbench: bases, differentials, and exact cohomology
//! dimensions for complexes of undirected, directed, and external graphs.
//!
//! A *complex* here is a family of finite-dimensional vector spaces indexed
//! by a [`Bigrade`] (vertex count and edge count), spanned by isomorphism
//! classes of labelled graphs that survive the sign quotient, together with
//! a differential raising both indices by one.  All differentials come from
//! one bracket engine — insertion against a fixed two-vertex element — so
//! every sign in the library flows from the same edge-order conventions.

mod basis;
mod cache;
mod complexes;
mod diff;
mod elements;

pub use basis::{enumerate_basis, GradedBasis};
pub use cache::{Cache, CONVENTIONS_VERSION};
pub use complexes::{
    graph_degree, is_member, xgraph_component_count, Bigrade, ComplexId, ComplexKind,
};
pub use diff::{
    bigraded_cohomology_dim, bracket_external, bracket_plain, cohomology_dim, d_squared_check,
    decorations_for, delta1, detach_matrix, differential, mc_directed, mc_external, mc_plain,
    DSquaredReport,
};
pub use elements::{core_of, scaling_elements, wheel};

pub use exact_linalg::{ImageOutcome, RankMode, SparseRationalMatrix};
pub use graph_core::Rational;

use graph_core::GraphError;
use gra_operads::OperadError;
use thiserror::Error;

/// Hard cap on vertex count for undirected and directed plain complexes.
pub const PLAIN_VERTEX_CAP: usize = 8;
/// Hard cap on input-vertex count for external complexes.  One step of
/// headroom beyond the documented request envelope of 5 is included so that
/// square-zero checks at the envelope boundary can reach their targets.
pub const XGRAPH_INPUT_CAP: usize = 6;
/// Hard cap on edge count for every complex.
pub const EDGE_CAP: usize = 12;
/// Upper bound on raw candidate edge multisets a single basis enumeration
/// may scan before giving up with an explicit error.
pub const MAX_BASIS_CANDIDATES: u64 = 200_000_000;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error(transparent)]
    Linalg(#[from] exact_linalg::LinalgError),
    #[error("{0} vertices exceeds the enumeration cap of {1}")]
    TooManyVertices(usize, usize),
    #[error("{0} edges exceeds the enumeration cap of {1}")]
    TooManyEdges(usize, usize),
    #[error("basis enumeration would scan about {0} raw candidates (cap {MAX_BASIS_CANDIDATES})")]
    TooManyCandidates(u64),
    #[error("a wheel needs at least one rim vertex")]
    EmptyWheel,
    #[error("graph sum is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("cache I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed cache file {path}: {reason}")]
    BadCache { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, ComplexError>;

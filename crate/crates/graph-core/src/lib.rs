//! Signed, edge-ordered graphs with exact canonical forms.
//!
//! A graph is stored as an ordered list of endpoint pairs; the position of an
//! edge in that list is its label.  Relabelling edges acts with a Koszul sign:
//! transposing two odd edges flips the sign, even edges commute freely.  For
//! plain (un)directed graphs every edge is odd; callers working with richer
//! edge kinds supply their own parity rule.
//!
//! The canonical form of a graph is the lexicographically least sorted edge
//! list over all admissible vertex relabellings, together with the sign
//! relating the input ordering to it.  A graph is *zero by symmetry* when some
//! automorphism induces an odd permutation of its edges; such graphs vanish
//! identically in any sign-graded linear combination.

mod canon;
mod format;
mod graph;
mod rat;
mod sum;

pub use canon::{automorphism_signs, canonicalize, canonicalize_with, CanonOptions};
pub use format::{parse_graph_line, print_graph_line, GraphKindTag};
pub use graph::{CanonicalGraph, EdgeList, RawGraph, SignedGraph};
pub use rat::{format_rational, parse_rational, rat_int, Rational};
pub use sum::GraphSum;

/// Hard limits for the canonical-form search.  These are engine limits, not
/// enumeration budgets; exceeding them is reported as an explicit error rather
/// than silently truncating the search.
pub const MAX_VERTICES: usize = 12;
pub const MAX_EDGES: usize = 32;

/// Upper bound on the number of vertex orderings examined per canonicalization.
pub const MAX_CANON_ORDERINGS: u64 = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph has {0} vertices, limit is {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("graph has {0} edges, limit is {MAX_EDGES}")]
    TooManyEdges(usize),
    #[error("edge ({0}, {1}) out of range for {2} vertices")]
    BadEndpoint(u8, u8, usize),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("cannot mix directed and undirected graphs in one sum")]
    KindMismatch,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GraphError>;

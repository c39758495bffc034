//! Operadic structure on graphs: vertex insertion for plain (di)graphs,
//! end-gluing composition for graphs with an external vertex, the
//! orientation-sum map between them, and the series elements built from
//! external edges.
//!
//! Three kinds of linear combinations appear:
//! * plain undirected graph sums (insertion composes by reconnecting edges
//!   of the deleted vertex in all ways),
//! * plain directed graph sums (same insertion, directions kept),
//! * external graph sums ([`XGraphSum`]): directed graphs with a
//!   distinguished vertex `0`, composed by bijectively gluing the edge ends
//!   dangling from the deleted input against those dangling from the other
//!   factor's external vertex.

mod gra;
mod xcompose;
mod xgraph;

pub use gra::{compose_gra, compose_raw, lie_generator, orient, orient_raw};
pub use xcompose::{compose_xgra, compose_xgra_raw, dgra_to_xgra, i_element, insert_dgra_raw};
pub use xgraph::{
    canonicalize_xgraph, xgraph_degree, xgraph_edge_counts, xgraph_is_odd_edge, xgraph_options,
    XGraphSum,
};

use graph_core::GraphError;

/// Bound on reconnection/gluing enumerations per composed pair.
pub const MAX_COMPOSITION_TERMS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OperadError {
    #[error("insertion slot {0} out of range 1..={1}")]
    SlotOutOfRange(usize, usize),
    #[error("expected an {0} graph sum")]
    WrongKind(&'static str),
    #[error("graph sum mixes arities: {0} and {1}")]
    MixedArity(usize, usize),
    #[error("composition would close a loop with no remaining vertex")]
    ClosedLoop,
    #[error("truncation bounds too tight: no edge count of the result is complete")]
    TruncationTooTight,
    #[error("composition would expand into more than {MAX_COMPOSITION_TERMS} terms")]
    TooManyTerms,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Result<T> = std::result::Result<T, OperadError>;

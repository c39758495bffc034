use graph_core::{
    canonicalize_with, CanonOptions, CanonicalGraph, GraphSum, RawGraph, Rational, SignedGraph,
};

use crate::{OperadError, Result};

/// Koszul parity rule for graphs with external vertex 0: edges between
/// inputs (degree −1) and loops at the external vertex (degree +1) are odd;
/// edges tying an input to the external vertex (degree 0) are even.
pub fn xgraph_is_odd_edge(a: u8, b: u8) -> bool {
    (a > 0 && b > 0) || (a == 0 && b == 0)
}

/// Canonical-form options for external graphs: vertex 0 is pinned, edge
/// parities follow [`xgraph_is_odd_edge`].
pub fn xgraph_options() -> CanonOptions<'static> {
    CanonOptions { fixed_prefix: 1, edge_is_odd: &xgraph_is_odd_edge }
}

pub fn canonicalize_xgraph(g: &RawGraph) -> graph_core::Result<SignedGraph> {
    canonicalize_with(g, &xgraph_options())
}

/// Edge counts by kind: (between inputs, input↔external, loops at external).
pub fn xgraph_edge_counts(g: &RawGraph) -> (usize, usize, usize) {
    let mut counts = (0, 0, 0);
    for &(a, b) in g.edges() {
        if a == 0 && b == 0 {
            counts.2 += 1;
        } else if a == 0 || b == 0 {
            counts.1 += 1;
        } else {
            counts.0 += 1;
        }
    }
    counts
}

/// Cohomological degree of an external graph on `n` inputs:
/// `2(n−1) − (edges between inputs) + (loops at the external vertex)`.
pub fn xgraph_degree(g: &RawGraph) -> i64 {
    let n = g.n_vertices() as i64 - 1;
    let (k1, _, k3) = xgraph_edge_counts(g);
    2 * (n - 1) - k1 as i64 + k3 as i64
}

/// A linear combination of canonical external graphs of one arity, optionally
/// truncated: when `bound` is set, the sum is complete for every term with at
/// most that many edges and terms above the bound are dropped on entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XGraphSum {
    sum: GraphSum,
    n_inputs: usize,
    bound: Option<usize>,
}

impl XGraphSum {
    pub fn new(n_inputs: usize, bound: Option<usize>) -> Self {
        XGraphSum { sum: GraphSum::new(), n_inputs, bound }
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    /// The total-edge count up to which the sum is complete; `None` for an
    /// exact (finite, untruncated) element.
    pub fn bound(&self) -> Option<usize> {
        self.bound
    }

    pub fn is_zero(&self) -> bool {
        self.sum.is_zero()
    }

    pub fn len(&self) -> usize {
        self.sum.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sum.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalGraph, &Rational)> {
        self.sum.iter()
    }

    pub fn coeff(&self, g: &CanonicalGraph) -> Rational {
        self.sum.coeff(g)
    }

    pub fn terms(&self) -> &GraphSum {
        &self.sum
    }

    /// Canonicalizes and adds one raw external graph (directed, vertex 0
    /// external).  Terms beyond the truncation bound are dropped.
    pub fn add_raw(&mut self, g: &RawGraph, coeff: Rational) -> Result<()> {
        if !g.directed() || g.n_vertices() == 0 {
            return Err(OperadError::WrongKind("external (directed, vertex 0)"));
        }
        if g.n_vertices() != self.n_inputs + 1 {
            return Err(OperadError::MixedArity(self.n_inputs + 1, g.n_vertices()));
        }
        if self.bound.is_some_and(|b| g.n_edges() > b) {
            return Ok(());
        }
        self.sum.add_raw_with(g, coeff, &xgraph_options())?;
        Ok(())
    }

    pub fn add_sum(&mut self, other: &XGraphSum) -> Result<()> {
        if other.n_inputs != self.n_inputs {
            return Err(OperadError::MixedArity(self.n_inputs + 1, other.n_inputs + 1));
        }
        self.bound = match (self.bound, other.bound) {
            (None, b) | (b, None) => b,
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        for (g, c) in other.iter() {
            if self.bound.is_some_and(|b| g.n_edges() > b) {
                continue;
            }
            self.sum.add_canonical(g.clone(), c.clone());
        }
        self.truncate_to_bound();
        Ok(())
    }

    pub fn scale(&mut self, factor: &Rational) {
        self.sum.scale(factor);
    }

    pub fn negated(&self) -> XGraphSum {
        XGraphSum { sum: self.sum.negated(), n_inputs: self.n_inputs, bound: self.bound }
    }

    /// Lowers the truncation bound, dropping terms above it.
    pub fn truncate(&mut self, bound: usize) {
        self.bound = Some(match self.bound {
            None => bound,
            Some(b) => b.min(bound),
        });
        self.truncate_to_bound();
    }

    fn truncate_to_bound(&mut self) {
        if let Some(b) = self.bound {
            let keep: Vec<_> = self
                .sum
                .iter()
                .filter(|(g, _)| g.n_edges() <= b)
                .map(|(g, c)| (g.clone(), c.clone()))
                .collect();
            self.sum = keep.into_iter().collect();
        }
    }

    /// Largest edge count among stored terms (0 when empty).
    pub fn max_edges(&self) -> usize {
        self.iter().map(|(g, _)| g.n_edges()).max().unwrap_or(0)
    }

    /// Largest count of external-vertex loops among stored terms.
    pub fn max_external_loops(&self) -> usize {
        self.iter().map(|(g, _)| xgraph_edge_counts(g).2).max().unwrap_or(0)
    }
}

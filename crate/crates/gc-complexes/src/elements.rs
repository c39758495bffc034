use graph_core::{rat_int, CanonicalGraph, EdgeList, GraphSum, RawGraph, Rational};
use gra_operads::{canonicalize_xgraph, i_element, orient_raw, OperadError, XGraphSum};
use num_traits::One;

use crate::{ComplexError, Result};

fn factorial(n: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 1..=n as i64 {
        acc *= Rational::from_integer(i.into());
    }
    acc
}

/// The cycle on `n` rim vertices as a plain graph class: undirected when
/// `directed` is false, otherwise the sum over all edge orientations.
/// Cycles killed by an odd symmetry — every even length, and the odd
/// lengths whose reflection permutes the edges oddly — come back as the
/// zero sum; only lengths `1, 5, 9, …` survive.
pub fn wheel(n: usize, directed: bool) -> Result<GraphSum> {
    if n == 0 {
        return Err(ComplexError::EmptyWheel);
    }
    let edges: EdgeList = (0..n).map(|i| (i as u8, ((i + 1) % n) as u8)).collect();
    let cycle = RawGraph::new(n, false, edges)?;
    let mut out = GraphSum::new();
    if directed {
        for t in orient_raw(&cycle).map_err(ComplexError::Operad)? {
            out.add_raw(&t, rat_int(1))?;
        }
    } else {
        out.add_raw(&cycle, rat_int(1))?;
    }
    Ok(out)
}

/// The scaling pair `(U, S)` on one input, truncated at `edge_bound` total
/// edges.  `U` weights the graph with `k` outgoing and `l` incoming
/// external edges by `(k+l)/(k!·l!)` for every `1 ≤ k+l ≤ edge_bound`;
/// `S = U − 2·I` shifts by twice the unit series, making the coefficient
/// law `(k+l−2)/(k!·l!)` including the bare vertex at `−2`.  `S` is killed
/// by the external differential through the truncation bound.
pub fn scaling_elements(edge_bound: usize) -> Result<(XGraphSum, XGraphSum)> {
    let mut u = XGraphSum::new(1, Some(edge_bound));
    for k in 0..=edge_bound {
        for l in 0..=(edge_bound - k) {
            if k + l == 0 {
                continue;
            }
            let mut edges: EdgeList = vec![(0, 1); k];
            edges.extend(std::iter::repeat((1, 0)).take(l));
            let g = RawGraph::new(2, true, edges)?;
            let coeff = Rational::from_integer(((k + l) as i64).into())
                / (factorial(k) * factorial(l));
            u.add_raw(&g, coeff)?;
        }
    }
    let mut s = u.clone();
    let mut minus_two_i = i_element(edge_bound);
    minus_two_i.scale(&rat_int(-2));
    s.add_sum(&minus_two_i).map_err(ComplexError::Operad)?;
    Ok((u, s))
}

/// The canonical class of what remains after repeatedly merging every
/// one-valent input into the external vertex.  Merging can create new
/// one-valent inputs and external tadpoles, so the reduction runs to its
/// fixed point.  Edge detachment within one bigrade never changes this
/// class.
pub fn core_of(g: &RawGraph) -> Result<CanonicalGraph> {
    if !g.directed() || g.n_vertices() == 0 {
        return Err(ComplexError::Operad(OperadError::WrongKind(
            "external (directed, with vertex 0)",
        )));
    }
    let mut cur = g.clone();
    loop {
        let n = cur.n_vertices();
        let Some(v) = (1..n as u8).find(|&v| cur.valence(v) == 1) else {
            break;
        };
        let renum = |w: u8| {
            if w == v {
                0
            } else if w > v {
                w - 1
            } else {
                w
            }
        };
        let edges: EdgeList =
            cur.edges().iter().map(|&(a, b)| (renum(a), renum(b))).collect();
        cur = RawGraph::new(n - 1, true, edges)?;
    }
    Ok(canonicalize_xgraph(&cur).map_err(ComplexError::Graph)?.graph)
}

//! Composition of external graphs by gluing dangling edge ends.
//!
//! Inserting `h` into input `j` of `g` deletes vertex `j` of `g` and the
//! external vertex of `h`.  Every `g`-edge end at `j` and every `h`-edge end
//! at the external vertex dangles; the composition sums over all ways of
//! fusing them bijectively, heads of `g`-edges against tails of `h`-edges
//! and vice versa.  Fused runs of edges become single edges of the result.

use num_bigint::BigInt;
use num_traits::One;

use graph_core::{EdgeList, GraphSum, RawGraph, Rational};

use crate::xgraph::{xgraph_edge_counts, xgraph_is_odd_edge, XGraphSum};
use crate::{OperadError, Result, MAX_COMPOSITION_TERMS};

fn factorial_u64(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

fn factorial_big(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * k)
}

fn inv_factorials(k: usize, l: usize) -> Rational {
    Rational::new(BigInt::one(), factorial_big(k) * factorial_big(l))
}

/// Steps `arr` to its lexicographic successor; returns `false` once the
/// last permutation has been passed.
fn next_permutation(arr: &mut [usize]) -> bool {
    if arr.len() < 2 {
        return false;
    }
    let mut i = arr.len() - 1;
    while i > 0 && arr[i - 1] >= arr[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut k = arr.len() - 1;
    while arr[k] <= arr[i - 1] {
        k -= 1;
    }
    arr.swap(i - 1, k);
    arr[i..].reverse();
    true
}

/// Dangling-end bookkeeping for one graph pair: edge indices listed in
/// label order, one entry per dangling end (a loop contributes to both of
/// its lists).
struct Ends {
    g_in: Vec<usize>,  // g-edges with head at the deleted input
    g_out: Vec<usize>, // g-edges with tail at the deleted input
    h_out: Vec<usize>, // h-edges with tail at the external vertex
    h_in: Vec<usize>,  // h-edges with head at the external vertex
}

fn collect_ends(g: &RawGraph, jj: u8, h: &RawGraph) -> Ends {
    let mut ends = Ends { g_in: vec![], g_out: vec![], h_out: vec![], h_in: vec![] };
    for (idx, &(a, b)) in g.edges().iter().enumerate() {
        if b == jj {
            ends.g_in.push(idx);
        }
        if a == jj {
            ends.g_out.push(idx);
        }
    }
    for (idx, &(a, b)) in h.edges().iter().enumerate() {
        if a == 0 {
            ends.h_out.push(idx);
        }
        if b == 0 {
            ends.h_in.push(idx);
        }
    }
    ends
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    G,
    H,
}

/// Builds the composite graph and its Koszul sign for one choice of gluing
/// bijections.  `alpha[t]` pairs the `t`-th dangling `g`-head with that
/// position of `ends.h_out`; `beta[t]` pairs the `t`-th dangling `g`-tail
/// with that position of `ends.h_in`.
fn glue_one(
    g: &RawGraph,
    jj: u8,
    h: &RawGraph,
    ends: &Ends,
    alpha: &[usize],
    beta: &[usize],
) -> Result<(RawGraph, i8)> {
    let kg = g.n_edges();
    let kh = h.n_edges();
    let n = h.n_vertices() as u8 - 1;
    let ren_g = |v: u8| if v == 0 || v < jj { v } else { v + n - 1 };
    let ren_h = |w: u8| jj + w - 1;

    // Position of each edge inside the end lists it participates in.
    let mut g_in_pos = vec![usize::MAX; kg];
    for (t, &e) in ends.g_in.iter().enumerate() {
        g_in_pos[e] = t;
    }
    let mut h_in_pos = vec![usize::MAX; kh];
    for (s, &e) in ends.h_in.iter().enumerate() {
        h_in_pos[e] = s;
    }
    let mut beta_inv = vec![usize::MAX; beta.len()];
    for (t, &s) in beta.iter().enumerate() {
        beta_inv[s] = t;
    }

    let mut visited_g = vec![false; kg];
    let mut visited_h = vec![false; kh];
    // One symbol per output edge: (anchor position, constituent base
    // positions in traversal order, endpoints).  Base positions: g-edges
    // keep their labels, h-edges follow at kg + label.
    let mut symbols: Vec<(usize, Vec<usize>, (u8, u8))> = Vec::new();

    // Fused runs start on any consumed edge whose tail survives and follow
    // edge directions through the glued ends until a head survives.
    let mut starts: Vec<(Side, usize, u8)> = Vec::new();
    for (idx, &(a, b)) in g.edges().iter().enumerate() {
        if b == jj && a != jj {
            starts.push((Side::G, idx, ren_g(a)));
        }
    }
    for (idx, &(a, b)) in h.edges().iter().enumerate() {
        if b == 0 && a != 0 {
            starts.push((Side::H, idx, ren_h(a)));
        }
    }
    for (side0, start, tail) in starts {
        let mut flat = Vec::new();
        let mut side = side0;
        let mut cur = start;
        let head = loop {
            match side {
                Side::G => {
                    visited_g[cur] = true;
                    flat.push(cur);
                    let (_, b) = g.edges()[cur];
                    if b == jj {
                        cur = ends.h_out[alpha[g_in_pos[cur]]];
                        side = Side::H;
                    } else {
                        break ren_g(b);
                    }
                }
                Side::H => {
                    visited_h[cur] = true;
                    flat.push(kg + cur);
                    let (_, b) = h.edges()[cur];
                    if b == 0 {
                        cur = ends.g_out[beta_inv[h_in_pos[cur]]];
                        side = Side::G;
                    } else {
                        break ren_h(b);
                    }
                }
            }
        };
        let anchor = *flat.iter().min().expect("nonempty run");
        symbols.push((anchor, flat, (tail, head)));
    }

    // A consumed edge not reached from any surviving tail lies on a cycle
    // of loops that fuses into an edge with no endpoints at all.
    for (idx, &(a, b)) in g.edges().iter().enumerate() {
        let consumed = a == jj || b == jj;
        if consumed && !visited_g[idx] {
            return Err(OperadError::ClosedLoop);
        }
        if !consumed {
            symbols.push((idx, vec![idx], (ren_g(a), ren_g(b))));
        }
    }
    for (idx, &(a, b)) in h.edges().iter().enumerate() {
        let consumed = a == 0 || b == 0;
        if consumed && !visited_h[idx] {
            return Err(OperadError::ClosedLoop);
        }
        if !consumed {
            symbols.push((kg + idx, vec![kg + idx], (ren_h(a), ren_h(b))));
        }
    }

    symbols.sort_unstable_by_key(|&(anchor, _, _)| anchor);

    // Koszul sign of rearranging the concatenated edge lists (g's before
    // h's) into the output order: inversions among odd edges only.
    let odd = |base: usize| {
        let (a, b) = if base < kg { g.edges()[base] } else { h.edges()[base - kg] };
        xgraph_is_odd_edge(a, b)
    };
    let flat_odd: Vec<usize> = symbols
        .iter()
        .flat_map(|(_, flat, _)| flat.iter().copied())
        .filter(|&base| odd(base))
        .collect();
    let mut inversions = 0usize;
    for i in 0..flat_odd.len() {
        for j in 0..i {
            if flat_odd[j] > flat_odd[i] {
                inversions += 1;
            }
        }
    }
    let sign = if inversions % 2 == 0 { 1 } else { -1 };

    let edges: EdgeList = symbols.iter().map(|&(_, _, e)| e).collect();
    let graph = RawGraph::new(g.n_vertices() + h.n_vertices() - 2, true, edges)?;
    Ok((graph, sign))
}

fn check_xgraph(g: &RawGraph) -> Result<()> {
    if !g.directed() || g.n_vertices() == 0 {
        return Err(OperadError::WrongKind("external (directed, with vertex 0)"));
    }
    Ok(())
}

/// All gluing terms, with signs, of inserting `h` into input `j`
/// (1 ≤ j ≤ number of inputs) of `g`.  Returns the empty sum when the
/// dangling-end counts do not match.
pub fn compose_xgra_raw(g: &RawGraph, j: usize, h: &RawGraph) -> Result<Vec<(RawGraph, i8)>> {
    check_xgraph(g)?;
    check_xgraph(h)?;
    let m = g.n_vertices() - 1;
    if j == 0 || j > m {
        return Err(OperadError::SlotOutOfRange(j, m));
    }
    let ends = collect_ends(g, j as u8, h);
    let p = ends.g_in.len();
    let q = ends.g_out.len();
    if p != ends.h_out.len() || q != ends.h_in.len() {
        return Ok(Vec::new());
    }
    let n_terms = factorial_u64(p).and_then(|a| factorial_u64(q).and_then(|b| a.checked_mul(b)));
    if n_terms.map_or(true, |t| t > MAX_COMPOSITION_TERMS) {
        return Err(OperadError::TooManyTerms);
    }

    let mut out = Vec::with_capacity(n_terms.unwrap_or(1) as usize);
    let mut alpha: Vec<usize> = (0..p).collect();
    loop {
        let mut beta: Vec<usize> = (0..q).collect();
        loop {
            out.push(glue_one(g, j as u8, h, &ends, &alpha, &beta)?);
            if !next_permutation(&mut beta) {
                break;
            }
        }
        if !next_permutation(&mut alpha) {
            break;
        }
    }
    Ok(out)
}

/// Truncation bound of a composition: the largest edge count for which the
/// result is complete given what each factor is complete up to.  Terms
/// missing from a truncated factor can only influence composite terms above
/// the returned bound.  `None` means the result is exact.
fn combined_bound(g: &XGraphSum, j: usize, h: &XGraphSum) -> Result<Option<usize>> {
    let mut limit: Option<i64> = None;
    let mut shrink = |c: i64| limit = Some(limit.map_or(c, |l| l.min(c)));

    // A term missing from `g` has more than bound(g) edges and composes with
    // a stored h-term into (missing count) + (h normals − h external loops).
    if let Some(b1) = g.bound() {
        if let Some(adj) = h
            .iter()
            .map(|(t, _)| {
                let (k1, _, k3) = xgraph_edge_counts(t);
                k1 as i64 - k3 as i64
            })
            .min()
        {
            shrink(b1 as i64 + adj);
        }
    }
    // A term missing from `h` composes with a stored g-term into
    // (missing count) + (g edges − g ends at input j).
    if let Some(b2) = h.bound() {
        if let Some(adj) = g
            .iter()
            .map(|(t, _)| t.n_edges() as i64 - t.valence(j as u8) as i64)
            .min()
        {
            shrink(b2 as i64 + adj);
        }
    }
    // Two missing terms compose into at least max(count, count) − 1 edges,
    // since a nonvanishing factor repeats no odd loop at the glued vertex.
    if let (Some(b1), Some(b2)) = (g.bound(), h.bound()) {
        shrink(b1.max(b2) as i64 - 1);
    }

    match limit {
        None => Ok(None),
        Some(l) if l < 0 => Err(OperadError::TruncationTooTight),
        Some(l) => Ok(Some(l as usize)),
    }
}

/// Gluing composition extended bilinearly over canonical terms, with the
/// truncation bound of the result derived from the factors' bounds.
///
/// As with plain insertion, a single fixed slot sees the stored
/// representatives; only slot-summed combinations are independent of the
/// choice of representative within each isomorphism class.
pub fn compose_xgra(g: &XGraphSum, j: usize, h: &XGraphSum) -> Result<XGraphSum> {
    let m = g.n_inputs();
    if j == 0 || j > m {
        return Err(OperadError::SlotOutOfRange(j, m));
    }
    let bound = combined_bound(g, j, h)?;
    let mut out = XGraphSum::new(m + h.n_inputs() - 1, bound);
    for (gg, cg) in g.iter() {
        for (hh, ch) in h.iter() {
            let coeff: Rational = cg * ch;
            for (term, sign) in compose_xgra_raw(gg.raw(), j, hh.raw())? {
                let signed = if sign < 0 { -coeff.clone() } else { coeff.clone() };
                out.add_raw(&term, signed)?;
            }
        }
    }
    Ok(out)
}

/// The unit series on one input, truncated: for every `k + l ≤ edge_bound`,
/// the graph with `k` edges from the external vertex to the input and `l`
/// edges back, with coefficient `1/(k!·l!)`.
pub fn i_element(edge_bound: usize) -> XGraphSum {
    let mut out = XGraphSum::new(1, Some(edge_bound));
    for k in 0..=edge_bound {
        for l in 0..=(edge_bound - k) {
            let mut edges: EdgeList = vec![(0, 1); k];
            edges.extend(std::iter::repeat((1, 0)).take(l));
            let g = RawGraph::new(2, true, edges).expect("two-vertex graph");
            out.add_raw(&g, inv_factorials(k, l)).expect("two-vertex graph");
        }
    }
    out
}

/// Inserts a plain directed graph into input `j` of the external graph `x`
/// by reconnection: deletes the input, attaches each of its edge ends to
/// every vertex of `g` in all combinations.  `x`'s edges keep their labels
/// and precede `g`'s.
pub fn insert_dgra_raw(x: &RawGraph, j: usize, g: &RawGraph) -> Result<Vec<RawGraph>> {
    check_xgraph(x)?;
    if !g.directed() {
        return Err(OperadError::WrongKind("directed"));
    }
    let m = x.n_vertices() - 1;
    if j == 0 || j > m {
        return Err(OperadError::SlotOutOfRange(j, m));
    }
    crate::gra::compose_raw(x, j, g)
}

/// The external-graph image of a plain directed graph sum: inserts each
/// term into the input of the unit series, i.e. decorates it with up to
/// `edge_bound` added external edges attached in all ways.
pub fn dgra_to_xgra(g: &GraphSum, edge_bound: usize) -> Result<XGraphSum> {
    let mut arity = None;
    for (t, _) in g.iter() {
        if !t.directed() {
            return Err(OperadError::WrongKind("directed"));
        }
        if !t.is_connected() {
            return Err(OperadError::WrongKind("connected directed"));
        }
        match arity {
            None => arity = Some(t.n_vertices()),
            Some(a) if a != t.n_vertices() => {
                return Err(OperadError::MixedArity(a, t.n_vertices()))
            }
            _ => {}
        }
    }
    let Some(n) = arity else {
        return Ok(XGraphSum::new(0, Some(edge_bound)));
    };
    let min_edges = g.iter().map(|(t, _)| t.n_edges()).min().expect("nonempty sum");
    let mut out = XGraphSum::new(n, Some(edge_bound + min_edges));
    for (t, c) in g.iter() {
        for k in 0..=edge_bound {
            for l in 0..=(edge_bound - k) {
                let mut edges: EdgeList = vec![(0, 1); k];
                edges.extend(std::iter::repeat((1, 0)).take(l));
                let unit_term = RawGraph::new(2, true, edges)?;
                let coeff = c * inv_factorials(k, l);
                for term in insert_dgra_raw(&unit_term, 1, t.raw())? {
                    out.add_raw(&term, coeff.clone())?;
                }
            }
        }
    }
    Ok(out)
}

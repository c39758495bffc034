use graph_core::{rat_int, EdgeList, GraphSum, RawGraph, Rational};

use crate::{OperadError, Result, MAX_COMPOSITION_TERMS};

/// The generator element: the single undirected edge on two vertices.
pub fn lie_generator() -> GraphSum {
    let g = RawGraph::new(2, false, vec![(0, 1)]).expect("tiny graph");
    let mut sum = GraphSum::new();
    sum.add_raw(&g, rat_int(1)).expect("tiny graph");
    sum
}

/// Inserts `h` into vertex `j` (0-based) of `g`: deletes the vertex, then
/// reconnects each edge end that pointed at it to every vertex of `h`, in
/// all combinations.  Vertices of `h` occupy the slots `j..j+n`; edges of
/// `g` keep their labels and precede the edges of `h`.
pub fn compose_raw(g: &RawGraph, j: usize, h: &RawGraph) -> Result<Vec<RawGraph>> {
    let m = g.n_vertices();
    let n = h.n_vertices();
    if j >= m {
        return Err(OperadError::SlotOutOfRange(j + 1, m));
    }
    let jj = j as u8;
    let renumber_g = |v: u8| if v < jj { v } else { v + n as u8 - 1 };
    let renumber_h = |w: u8| jj + w;

    // Ends of g's edges that touch the deleted vertex, in edge order; a
    // tadpole at j contributes both of its ends.
    let mut loose: Vec<(usize, bool)> = Vec::new(); // (edge index, is_source_end)
    for (idx, &(a, b)) in g.edges().iter().enumerate() {
        if a == jj {
            loose.push((idx, true));
        }
        if b == jj {
            loose.push((idx, false));
        }
    }

    let combinations = (n as u64).checked_pow(loose.len() as u32);
    if combinations.map_or(true, |c| c > MAX_COMPOSITION_TERMS) {
        return Err(OperadError::TooManyTerms);
    }

    let mut out = Vec::with_capacity(combinations.unwrap_or(1) as usize);
    let mut choice = vec![0u8; loose.len()];
    loop {
        let mut edges: EdgeList = Vec::with_capacity(g.n_edges() + h.n_edges());
        for (idx, &(a, b)) in g.edges().iter().enumerate() {
            let mut a2 = if a == jj { 0 } else { renumber_g(a) };
            let mut b2 = if b == jj { 0 } else { renumber_g(b) };
            for (slot, &(eidx, is_src)) in loose.iter().enumerate() {
                if eidx == idx {
                    let target = renumber_h(choice[slot]);
                    if is_src {
                        a2 = target;
                    } else {
                        b2 = target;
                    }
                }
            }
            edges.push((a2, b2));
        }
        for &(a, b) in h.edges() {
            edges.push((renumber_h(a), renumber_h(b)));
        }
        out.push(RawGraph::new(m + n - 1, g.directed(), edges)?);

        // Advance the mixed-radix counter over reconnection choices.
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(out);
            }
            choice[k] += 1;
            if (choice[k] as usize) < n {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn sole_arity(sum: &GraphSum) -> Result<Option<usize>> {
    let mut arity = None;
    for (g, _) in sum.iter() {
        match arity {
            None => arity = Some(g.n_vertices()),
            Some(a) if a != g.n_vertices() => {
                return Err(OperadError::MixedArity(a, g.n_vertices()))
            }
            _ => {}
        }
    }
    Ok(arity)
}

/// Operadic insertion at slot `j` (1-based), extended bilinearly over
/// canonical representatives and re-canonicalized.
///
/// Composition at a single fixed slot depends on the stored representatives:
/// a class that vanishes by symmetry still has labelled representatives with
/// nonzero single-slot composites.  Combinations summed over all slots (the
/// pre-Lie product and the brackets built from it) are class-independent.
pub fn compose_gra(g: &GraphSum, j: usize, h: &GraphSum) -> Result<GraphSum> {
    let m = sole_arity(g)?;
    sole_arity(h)?;
    if let Some(m) = m {
        if j == 0 || j > m {
            return Err(OperadError::SlotOutOfRange(j, m));
        }
    }
    let mut out = GraphSum::new();
    for (gg, cg) in g.iter() {
        for (hh, ch) in h.iter() {
            let coeff: Rational = cg * ch;
            for term in compose_raw(gg.raw(), j - 1, hh.raw())? {
                out.add_raw(&term, coeff.clone())?;
            }
        }
    }
    Ok(out)
}

/// All `2^k` ways of directing the edges of an undirected graph, keeping
/// edge labels in place.
pub fn orient_raw(g: &RawGraph) -> Result<Vec<RawGraph>> {
    if g.directed() {
        return Err(OperadError::WrongKind("undirected"));
    }
    let k = g.n_edges();
    if k >= 20 {
        return Err(OperadError::TooManyTerms);
    }
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0u32..(1 << k) {
        let edges: EdgeList = g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| if mask >> i & 1 == 1 { (b, a) } else { (a, b) })
            .collect();
        out.push(RawGraph::new(g.n_vertices(), true, edges)?);
    }
    Ok(out)
}

/// The orientation-sum map on sums: each term maps to the canonicalized sum
/// of all its orientations.
pub fn orient(sum: &GraphSum) -> Result<GraphSum> {
    let mut out = GraphSum::new();
    for (g, c) in sum.iter() {
        for term in orient_raw(g.raw())? {
            out.add_raw(&term, c.clone())?;
        }
    }
    Ok(out)
}

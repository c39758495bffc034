use std::collections::BTreeSet;

use graph_core::{canonicalize_with, CanonOptions, CanonicalGraph, EdgeList, RawGraph};
use gra_operads::xgraph_options;

use crate::{
    is_member, Bigrade, ComplexError, ComplexId, ComplexKind, Result, EDGE_CAP,
    MAX_BASIS_CANDIDATES, PLAIN_VERTEX_CAP, XGRAPH_INPUT_CAP,
};

/// A fully enumerated graded piece of a complex: the canonical
/// representatives of every isomorphism class that survives the sign
/// quotient, sorted by canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    pub complex: ComplexId,
    pub bigrade: Bigrade,
    graphs: Vec<CanonicalGraph>,
}

impl GradedBasis {
    pub(crate) fn from_sorted(
        complex: ComplexId,
        bigrade: Bigrade,
        graphs: Vec<CanonicalGraph>,
    ) -> GradedBasis {
        debug_assert!(graphs.windows(2).all(|w| w[0] < w[1]));
        GradedBasis { complex, bigrade, graphs }
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn graphs(&self) -> &[CanonicalGraph] {
        &self.graphs
    }

    /// Index of a canonical representative in the basis order.
    pub fn position(&self, g: &CanonicalGraph) -> Option<usize> {
        self.graphs.binary_search(g).ok()
    }
}

fn binom_saturating(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u64::MAX,
        };
    }
    acc
}

/// Collects raw candidates: canonicalizes, drops classes killed by an odd
/// automorphism, dedupes isomorphic candidates.
struct Collector<'a> {
    opts: CanonOptions<'a>,
    set: BTreeSet<CanonicalGraph>,
}

impl<'a> Collector<'a> {
    fn add(&mut self, g: &RawGraph) -> Result<()> {
        let sg = canonicalize_with(g, &self.opts)?;
        if !sg.zero {
            self.set.insert(sg.graph);
        }
        Ok(())
    }
}

/// Backtracking enumeration of all multisets of `k` edges over the
/// undirected symbol universe on `n` vertices, as non-decreasing edge
/// lists.  Pruning: a vertex's valence is fixed once the scan has passed
/// every symbol touching it, so a minimum-valence shortfall cuts the branch;
/// the total remaining shortfall can never exceed two per remaining edge;
/// and no vertex may exceed `max_valence`.
fn undirected_multisets(
    n: usize,
    k: usize,
    allow_tadpoles: bool,
    min_valence: usize,
    max_valence: usize,
    emit: &mut dyn FnMut(&EdgeList) -> Result<()>,
) -> Result<()> {
    if n == 0 {
        if k == 0 {
            return emit(&Vec::new());
        }
        return Ok(());
    }
    let mut symbols: Vec<(u8, u8)> = Vec::new();
    for a in 0..n as u8 {
        if allow_tadpoles {
            symbols.push((a, a));
        }
        for b in a + 1..n as u8 {
            symbols.push((a, b));
        }
    }
    // Vertices whose last containing symbol is at index i.
    let mut locks: Vec<Vec<u8>> = vec![Vec::new(); symbols.len()];
    for v in 0..n as u8 {
        if let Some(i) = symbols.iter().rposition(|&(a, b)| a == v || b == v) {
            locks[i].push(v);
        }
    }

    struct State<'e> {
        symbols: Vec<(u8, u8)>,
        locks: Vec<Vec<u8>>,
        min_valence: usize,
        max_valence: usize,
        valence: Vec<usize>,
        edges: EdgeList,
        emit: &'e mut dyn FnMut(&EdgeList) -> Result<()>,
    }

    impl State<'_> {
        fn go(&mut self, idx: usize, remaining: usize) -> Result<()> {
            if remaining == 0 {
                // All later symbols get multiplicity zero; their locked
                // vertices must already meet the valence floor.
                if self.min_valence > 0
                    && self.valence.iter().any(|&v| v < self.min_valence)
                {
                    return Ok(());
                }
                return (self.emit)(&self.edges);
            }
            if idx == self.symbols.len() {
                return Ok(());
            }
            let deficit: usize = self
                .valence
                .iter()
                .map(|&v| self.min_valence.saturating_sub(v))
                .sum();
            if deficit > 2 * remaining {
                return Ok(());
            }
            let (a, b) = self.symbols[idx];
            let bump = if a == b { 2 } else { 1 };
            for count in 0..=remaining {
                if count > 0 {
                    self.valence[a as usize] += bump;
                    if a != b {
                        self.valence[b as usize] += 1;
                    }
                    self.edges.push((a, b));
                    if self.valence[a as usize] > self.max_valence
                        || self.valence[b as usize] > self.max_valence
                    {
                        // Undo up to `count` and stop raising this symbol.
                        for _ in 0..count {
                            self.edges.pop();
                        }
                        self.valence[a as usize] -= bump * count;
                        if a != b {
                            self.valence[b as usize] -= count;
                        }
                        return Ok(());
                    }
                }
                let locked_ok = self.locks[idx]
                    .iter()
                    .all(|&v| self.valence[v as usize] >= self.min_valence);
                if locked_ok {
                    self.go(idx + 1, remaining - count)?;
                }
            }
            for _ in 0..remaining {
                self.edges.pop();
            }
            self.valence[a as usize] -= bump * remaining;
            if a != b {
                self.valence[b as usize] -= remaining;
            }
            Ok(())
        }
    }

    let mut st = State {
        symbols,
        locks,
        min_valence,
        max_valence,
        valence: vec![0; n],
        edges: Vec::with_capacity(k),
        emit,
    };
    st.go(0, k)
}

/// All assignments of a direction to each edge of an undirected edge list
/// (tadpoles have only one).
fn orientations(edges: &EdgeList, emit: &mut dyn FnMut(&EdgeList) -> Result<()>) -> Result<()> {
    let flippable: Vec<usize> =
        edges.iter().enumerate().filter(|(_, &(a, b))| a != b).map(|(i, _)| i).collect();
    let mut directed = edges.clone();
    let count = 1u64 << flippable.len();
    for mask in 0..count {
        for (bit, &i) in flippable.iter().enumerate() {
            let (a, b) = edges[i];
            directed[i] = if mask >> bit & 1 == 0 { (a, b) } else { (b, a) };
        }
        emit(&directed)?;
    }
    Ok(())
}

/// All multisets of `r` items from `symbols`, appended to `prefix`.
fn distribute(
    symbols: &[(u8, u8)],
    start: usize,
    r: usize,
    prefix: &mut EdgeList,
    emit: &mut dyn FnMut(&EdgeList) -> Result<()>,
) -> Result<()> {
    if r == 0 {
        return emit(prefix);
    }
    if start == symbols.len() {
        return Ok(());
    }
    for count in 0..=r {
        prefix.extend(std::iter::repeat(symbols[start]).take(count));
        distribute(symbols, start + 1, r - count, prefix, emit)?;
        for _ in 0..count {
            prefix.pop();
        }
    }
    Ok(())
}

fn check_envelope(id: &ComplexId, b: Bigrade) -> Result<()> {
    let vcap = if id.kind.is_external() { XGRAPH_INPUT_CAP } else { PLAIN_VERTEX_CAP };
    if b.n_vertices > vcap {
        return Err(ComplexError::TooManyVertices(b.n_vertices, vcap));
    }
    if b.n_edges > EDGE_CAP {
        return Err(ComplexError::TooManyEdges(b.n_edges, EDGE_CAP));
    }
    Ok(())
}

/// Enumerates the graded piece of a complex at one bigrade.
///
/// Candidates are generated structurally: an undirected skeleton with
/// valence and connectivity pruning, then (for directed kinds) every edge
/// orientation, then (for external kinds) every distribution of the
/// remaining edges over the external symbols.  Every candidate is
/// canonicalized; classes equal to minus themselves under some relabelling
/// drop out, and the survivors are sorted by canonical form.
pub fn enumerate_basis(id: &ComplexId, b: Bigrade) -> Result<GradedBasis> {
    check_envelope(id, b)?;
    let (n, k) = (b.n_vertices, b.n_edges);
    if !id.kind.is_external() && n == 0 {
        // No plain complex contains the empty graph.
        return Ok(GradedBasis::from_sorted(*id, b, Vec::new()));
    }
    let plain_opts = CanonOptions::plain();
    let x_opts = xgraph_options();
    let mut coll = Collector {
        opts: if id.kind.is_external() { x_opts } else { plain_opts },
        set: BTreeSet::new(),
    };

    match id.kind {
        ComplexKind::FGC | ComplexKind::GC => {
            let strict = id.kind == ComplexKind::GC;
            let (min_v, tadpoles) = if strict { (3, false) } else { (0, true) };
            let max_v = if strict { (2 * k).saturating_sub(3 * n.saturating_sub(1)) } else { 2 * k };
            let n_symbols = n * (n - 1) / 2 + if tadpoles { n } else { 0 };
            if !strict {
                let bound = binom_saturating((n_symbols + k).saturating_sub(1) as u64, k as u64);
                if bound > MAX_BASIS_CANDIDATES {
                    return Err(ComplexError::TooManyCandidates(bound));
                }
            }
            undirected_multisets(n, k, tadpoles, min_v, max_v, &mut |edges| {
                let g = RawGraph::new(n, false, edges.clone())?;
                if is_member(id, &g) {
                    coll.add(&g)?;
                }
                Ok(())
            })?;
        }
        ComplexKind::DGC => {
            let max_v = (2 * k).saturating_sub(2 * n.saturating_sub(1));
            undirected_multisets(n, k, true, 2, max_v, &mut |edges| {
                let skeleton = RawGraph::new(n, false, edges.clone())?;
                if !skeleton.is_connected() {
                    return Ok(());
                }
                orientations(edges, &mut |directed| {
                    let g = RawGraph::new(n, true, directed.clone())?;
                    debug_assert!(is_member(id, &g));
                    coll.add(&g)
                })
            })?;
        }
        _ => enumerate_external(id, n, k, &mut coll)?,
    }

    Ok(GradedBasis::from_sorted(*id, b, coll.set.into_iter().collect()))
}

fn enumerate_external(
    id: &ComplexId,
    n: usize,
    k: usize,
    coll: &mut Collector<'_>,
) -> Result<()> {
    let connected_only =
        matches!(id.kind, ComplexKind::XGC | ComplexKind::XGCNoTadpole);
    let external_tadpoles_ok = id.kind == ComplexKind::FXGC;

    if n == 0 {
        // Only the external vertex: edges can only be external tadpoles.
        if connected_only {
            let keep = id.kind == ComplexKind::XGC && id.include_pure_tadpole && k == 1;
            if keep {
                coll.add(&RawGraph::new(1, true, vec![(0, 0)])?)?;
            }
        } else if external_tadpoles_ok || k == 0 {
            let g = RawGraph::new(1, true, vec![(0, 0); k])?;
            if is_member(id, &g) {
                coll.add(&g)?;
            }
        }
        return Ok(());
    }

    // External symbols: both directions next to the external vertex, plus
    // the external tadpole where the complex keeps it.
    let mut ext_symbols: Vec<(u8, u8)> = Vec::new();
    if external_tadpoles_ok {
        ext_symbols.push((0, 0));
    }
    for w in 1..=n as u8 {
        ext_symbols.push((0, w));
        ext_symbols.push((w, 0));
    }

    // Candidate volume estimate before scanning.
    let mut bound: u64 = 0;
    let skeleton_symbols = (n * (n - 1) / 2 + n) as u64;
    for k_int in 0..=k {
        let r = (k - k_int) as u64;
        let skeletons =
            binom_saturating(skeleton_symbols + k_int as u64 - 1, k_int as u64);
        let dirs = 1u64 << k_int.min(62);
        let dists = binom_saturating(ext_symbols.len() as u64 + r - 1, r);
        bound = bound.saturating_add(
            skeletons.saturating_mul(dirs).saturating_mul(dists),
        );
    }
    if bound > MAX_BASIS_CANDIDATES {
        return Err(ComplexError::TooManyCandidates(bound));
    }

    for k_int in 0..=k {
        let r = k - k_int;
        undirected_multisets(n, k_int, true, 0, 2 * k, &mut |internal| {
            if connected_only {
                // Internal edges must join every input into one component.
                let skeleton = RawGraph::new(n, false, internal.clone())?;
                if !skeleton.is_connected() {
                    return Ok(());
                }
            }
            orientations(internal, &mut |directed| {
                // Shift inputs to 1..=n.
                let mut prefix: EdgeList =
                    directed.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
                distribute(&ext_symbols, 0, r, &mut prefix, &mut |edges| {
                    let g = RawGraph::new(n + 1, true, edges.clone())?;
                    debug_assert!(is_member(id, &g), "generated non-member {g:?}");
                    coll.add(&g)
                })
            })
        })?;
    }
    Ok(())
}

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use exact_linalg::{RankMode, SparseRationalMatrix};
use graph_core::{rat_int, CanonicalGraph, GraphSum, Rational};
use gra_operads::{
    compose_gra, compose_xgra, dgra_to_xgra, lie_generator, orient, xgraph_edge_counts, XGraphSum,
};
use num_traits::Signed;
use rayon::prelude::*;

use crate::{
    enumerate_basis, graph_degree, is_member, Bigrade, ComplexError, ComplexId, ComplexKind,
    GradedBasis, Result,
};

/// The two-vertex element whose bracket is the differential on undirected
/// complexes: a single edge.
pub fn mc_plain() -> GraphSum {
    lie_generator()
}

/// Its directed image: the sum over both orientations, which collapses to
/// twice the directed edge.  The factor stays in the element so that the
/// undirected, directed, and external differentials all commute with the
/// maps between the complexes on the nose.
pub fn mc_directed() -> GraphSum {
    orient(&lie_generator()).expect("orienting a single edge cannot overflow")
}

/// The external image of [`mc_directed`]: the directed edge decorated with
/// up to `decoration_bound` added external edges in all ways, weighted by
/// inverse factorials of the decoration multiplicities.  Memoized per bound.
pub fn mc_external(decoration_bound: usize) -> Result<XGraphSum> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, XGraphSum>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(m) = cache.lock().unwrap().get(&decoration_bound) {
        return Ok(m.clone());
    }
    let m = dgra_to_xgra(&mc_directed(), decoration_bound)?;
    cache.lock().unwrap().insert(decoration_bound, m.clone());
    Ok(m)
}

fn plain_parity(x: &GraphSum) -> Result<usize> {
    let mut parity = None;
    for (g, _) in x.iter() {
        let kind = if g.directed() { ComplexKind::DGC } else { ComplexKind::GC };
        let p = graph_degree(kind, g.raw()).rem_euclid(2) as usize;
        match parity {
            None => parity = Some(p),
            Some(q) if q != p => {
                return Err(ComplexError::NotHomogeneous(
                    "mixed degree parity in plain bracket operand".into(),
                ))
            }
            _ => {}
        }
    }
    Ok(parity.unwrap_or(0))
}

fn external_parity(x: &XGraphSum) -> Result<usize> {
    let mut parity = None;
    for (g, _) in x.iter() {
        let p = graph_degree(ComplexKind::FXGC, g.raw()).rem_euclid(2) as usize;
        match parity {
            None => parity = Some(p),
            Some(q) if q != p => {
                return Err(ComplexError::NotHomogeneous(
                    "mixed degree parity in external bracket operand".into(),
                ))
            }
            _ => {}
        }
    }
    Ok(parity.unwrap_or(0))
}

/// Differential bracket `[m, x] = m ∘̄ x − (−1)^{|x|} x ∘̄ m` of a plain
/// graph sum against a two-vertex element, where `∘̄` inserts at every slot
/// and sums.  Exact: plain insertion never truncates.
pub fn bracket_plain(x: &GraphSum, m: &GraphSum) -> Result<GraphSum> {
    let mut out = GraphSum::new();
    if x.is_zero() {
        return Ok(out);
    }
    for j in 1..=2 {
        out.add_sum(&compose_gra(m, j, x)?);
    }
    let arity = x.iter().next().expect("nonzero sum").0.n_vertices();
    let flip = plain_parity(x)? == 0;
    for j in 1..=arity {
        let t = compose_gra(x, j, m)?;
        out.add_sum(&if flip { t.negated() } else { t });
    }
    Ok(out)
}

/// Differential bracket of an external graph sum against [`mc_external`]
/// with the given decoration bound.  The result carries the truncation
/// bound implied by the factors; use [`decorations_for`] to pick a bound
/// that makes it complete through a target edge count.
pub fn bracket_external(x: &XGraphSum, decoration_bound: usize) -> Result<XGraphSum> {
    let m = mc_external(decoration_bound)?;
    let mut out = XGraphSum::new(x.n_inputs() + 1, None);
    for j in 1..=2 {
        out.add_sum(&compose_xgra(&m, j, x)?)?;
    }
    let flip = external_parity(x)? == 0;
    for j in 1..=x.n_inputs() {
        let t = compose_xgra(x, j, &m)?;
        out.add_sum(&if flip { t.negated() } else { t })?;
    }
    Ok(out)
}

/// Smallest decoration bound for which `bracket_external(x, ·)` is complete
/// for every term with at most `target_edges` edges, per the truncation
/// rules of composition: the element's missing decorations must not be able
/// to produce composite terms at or below the target.
pub fn decorations_for(x: &XGraphSum, target_edges: usize) -> usize {
    let mut d = 0;
    for (t, _) in x.iter() {
        let (k1, _, k3) = xgraph_edge_counts(t.raw());
        let k = t.n_edges();
        d = d.max((target_edges + k3).saturating_sub(1 + k1));
        let maxval =
            (1..=x.n_inputs() as u8).map(|j| t.valence(j)).max().unwrap_or(0);
        d = d.max((target_edges + maxval).saturating_sub(1 + k));
    }
    d
}

fn bracket_external_complete(x: &XGraphSum, target_edges: usize) -> Result<XGraphSum> {
    let d = decorations_for(x, target_edges);
    let out = bracket_external(x, d)?;
    if out.bound().is_some_and(|b| b < target_edges) {
        return Err(ComplexError::Internal(format!(
            "bracket bound {:?} fell short of target edge count {target_edges}",
            out.bound()
        )));
    }
    Ok(out)
}

/// Terms of an external sum with exactly `k` edges.
fn edge_block(sum: &XGraphSum, k: usize) -> Vec<(CanonicalGraph, Rational)> {
    sum.iter()
        .filter(|(g, _)| g.n_edges() == k)
        .map(|(g, c)| (g.clone(), c.clone()))
        .collect()
}

fn singleton_external(g: &CanonicalGraph) -> Result<XGraphSum> {
    let mut s = XGraphSum::new(g.n_vertices() - 1, None);
    s.add_raw(g.raw(), rat_int(1))?;
    Ok(s)
}

fn singleton_plain(g: &CanonicalGraph) -> Result<GraphSum> {
    let mut s = GraphSum::new();
    s.add_canonical(g.clone(), rat_int(1));
    Ok(s)
}

/// Every resulting class of a differential application must again lie in
/// the complex; for the valence- and connectivity-restricted kinds that is
/// a nontrivial cancellation, and its failure is reported as an internal
/// error rather than silently projected away.
fn check_members(
    id: &ComplexId,
    g: &CanonicalGraph,
    out: &[(CanonicalGraph, Rational)],
) -> Result<()> {
    for (cg, c) in out {
        if !is_member(id, cg.raw()) {
            return Err(ComplexError::Internal(format!(
                "differential left the complex {}: produced {:?} with coefficient {c} \
                 from {:?}",
                id,
                cg.raw(),
                g.raw()
            )));
        }
    }
    Ok(())
}

/// Image of one basis graph under the component of the differential that
/// raises the edge count by exactly `delta_k`.  For external kinds the
/// bracket splits into such components (`delta_k = 1` holds all the vertex
/// splittings plus the detachments that keep one reconnection decoration;
/// `delta_k = 0` is the bare detachment); a plain bracket is concentrated
/// in `delta_k = 1`.
fn apply_block(
    id: &ComplexId,
    g: &CanonicalGraph,
    delta_k: usize,
) -> Result<Vec<(CanonicalGraph, Rational)>> {
    let out: Vec<(CanonicalGraph, Rational)>;
    if id.kind.is_external() {
        let x = singleton_external(g)?;
        let target = g.n_edges() + delta_k;
        let d = bracket_external_complete(&x, target)?;
        out = edge_block(&d, target);
    } else if delta_k == 1 {
        let m = if id.kind.is_directed() { mc_directed() } else { mc_plain() };
        let d = bracket_plain(&singleton_plain(g)?, &m)?;
        out = d.iter().map(|(cg, c)| (cg.clone(), c.clone())).collect();
    } else {
        out = Vec::new();
    }
    check_members(id, g, &out)?;
    Ok(out)
}

/// Image of one basis graph under the full differential of the
/// edge-truncated complex: every bracket component whose target stays
/// within `edge_cap` edges.  The bracket never lowers edge counts, so
/// graphs above the cap span a subspace the differential preserves and
/// dropping them leaves a genuine quotient differential — one that squares
/// to zero exactly, unlike any single edge component on its own.
pub(crate) fn apply_full_truncated(
    id: &ComplexId,
    g: &CanonicalGraph,
    edge_cap: usize,
) -> Result<Vec<(CanonicalGraph, Rational)>> {
    let out: Vec<(CanonicalGraph, Rational)>;
    if id.kind.is_external() {
        let x = singleton_external(g)?;
        let d = bracket_external_complete(&x, edge_cap)?;
        out = d
            .iter()
            .filter(|(t, _)| t.n_edges() <= edge_cap)
            .map(|(t, c)| (t.clone(), c.clone()))
            .collect();
    } else if g.n_edges() + 1 <= edge_cap {
        let m = if id.kind.is_directed() { mc_directed() } else { mc_plain() };
        let d = bracket_plain(&singleton_plain(g)?, &m)?;
        out = d.iter().map(|(cg, c)| (cg.clone(), c.clone())).collect();
    } else {
        out = Vec::new();
    }
    check_members(id, g, &out)?;
    Ok(out)
}

/// The differential matrix of a complex at one bigrade, mapping coordinates
/// on `basis(b)` to coordinates on `basis(b.next())`.  Columns are computed
/// independently in parallel; assembling the triplet list is the only
/// synchronization.
pub fn differential(id: &ComplexId, b: Bigrade) -> Result<SparseRationalMatrix> {
    let source = enumerate_basis(id, b)?;
    let target = enumerate_basis(id, b.next())?;
    differential_between(id, &source, &target)
}

/// The edge-count-preserving component of the differential as a matrix from
/// `basis(n, k)` to `basis(n+1, k)`: each external end detaches to a fresh
/// input.  Zero for the plain kinds, whose differential is concentrated in
/// the edge-raising component.
pub fn detach_matrix(id: &ComplexId, b: Bigrade) -> Result<SparseRationalMatrix> {
    let source = enumerate_basis(id, b)?;
    let target = enumerate_basis(id, Bigrade::new(b.n_vertices + 1, b.n_edges))?;
    block_between(id, &source, &target, 0)
}

pub(crate) fn differential_between(
    id: &ComplexId,
    source: &GradedBasis,
    target: &GradedBasis,
) -> Result<SparseRationalMatrix> {
    block_between(id, source, target, 1)
}

fn block_between(
    id: &ComplexId,
    source: &GradedBasis,
    target: &GradedBasis,
    delta_k: usize,
) -> Result<SparseRationalMatrix> {
    let columns: Vec<Vec<(usize, usize, Rational)>> = source
        .graphs()
        .par_iter()
        .enumerate()
        .map(|(col, g)| -> Result<Vec<(usize, usize, Rational)>> {
            let image = apply_block(id, g, delta_k)?;
            image
                .into_iter()
                .map(|(cg, coeff)| {
                    let row = target.position(&cg).ok_or_else(|| {
                        ComplexError::Internal(format!(
                            "differential image {:?} missing from the {} basis at {}",
                            cg.raw(),
                            id,
                            target.bigrade
                        ))
                    })?;
                    Ok((row, col, coeff))
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseRationalMatrix::from_triplets(
        target.len(),
        source.len(),
        columns.into_iter().flatten(),
    )?)
}

/// Outcome of composing the differential with itself out of one bigrade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSquaredReport {
    pub complex: ComplexId,
    pub bigrade: Bigrade,
    /// Edge cap of the truncated complex the check ran in.
    pub edge_cap: usize,
    pub source_dim: usize,
    /// Largest absolute coefficient in the twice-applied differential over
    /// all source basis elements — the maximum absolute entry of the
    /// composed matrix.
    pub max_abs_entry: Rational,
}

impl DSquaredReport {
    pub fn is_zero(&self) -> bool {
        self.max_abs_entry.is_zero()
    }
}

use num_traits::Zero;

/// Applies the differential of the `edge_cap`-truncated complex twice to
/// every basis element of `b` and reports the largest absolute coefficient
/// of the composite — the maximum absolute entry of the composed matrix,
/// computed without enumerating the final bases.  For plain kinds this is
/// the composition of two consecutive edge-raising matrices; for external
/// kinds it composes the full truncated differential, all edge components
/// together, which is the operator that actually squares to zero (no single
/// component does).
pub fn d_squared_check(id: &ComplexId, b: Bigrade, edge_cap: usize) -> Result<DSquaredReport> {
    let source = enumerate_basis(id, b)?;
    let max_abs = source
        .graphs()
        .par_iter()
        .map(|g| -> Result<Rational> {
            let mut worst = Rational::zero();
            let once = apply_full_truncated(id, g, edge_cap)?;
            let mut twice: BTreeMap<CanonicalGraph, Rational> = BTreeMap::new();
            for (cg, c) in once {
                for (cg2, c2) in apply_full_truncated(id, &cg, edge_cap)? {
                    let slot = twice.entry(cg2).or_insert_with(Rational::zero);
                    *slot += &c * &c2;
                }
            }
            for c in twice.values() {
                let a = c.abs();
                if a > worst {
                    worst = a;
                }
            }
            Ok(worst)
        })
        .try_reduce(Rational::zero, |a, b| Ok(if a > b { a } else { b }))?;
    Ok(DSquaredReport {
        complex: *id,
        bigrade: b,
        edge_cap,
        source_dim: source.len(),
        max_abs_entry: max_abs,
    })
}

/// Dimension of the cohomology of a complex at one bigrade:
/// `dim ker(δ out of b) − rank(δ into b)`, with exact ranks.
pub fn cohomology_dim(id: &ComplexId, b: Bigrade, mode: RankMode) -> Result<usize> {
    let basis = enumerate_basis(id, b)?;
    if basis.is_empty() {
        return Ok(0);
    }
    let rank_out = differential(id, b)?.rank(mode);
    let rank_in = match b.prev() {
        None => 0,
        Some(p) => {
            if enumerate_basis(id, p)?.is_empty() {
                0
            } else {
                differential(id, p)?.rank(mode)
            }
        }
    };
    let dim = basis.len() as i64 - rank_out as i64 - rank_in as i64;
    if dim < 0 {
        // Possible only when consecutive edge-raising blocks fail to
        // compose to zero, i.e. for external kinds, whose per-bigrade
        // cohomology is the bigraded quantity instead.
        return Err(ComplexError::Internal(format!(
            "blockwise cohomology bookkeeping is negative at {} {}: dim {} rank_out {} rank_in \
             {}; use bigraded_cohomology_dim for complexes with a multi-component differential",
            id,
            b,
            basis.len(),
            rank_out,
            rank_in
        )));
    }
    Ok(dim as usize)
}

/// Cohomology dimension at one bigrade of the edge-graded reading of the
/// full differential: first the edge-preserving detachment component, then
/// the edge-raising splitting component induced on detachment cohomology.
/// The induced map is well defined and square-zero there — the raw
/// edge-raising blocks are not — so this is the per-bigrade quantity that
/// the graded comparison between complexes is stated in.  For kinds whose
/// differential is purely edge-raising the detachment blocks vanish and
/// this coincides with `cohomology_dim`.
pub fn bigraded_cohomology_dim(id: &ComplexId, b: Bigrade) -> Result<usize> {
    let dim = enumerate_basis(id, b)?.len();
    if dim == 0 {
        return Ok(0);
    }
    let rank_out0 = detach_matrix(id, b)?.rank(RankMode::Exact);
    let rank_in0 = if b.n_vertices == 0 {
        0
    } else {
        let below = Bigrade::new(b.n_vertices - 1, b.n_edges);
        if enumerate_basis(id, below)?.is_empty() {
            0
        } else {
            detach_matrix(id, below)?.rank(RankMode::Exact)
        }
    };
    let e1 = dim - rank_out0 - rank_in0;
    if e1 == 0 {
        return Ok(0);
    }
    let rank_out1 = induced_splitting_rank(id, b)?;
    let rank_in1 = match b.prev() {
        None => 0,
        Some(p) => induced_splitting_rank(id, p)?,
    };
    Ok(e1 - rank_out1 - rank_in1)
}

/// Rank of the splitting component out of bigrade `b` as a map on
/// detachment cohomology: the rank of [splitting · ker(detach) | detach
/// into the target] minus the rank of the second block alone.  Detachment
/// images in the source may be dropped because the two components
/// anticommute, so their splitting images are absorbed by the second block.
fn induced_splitting_rank(id: &ComplexId, b: Bigrade) -> Result<usize> {
    if enumerate_basis(id, b)?.is_empty() || enumerate_basis(id, b.next())?.is_empty() {
        return Ok(0);
    }
    let kernel = detach_matrix(id, b)?.kernel_basis();
    if kernel.is_empty() {
        return Ok(0);
    }
    let d1 = differential(id, b)?;
    let beside = Bigrade::new(b.n_vertices, b.n_edges + 1);
    let m = if enumerate_basis(id, beside)?.is_empty() {
        SparseRationalMatrix::zero(d1.rows(), 0)
    } else {
        detach_matrix(id, beside)?
    };
    let mut triplets: Vec<(usize, usize, Rational)> = Vec::new();
    for (j, v) in kernel.iter().enumerate() {
        for (i, c) in d1.apply(v)?.into_iter().enumerate() {
            if !c.is_zero() {
                triplets.push((i, j, c));
            }
        }
    }
    let k_cols = kernel.len();
    for (i, j, c) in m.entries() {
        triplets.push((*i, k_cols + *j, c.clone()));
    }
    let stacked = SparseRationalMatrix::from_triplets(d1.rows(), k_cols + m.cols(), triplets)?;
    Ok(stacked.rank(RankMode::Exact) - m.rank(RankMode::Exact))
}

/// The edge-count-preserving part of the external differential: each
/// external end detaches to a fresh input, an external tadpole in the two
/// ways its ends allow.  Normalized so a single detachment carries
/// coefficient ±1; signs follow the edge-order conventions, under which the
/// two tadpole terms necessarily come with opposite signs (squaring to zero
/// forces this, and the bracket produces it).
pub fn delta1(x: &XGraphSum, b: Bigrade) -> Result<XGraphSum> {
    if x.n_inputs() != b.n_vertices {
        return Err(ComplexError::NotHomogeneous(format!(
            "sum has {} inputs but the bigrade says {}",
            x.n_inputs(),
            b.n_vertices
        )));
    }
    for (g, _) in x.iter() {
        if g.n_edges() != b.n_edges {
            return Err(ComplexError::NotHomogeneous(format!(
                "term with {} edges in a sum at {}",
                g.n_edges(),
                b
            )));
        }
    }
    let d = bracket_external_complete(x, b.n_edges)?;
    let mut out = XGraphSum::new(b.n_vertices + 1, None);
    let half = Rational::new(1.into(), 2.into());
    for (cg, c) in edge_block(&d, b.n_edges) {
        out.add_raw(cg.raw(), c * &half)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use graph_core::RawGraph;

    #[test]
    fn mc_elements_have_expected_shapes() {
        assert_eq!(mc_plain().len(), 1);
        let md = mc_directed();
        assert_eq!(md.len(), 1);
        let (g, c) = md.iter().next().unwrap();
        assert_eq!(g.edges(), [(0, 1)]);
        assert_eq!(c, &rat_int(2));

        let mx = mc_external(2).unwrap();
        assert_eq!(mx.n_inputs(), 2);
        assert_eq!(mx.bound(), Some(3));
        // Bare directed edge appears with coefficient 2.
        let bare = RawGraph::new(3, true, vec![(1, 2)]).unwrap();
        let canon = gra_operads::canonicalize_xgraph(&bare).unwrap();
        assert_eq!(mx.coeff(&canon.graph), rat_int(2) * rat_int(canon.sign as i64));
    }

    #[test]
    fn decoration_bound_covers_plain_edge() {
        let g = RawGraph::new(3, true, vec![(1, 2)]).unwrap();
        let canon = gra_operads::canonicalize_xgraph(&g).unwrap();
        let x = singleton_external(&canon.graph).unwrap();
        // Splitting the two-valent ends needs decorations up to valence 1
        // on each slot plus the surgery side needing none.
        assert_eq!(decorations_for(&x, 2), 1);
    }
}

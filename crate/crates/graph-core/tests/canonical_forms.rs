//! Canonical forms checked against brute force.
//!
//! The engine is free to pick any representative, but it must pick it as a
//! function of the isomorphism class alone.  The oracle therefore checks,
//! by exhaustive enumeration with independently computed signs (cycle
//! decomposition rather than inversion counting):
//!
//! * the representative really is a relabelling of the input;
//! * every relabelling of the input canonicalizes to the identical result;
//! * transposing two edges flips the sign exactly when both are odd;
//! * re-canonicalizing the representative is the identity with sign +1;
//! * the vanishing flag matches the existence of an odd self-isomorphism;
//! * the reported automorphism group matches brute force.

use graph_core::{
    automorphism_signs, canonicalize, canonicalize_with, CanonOptions, GraphError, RawGraph,
};
use proptest::prelude::*;

// ---------------------------------------------------------------------------
// Brute-force helpers
// ---------------------------------------------------------------------------

fn sign_by_cycles(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            v = perm[v];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// All permutations of `0..n` fixing `0..fixed` pointwise, as old -> new maps.
fn all_perms_fixing(n: usize, fixed: usize) -> Vec<Vec<u8>> {
    fn rec(free: &[u8], acc: &mut Vec<u8>, out: &mut Vec<Vec<u8>>, fixed: usize) {
        if free.is_empty() {
            let mut image_order: Vec<u8> = (0..fixed as u8).collect();
            image_order.extend(acc.iter());
            let mut perm = vec![0u8; image_order.len()];
            for (new, &old) in image_order.iter().enumerate() {
                perm[old as usize] = new as u8;
            }
            out.push(perm);
            return;
        }
        for i in 0..free.len() {
            let mut rest = free.to_vec();
            let v = rest.remove(i);
            acc.push(v);
            rec(&rest, acc, out, fixed);
            acc.pop();
        }
    }
    let free: Vec<u8> = (fixed as u8..n as u8).collect();
    let mut out = Vec::new();
    rec(&free, &mut Vec::new(), &mut out, fixed);
    out
}

/// Sorts the edges of `g` stably by (pair, original position); returns the
/// sorted pairs and the map new position -> original position.
fn stable_sort(g: &RawGraph) -> (Vec<(u8, u8)>, Vec<usize>) {
    let mut pairs: Vec<((u8, u8), usize)> =
        g.edges().iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    pairs.sort();
    (pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect())
}

/// Koszul parity of the edge permutation `new -> old` restricted to odd edges.
fn odd_parity(new_to_old: &[usize], odd_of_old: &[bool]) -> i8 {
    let odd_olds: Vec<usize> = (0..odd_of_old.len()).filter(|&i| odd_of_old[i]).collect();
    let rank: std::collections::HashMap<usize, usize> =
        odd_olds.iter().enumerate().map(|(r, &o)| (o, r)).collect();
    let seq: Vec<usize> =
        new_to_old.iter().filter(|&&o| odd_of_old[o]).map(|o| rank[o]).collect();
    sign_by_cycles(&seq)
}

fn invert(perm: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; perm.len()];
    for (v, &p) in perm.iter().enumerate() {
        inv[p as usize] = v as u8;
    }
    inv
}

fn odd_all(_: u8, _: u8) -> bool {
    true
}

/// Parity rule for graphs with external vertex 0: edges between inputs and
/// loops at 0 anticommute, edges tying an input to 0 commute.
fn odd_external(a: u8, b: u8) -> bool {
    (a > 0 && b > 0) || (a == 0 && b == 0)
}

/// Every admissible relabelling that sends `g`'s sorted edge list to
/// `target`, with the Koszul parity of the stable sort that gets it there.
fn achievers_of(
    g: &RawGraph,
    fixed: usize,
    odd: &dyn Fn(u8, u8) -> bool,
    target: &[(u8, u8)],
) -> Vec<(Vec<u8>, i8)> {
    let odd_of_old: Vec<bool> = g.edges().iter().map(|&(a, b)| odd(a, b)).collect();
    let mut out = Vec::new();
    for perm in all_perms_fixing(g.n_vertices(), fixed) {
        let h = g.relabel(&perm);
        let (sorted, new_to_old) = stable_sort(&h);
        if sorted == target {
            out.push((perm, odd_parity(&new_to_old, &odd_of_old)));
        }
    }
    out
}

fn check_against_oracle(g: &RawGraph, fixed: usize, odd: &'static dyn Fn(u8, u8) -> bool) {
    let opts = CanonOptions { fixed_prefix: fixed, edge_is_odd: odd };
    let got = canonicalize_with(g, &opts).unwrap();

    // The representative is a relabelling of the input.
    let ach = achievers_of(g, fixed, odd, got.graph.edges());
    assert!(!ach.is_empty(), "representative not in the orbit of {g:?}");

    // Vanishing: an odd self-isomorphism exists, either as two achievers of
    // opposite parity or as a repeated anticommuting edge.
    let mixed = ach.iter().any(|&(_, p)| p != ach[0].1);
    let repeated_odd = got
        .graph
        .edges()
        .windows(2)
        .any(|w| w[0] == w[1] && odd(w[0].0, w[0].1));
    assert_eq!(got.zero, mixed || repeated_odd, "vanishing flag for {g:?}");
    if !got.zero {
        assert!(
            ach.iter().all(|&(_, p)| p == got.sign),
            "sign for {g:?}: engine {} vs oracle parities {:?}",
            got.sign,
            ach.iter().map(|&(_, p)| p).collect::<Vec<_>>()
        );
    }

    // Any relabelling canonicalizes to the identical signed result.
    for perm in all_perms_fixing(g.n_vertices(), fixed) {
        let h = g.relabel(&perm);
        let other = canonicalize_with(&h, &opts).unwrap();
        assert_eq!(other, got, "relabelling by {perm:?} changed the result for {g:?}");
    }

    // Transposing adjacent edges flips the sign exactly when both are odd.
    for i in 0..g.n_edges().saturating_sub(1) {
        let mut edges = g.edges().to_vec();
        edges.swap(i, i + 1);
        let h = RawGraph::new(g.n_vertices(), g.directed(), edges).unwrap();
        let other = canonicalize_with(&h, &opts).unwrap();
        assert_eq!(other.graph, got.graph);
        assert_eq!(other.zero, got.zero);
        if !got.zero {
            let flips = odd(g.edges()[i].0, g.edges()[i].1)
                && odd(g.edges()[i + 1].0, g.edges()[i + 1].1)
                && g.edges()[i] != g.edges()[i + 1];
            let want = if flips { -got.sign } else { got.sign };
            assert_eq!(other.sign, want, "transposition sign for {g:?} at {i}");
        }
    }

    // Idempotence.
    let again = canonicalize_with(got.graph.raw(), &opts).unwrap();
    assert_eq!(again.graph, got.graph, "re-canonicalization moved {g:?}");
    assert_eq!(again.zero, got.zero);
    if !got.zero {
        assert_eq!(again.sign, 1, "re-canonicalization sign for {g:?}");
    }

    // Automorphism group with signs.
    let got_auts = automorphism_signs(g, &opts).unwrap();
    let first_inv = invert(&ach[0].0);
    let mut want_auts: Vec<(Vec<u8>, i8)> = ach
        .iter()
        .map(|(perm, parity)| {
            let tau: Vec<u8> =
                (0..g.n_vertices()).map(|v| first_inv[perm[v] as usize]).collect();
            (tau, parity * ach[0].1)
        })
        .collect();
    want_auts.sort();
    if got.zero {
        // Signs of individual automorphisms are anchor-dependent once the
        // class vanishes; only the group itself must match.
        let got_taus: Vec<_> = got_auts.iter().map(|(t, _)| t.clone()).collect();
        let want_taus: Vec<_> = want_auts.iter().map(|(t, _)| t.clone()).collect();
        assert_eq!(got_taus, want_taus, "automorphism group for {g:?}");
    } else {
        assert_eq!(got_auts, want_auts, "automorphisms for {g:?}");
    }
}

// ---------------------------------------------------------------------------
// Exhaustive small cases
// ---------------------------------------------------------------------------

fn all_graphs(n: usize, k: usize, directed: bool, allow_tadpoles: bool) -> Vec<RawGraph> {
    let mut pairs = Vec::new();
    for a in 0..n as u8 {
        for b in 0..n as u8 {
            if a == b && !allow_tadpoles {
                continue;
            }
            if !directed && a > b {
                continue;
            }
            pairs.push((a, b));
        }
    }
    fn rec(
        pairs: &[(u8, u8)],
        k: usize,
        start: usize,
        acc: &mut Vec<(u8, u8)>,
        out: &mut Vec<Vec<(u8, u8)>>,
    ) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for i in start..pairs.len() {
            acc.push(pairs[i]);
            rec(pairs, k, i, acc, out);
            acc.pop();
        }
    }
    let mut lists = Vec::new();
    rec(&pairs, k, 0, &mut Vec::new(), &mut lists);
    lists
        .into_iter()
        .map(|edges| RawGraph::new(n, directed, edges).unwrap())
        .collect()
}

#[test]
fn matches_oracle_on_all_small_undirected_graphs() {
    for n in 1..=4usize {
        for k in 0..=4usize {
            for g in all_graphs(n, k, false, true) {
                check_against_oracle(&g, 0, &odd_all);
            }
        }
    }
}

#[test]
fn matches_oracle_on_all_small_directed_graphs() {
    for n in 1..=3usize {
        for k in 0..=3usize {
            for g in all_graphs(n, k, true, true) {
                check_against_oracle(&g, 0, &odd_all);
            }
        }
    }
}

#[test]
fn matches_oracle_on_small_external_graphs() {
    // Vertex 0 pinned, mixed parities per the endpoint rule.
    for n in 1..=3usize {
        for k in 0..=3usize {
            for g in all_graphs(n + 1, k, true, true) {
                check_against_oracle(&g, 1, &odd_external);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Frozen values
// ---------------------------------------------------------------------------

fn und(n: usize, edges: &[(u8, u8)]) -> RawGraph {
    RawGraph::new(n, false, edges.to_vec()).unwrap()
}

fn dir(n: usize, edges: &[(u8, u8)]) -> RawGraph {
    RawGraph::new(n, true, edges.to_vec()).unwrap()
}

#[test]
fn single_undirected_edge_is_nonzero_with_even_symmetry() {
    let g = und(2, &[(0, 1)]);
    let s = canonicalize(&g).unwrap();
    assert!(!s.zero);
    assert_eq!(s.sign, 1);
    assert_eq!(s.graph.edges(), &[(0, 1)]);
    let auts = automorphism_signs(&g, &CanonOptions::plain()).unwrap();
    assert_eq!(auts, vec![(vec![0, 1], 1), (vec![1, 0], 1)]);
}

#[test]
fn doubled_undirected_edge_vanishes() {
    let s = canonicalize(&und(2, &[(0, 1), (0, 1)])).unwrap();
    assert!(s.zero);
}

#[test]
fn two_edge_path_vanishes_by_reflection() {
    // Swapping the endpoints of the path transposes its two edges.
    let s = canonicalize(&und(3, &[(0, 1), (1, 2)])).unwrap();
    assert!(s.zero);
}

#[test]
fn triangle_vanishes() {
    let g = und(3, &[(0, 1), (0, 2), (1, 2)]);
    let s = canonicalize(&g).unwrap();
    assert!(s.zero);
    let auts = automorphism_signs(&g, &CanonOptions::plain()).unwrap();
    assert_eq!(auts.len(), 6);
    assert_eq!(auts.iter().filter(|&&(_, s)| s == -1).count(), 3);
}

#[test]
fn directed_two_cycle_vanishes() {
    let s = canonicalize(&dir(2, &[(0, 1), (1, 0)])).unwrap();
    assert!(s.zero);
}

#[test]
fn directed_tadpole_is_nonzero() {
    let s = canonicalize(&dir(1, &[(0, 0)])).unwrap();
    assert!(!s.zero);
    assert_eq!(s.graph.edges(), &[(0, 0)]);
}

#[test]
fn cycle_graphs_vanish_unless_length_is_one_mod_four() {
    // Rotations and reflections cancel an n-cycle unless n = 1 (mod 4); the
    // surviving cycles are the interesting cocycles.
    for n in 3..=9usize {
        let mut edges: Vec<(u8, u8)> = (0..n as u8 - 1).map(|i| (i, i + 1)).collect();
        edges.push((0, n as u8 - 1));
        let s = canonicalize(&und(n, &edges)).unwrap();
        assert_eq!(s.zero, n % 4 != 1, "cycle length {n}");
    }
}

#[test]
fn complete_graph_on_four_vertices_is_nonzero() {
    let g = und(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let s = canonicalize(&g).unwrap();
    assert!(!s.zero);
    let auts = automorphism_signs(&g, &CanonOptions::plain()).unwrap();
    assert_eq!(auts.len(), 24);
    assert!(auts.iter().all(|&(_, s)| s == 1));
}

#[test]
fn canonical_sign_tracks_edge_transpositions() {
    // The same labelled graph with two edges swapped canonicalizes with
    // opposite sign (on a class that does not vanish).
    let g = und(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let h = und(4, &[(0, 2), (0, 1), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let sg = canonicalize(&g).unwrap();
    let sh = canonicalize(&h).unwrap();
    assert!(!sg.zero && !sh.zero);
    assert_eq!(sg.graph, sh.graph);
    assert_eq!(sg.sign, -sh.sign);
}

#[test]
fn oversized_symmetric_search_reports_resource_limit() {
    // A vertex-transitive cubic graph on 12 vertices: the cycle plus all
    // diameters.  Refinement cannot split it, and 12! orderings exceed the
    // engine cap.
    let mut edges = Vec::new();
    for i in 0..12u8 {
        edges.push((i, (i + 1) % 12));
    }
    for i in 0..6u8 {
        edges.push((i, i + 6));
    }
    let g = und(12, &edges);
    match canonicalize(&g) {
        Err(GraphError::ResourceLimit(_)) => {}
        other => panic!("expected a resource-limit error, got {other:?}"),
    }
}

// ---------------------------------------------------------------------------
// Randomized agreement on larger graphs
// ---------------------------------------------------------------------------

fn arb_graph(max_n: usize, max_k: usize, directed: bool) -> impl Strategy<Value = RawGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        let edge = (0..n as u8, 0..n as u8);
        proptest::collection::vec(edge, 0..=max_k)
            .prop_map(move |edges| RawGraph::new(n, directed, edges).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_agreement_undirected(g in arb_graph(5, 7, false)) {
        check_against_oracle(&g, 0, &odd_all);
    }

    #[test]
    fn oracle_agreement_directed(g in arb_graph(5, 7, true)) {
        check_against_oracle(&g, 0, &odd_all);
    }

    #[test]
    fn oracle_agreement_external(g in arb_graph(5, 7, true)) {
        check_against_oracle(&g, 1, &odd_external);
    }

    #[test]
    fn relabelling_is_invisible(g in arb_graph(6, 9, false), seed in any::<u64>()) {
        // Vertex names carry no information: any relabelling canonicalizes
        // to the identical signed representative.
        let n = g.n_vertices();
        let mut perm: Vec<u8> = (0..n as u8).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            perm.swap(i, j);
        }
        let a = canonicalize(&g).unwrap();
        let b = canonicalize(&g.relabel(&perm)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn automorphisms_form_a_signed_group(g in arb_graph(5, 6, true)) {
        let opts = CanonOptions::plain();
        let auts = automorphism_signs(&g, &opts).unwrap();
        let n = g.n_vertices();
        let id: Vec<u8> = (0..n as u8).collect();
        prop_assert!(auts.iter().any(|(t, _)| *t == id));
        let lookup: std::collections::HashMap<Vec<u8>, i8> = auts.iter().cloned().collect();
        let zero = canonicalize(&g).unwrap().zero;
        for (t1, s1) in &auts {
            for (t2, s2) in &auts {
                let comp: Vec<u8> = (0..n).map(|v| t1[t2[v] as usize]).collect();
                let s = lookup.get(&comp);
                prop_assert!(s.is_some(), "composition closed");
                if !zero {
                    prop_assert_eq!(*s.unwrap(), s1 * s2);
                }
            }
        }
    }
}

//! Vertex-insertion composition for plain graph sums: unit laws, the two
//! operad axioms (with the Koszul block-swap sign), equivariance under
//! relabelling, the orientation-sum morphism, and term-level expansions
//! checked against direct enumeration.

use std::collections::BTreeMap;

use gra_operads::{compose_gra, compose_raw, lie_generator, orient, orient_raw, OperadError};
use graph_core::{rat_int, GraphSum, RawGraph, Rational};

fn und(n: usize, edges: &[(u8, u8)]) -> RawGraph {
    RawGraph::new(n, false, edges.to_vec()).unwrap()
}

fn dir(n: usize, edges: &[(u8, u8)]) -> RawGraph {
    RawGraph::new(n, true, edges.to_vec()).unwrap()
}

fn sum_of(g: &RawGraph) -> GraphSum {
    let mut s = GraphSum::new();
    s.add_raw(g, rat_int(1)).unwrap();
    s
}

/// Deterministic pseudo-random stream for sampled cases.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    fn graph(&mut self, max_n: u64, max_e: u64, directed: bool) -> RawGraph {
        let n = 1 + self.below(max_n) as usize;
        let k = self.below(max_e + 1) as usize;
        let edges: Vec<(u8, u8)> =
            (0..k).map(|_| (self.below(n as u64) as u8, self.below(n as u64) as u8)).collect();
        RawGraph::new(n, directed, edges).unwrap()
    }

    fn perm(&mut self, n: usize) -> Vec<u8> {
        let mut p: Vec<u8> = (0..n as u8).collect();
        for i in (1..n).rev() {
            p.swap(i, self.below(i as u64 + 1) as usize);
        }
        p
    }
}

/// Plain undirected classes that survive canonicalization, for use as
/// composition operands.
fn nonvanishing_pool() -> Vec<RawGraph> {
    vec![
        und(1, &[]),
        und(2, &[(0, 1)]),
        und(1, &[(0, 0)]),
        und(2, &[(0, 0), (0, 1)]),
        und(3, &[(0, 1)]),
    ]
}

#[test]
fn single_vertex_is_a_two_sided_unit() {
    let unit = sum_of(&und(1, &[]));
    for g in nonvanishing_pool() {
        let gs = sum_of(&g);
        assert_eq!(compose_gra(&unit, 1, &gs).unwrap(), gs, "left unit on {g:?}");
        for j in 1..=g.n_vertices() {
            assert_eq!(compose_gra(&gs, j, &unit).unwrap(), gs, "right unit at {j} on {g:?}");
        }
    }
}

#[test]
fn edge_into_edge_attaches_to_both_new_vertices() {
    let e = und(2, &[(0, 1)]);
    let terms = compose_raw(&e, 0, &e).unwrap();
    assert_eq!(terms.len(), 2);
    for t in &terms {
        assert_eq!(t.n_vertices(), 3);
        assert_eq!(t.n_edges(), 2);
        let mut degs: Vec<usize> = (0..3).map(|v| t.valence(v)).collect();
        degs.sort_unstable();
        assert_eq!(degs, [1, 1, 2], "each term is a path through the inserted edge");
    }
    // Both terms are 3-vertex paths, whose class dies by its odd reflection.
    let mut s = GraphSum::new();
    for t in &terms {
        s.add_raw(t, rat_int(1)).unwrap();
    }
    assert!(s.is_zero());
}

#[test]
fn generator_self_insertions_cancel() {
    let m = lie_generator();
    let mut square = compose_gra(&m, 1, &m).unwrap();
    square.add_sum(&compose_gra(&m, 2, &m).unwrap());
    assert!(square.is_zero(), "the generator squares to zero under pre-Lie insertion");
}

fn pool_with_directed() -> Vec<RawGraph> {
    let mut pool = nonvanishing_pool();
    pool.push(dir(2, &[(0, 1)]));
    pool.push(dir(1, &[(0, 0)]));
    pool.push(dir(2, &[(0, 1), (1, 0)]));
    pool.push(dir(3, &[(0, 1), (1, 2), (2, 0)]));
    pool
}

/// Labelled double composition, kept as a multiset of labelled graphs: the
/// operad axioms are exact identities there, while canonical collapse of
/// intermediate sums is lossy (a vanishing class still has representatives
/// whose single-slot composites survive).
fn double_compose(
    f: &RawGraph,
    i: usize,
    g: &RawGraph,
    j: usize,
    h: &RawGraph,
) -> BTreeMap<RawGraph, i64> {
    let mut out = BTreeMap::new();
    for t in compose_raw(f, i, g).unwrap() {
        for u in compose_raw(&t, j, h).unwrap() {
            *out.entry(u).or_insert(0) += 1;
        }
    }
    out
}

#[test]
fn sequential_insertions_associate() {
    let pool = pool_with_directed();
    for f in &pool {
        for g in &pool {
            for h in &pool {
                if f.directed() != g.directed() || g.directed() != h.directed() {
                    continue;
                }
                for i in 0..f.n_vertices() {
                    for j in 0..g.n_vertices() {
                        let lhs = double_compose(f, i, g, i + j, h);
                        let mut rhs = BTreeMap::new();
                        for t in compose_raw(g, j, h).unwrap() {
                            for u in compose_raw(f, i, &t).unwrap() {
                                *rhs.entry(u).or_insert(0) += 1;
                            }
                        }
                        assert_eq!(lhs, rhs, "sequential axiom for {f:?} {i} {g:?} {j} {h:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn disjoint_insertions_commute_up_to_edge_sign() {
    let pool = pool_with_directed();
    for f in pool.iter().filter(|f| f.n_vertices() >= 2) {
        for g in &pool {
            for h in &pool {
                if f.directed() != g.directed() || g.directed() != h.directed() {
                    continue;
                }
                let b = g.n_vertices();
                for i in 0..f.n_vertices() {
                    for j in (i + 1)..f.n_vertices() {
                        // Fully expand both insertion orders, canonicalize
                        // only at the end; the edge blocks of g and h end up
                        // swapped, which costs a Koszul sign.
                        let mut lhs = GraphSum::new();
                        for (t, mult) in double_compose(f, i, g, j + b - 1, h) {
                            lhs.add_raw(&t, rat_int(mult)).unwrap();
                        }
                        let mut rhs = GraphSum::new();
                        for (t, mult) in double_compose(f, j, h, i, g) {
                            rhs.add_raw(&t, rat_int(mult)).unwrap();
                        }
                        if g.n_edges() % 2 == 1 && h.n_edges() % 2 == 1 {
                            rhs = rhs.negated();
                        }
                        assert_eq!(lhs, rhs, "parallel axiom for {f:?} {i}<{j} {g:?} {h:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn relabelled_operands_compose_to_the_relabelled_result() {
    let mut rng = Lcg(0x5eed_0001);
    for case in 0..200 {
        let directed = case % 2 == 0;
        let f = rng.graph(5, 4, directed);
        let g = rng.graph(4, 3, directed);
        let sigma = rng.perm(f.n_vertices());
        let tau = rng.perm(g.n_vertices());
        let v = rng.below(f.n_vertices() as u64) as usize;
        let n = g.n_vertices();

        // The permutation induced on the composite: f's surviving vertices
        // move by sigma around the inserted block, g's by tau inside it.
        let place = |x: usize, at: usize| if x < at { x } else { x + n - 1 };
        let mut induced = vec![0u8; f.n_vertices() + n - 1];
        for x in 0..f.n_vertices() {
            if x != v {
                induced[place(x, v)] = place(sigma[x] as usize, sigma[v] as usize) as u8;
            }
        }
        for w in 0..n {
            induced[v + w] = (sigma[v] as usize + tau[w] as usize) as u8;
        }

        let mut base: Vec<RawGraph> = compose_raw(&f, v, &g)
            .unwrap()
            .iter()
            .map(|t| t.relabel(&induced))
            .collect();
        let mut moved =
            compose_raw(&f.relabel(&sigma), sigma[v] as usize, &g.relabel(&tau)).unwrap();
        base.sort_unstable();
        moved.sort_unstable();
        assert_eq!(base, moved, "case {case}: {f:?} via {sigma:?}, {g:?} via {tau:?} at {v}");
    }
}

#[test]
fn orientation_sum_commutes_with_insertion() {
    let pool = nonvanishing_pool();
    for g in pool.iter().filter(|g| g.n_edges() <= 3) {
        for h in pool.iter().filter(|h| h.n_edges() <= 3) {
            for v in 0..g.n_vertices() {
                // Expand everything to labelled directed graphs before the
                // final canonical collapse, on both sides.
                let mut composed_then_oriented = GraphSum::new();
                for t in compose_raw(g, v, h).unwrap() {
                    for o in orient_raw(&t).unwrap() {
                        composed_then_oriented.add_raw(&o, rat_int(1)).unwrap();
                    }
                }
                let mut oriented_then_composed = GraphSum::new();
                for go in orient_raw(g).unwrap() {
                    for ho in orient_raw(h).unwrap() {
                        for t in compose_raw(&go, v, &ho).unwrap() {
                            oriented_then_composed.add_raw(&t, rat_int(1)).unwrap();
                        }
                    }
                }
                assert_eq!(
                    composed_then_oriented, oriented_then_composed,
                    "orientation morphism at vertex {v} for {g:?}, {h:?}"
                );
            }
        }
    }
}

#[test]
fn orientation_counts_and_masses() {
    // A single undirected edge orients both ways; the two directed edges are
    // one class, collected with total coefficient 2.
    let oriented = orient(&lie_generator()).unwrap();
    let mass: Rational = oriented.iter().map(|(_, c)| c.clone()).sum();
    assert_eq!(oriented.len(), 1);
    assert_eq!(mass, rat_int(2));

    // An edgeless graph maps to its directed counterpart unchanged.
    let lone = sum_of(&und(1, &[]));
    assert_eq!(orient(&lone).unwrap(), sum_of(&dir(1, &[])));

    // A triangle has 2^3 raw orientations; their canonical sum agrees with
    // an independent orientation-by-bitmask enumeration.
    let tri = und(3, &[(0, 1), (0, 2), (1, 2)]);
    let raw = orient_raw(&tri).unwrap();
    assert_eq!(raw.len(), 8);
    assert!(raw.iter().all(|t| t.directed() && t.n_edges() == 3));
    let mut from_masks = GraphSum::new();
    for mask in 0u8..8 {
        let edges: Vec<(u8, u8)> = tri
            .edges()
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| if mask >> i & 1 == 1 { (b, a) } else { (a, b) })
            .collect();
        from_masks.add_raw(&RawGraph::new(3, true, edges).unwrap(), rat_int(1)).unwrap();
    }
    let mut from_orient = GraphSum::new();
    for t in &raw {
        from_orient.add_raw(t, rat_int(1)).unwrap();
    }
    assert_eq!(from_orient, from_masks);
}

#[test]
fn insertion_rejects_bad_slots_and_kinds() {
    let e = sum_of(&und(2, &[(0, 1)]));
    assert!(matches!(compose_gra(&e, 0, &e), Err(OperadError::SlotOutOfRange(0, 2))));
    assert!(matches!(compose_gra(&e, 3, &e), Err(OperadError::SlotOutOfRange(3, 2))));

    let mut mixed = sum_of(&und(2, &[(0, 1)]));
    mixed.add_sum(&sum_of(&und(1, &[(0, 0)])));
    assert!(matches!(compose_gra(&mixed, 1, &e), Err(OperadError::MixedArity(_, _))));

    assert!(matches!(
        orient(&sum_of(&dir(2, &[(0, 1)]))),
        Err(OperadError::WrongKind(_))
    ));
}

#[test]
fn insertion_reports_term_explosions() {
    // Thirteen parallel edges reconnect into a 3-vertex graph in 3^13 ways.
    let hub = und(2, &[(0, 1); 13]);
    let big = und(3, &[]);
    assert!(matches!(compose_raw(&hub, 0, &big), Err(OperadError::TooManyTerms)));
}

//! Exact cohomology: the tetrahedron class, wheel classes and their
//! certificates, and the graded dimension comparison between the external
//! and directed families.

use gc_complexes::{
    bigraded_cohomology_dim, bracket_plain, cohomology_dim, differential, enumerate_basis,
    mc_directed, wheel, Bigrade, ComplexError, ComplexId, ComplexKind, GradedBasis, ImageOutcome,
    RankMode, Rational,
};
use graph_core::{rat_int, GraphSum, RawGraph};
use num_traits::Zero;

fn coords(basis: &GradedBasis, sum: &GraphSum) -> Vec<Rational> {
    let mut v = vec![rat_int(0); basis.len()];
    for (g, c) in sum.iter() {
        let i = basis.position(g).expect("class outside the basis");
        v[i] = c.clone();
    }
    v
}

#[test]
fn tetrahedron_class_generates_its_bigrade() {
    let gc = ComplexId::new(ComplexKind::GC);
    let b = Bigrade::new(4, 6);
    assert_eq!(cohomology_dim(&gc, b, RankMode::Exact).unwrap(), 1);

    let basis = enumerate_basis(&gc, b).unwrap();
    let mut t = GraphSum::new();
    let k4 = RawGraph::new(4, false, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    t.add_raw(&k4, rat_int(1)).unwrap();
    let v = coords(&basis, &t);
    assert!(v.iter().any(|c| !c.is_zero()));

    // Closed: the outgoing differential kills it.
    let out = differential(&gc, b).unwrap();
    assert!(out.apply(&v).unwrap().iter().all(|c| c.is_zero()));

    // Not exact: an explicit functional vanishes on the incoming image but
    // not on the class.
    let into = differential(&gc, Bigrade::new(3, 5)).unwrap();
    match into.in_image(&v).unwrap() {
        ImageOutcome::Preimage(_) => panic!("the class must not be a boundary"),
        ImageOutcome::NotInImage { witness } => {
            let dot = dot(&witness, &v);
            assert!(!dot.is_zero());
            assert_kills_columns(&witness, &into);
        }
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).fold(rat_int(0), |acc, x| acc + x)
}

fn assert_kills_columns(witness: &[Rational], m: &gc_complexes::SparseRationalMatrix) {
    let mut col_dots = vec![rat_int(0); m.cols()];
    for (i, j, c) in m.entries() {
        col_dots[*j] += &witness[*i] * c;
    }
    assert!(col_dots.iter().all(|c| c.is_zero()), "witness must kill the image");
}

#[test]
fn even_wheels_vanish_by_symmetry() {
    for n in [2usize, 4, 6] {
        assert!(wheel(n, false).unwrap().is_zero(), "rim {n}, undirected");
        assert!(wheel(n, true).unwrap().is_zero(), "rim {n}, directed");
    }
}

#[test]
fn three_wheel_vanishes_and_its_bigrade_is_acyclic() {
    // The length-3 cycle is killed by its reflection, so its class is zero
    // and a vanishing preimage certifies exactness; on top of that the
    // whole bigrade carries no cohomology at all.
    assert!(wheel(3, false).unwrap().is_zero());
    assert!(wheel(3, true).unwrap().is_zero());
    let dgc = ComplexId::new(ComplexKind::DGC);
    assert_eq!(cohomology_dim(&dgc, Bigrade::new(3, 3), RankMode::Exact).unwrap(), 0);
}

#[test]
fn five_wheel_is_closed_and_not_exact() {
    let dgc = ComplexId::new(ComplexKind::DGC);
    let b = Bigrade::new(5, 5);

    let w5 = wheel(5, true).unwrap();
    assert_eq!(w5.len(), 4, "four orientation classes survive");
    assert!(wheel(5, false).unwrap().len() == 1);

    // Closed, both as a raw bracket and in matrix coordinates.
    assert!(bracket_plain(&w5, &mc_directed()).unwrap().is_zero());
    let basis = enumerate_basis(&dgc, b).unwrap();
    assert_eq!(basis.len(), 4);
    let v = coords(&basis, &w5);
    assert_eq!(v.iter().filter(|c| !c.is_zero()).count(), 4);
    let out = differential(&dgc, b).unwrap();
    assert!(out.apply(&v).unwrap().iter().all(|c| c.is_zero()));

    // Not exact, with an explicit infeasibility certificate against the
    // incoming differential.
    let into = differential(&dgc, Bigrade::new(4, 4)).unwrap();
    assert_eq!((into.rows(), into.cols()), (4, 3));
    match into.in_image(&v).unwrap() {
        ImageOutcome::Preimage(_) => panic!("the five-wheel must not be a boundary"),
        ImageOutcome::NotInImage { witness } => {
            assert_eq!(dot(&witness, &v), rat_int(-10));
            assert_kills_columns(&witness, &into);
        }
    }

    // It generates everything there is at its bigrade.
    assert_eq!(cohomology_dim(&dgc, b, RankMode::Exact).unwrap(), 1);
    assert_eq!(cohomology_dim(&dgc, Bigrade::new(4, 4), RankMode::Exact).unwrap(), 0);
}

#[test]
fn directed_cohomology_near_the_diagonal_is_as_frozen() {
    let dgc = ComplexId::new(ComplexKind::DGC);
    let table = [
        (1usize, 1usize, 1), // the tadpole class
        (2, 2, 0),
        (2, 3, 0),
        (2, 4, 0),
        (3, 3, 0),
        (3, 4, 0),
        (3, 5, 0),
    ];
    for (n, k, want) in table {
        assert_eq!(
            cohomology_dim(&dgc, Bigrade::new(n, k), RankMode::Exact).unwrap(),
            want,
            "dGC({n},{k})"
        );
    }
}

#[test]
fn graded_table_matches_the_directed_complex_plus_the_scaling_line() {
    // Reading the external differential through the edge-count grading, the
    // external cohomology is the directed cohomology plus one extra class
    // on the one-input line at zero edges — the scaling element's slot.
    let xgc = ComplexId::new(ComplexKind::XGC);
    let dgc = ComplexId::new(ComplexKind::DGC);
    for n in 0usize..=2 {
        for k in 0usize..=4 {
            if n == 0 && k == 0 {
                continue;
            }
            let lhs = bigraded_cohomology_dim(&xgc, Bigrade::new(n, k)).unwrap();
            let rhs = cohomology_dim(&dgc, Bigrade::new(n, k), RankMode::Exact).unwrap()
                + usize::from(n == 1 && k == 0);
            assert_eq!(lhs, rhs, "bigrade ({n},{k})");
        }
    }
    for (n, k) in [(3usize, 2usize), (3, 3)] {
        let lhs = bigraded_cohomology_dim(&xgc, Bigrade::new(n, k)).unwrap();
        let rhs = cohomology_dim(&dgc, Bigrade::new(n, k), RankMode::Exact).unwrap();
        assert_eq!(lhs, rhs, "bigrade ({n},{k})");
    }
}

#[test]
fn the_two_cohomology_readings_agree_for_plain_kinds() {
    // With no edge-preserving component the graded reading collapses to the
    // plain one.
    let cases = [
        (ComplexKind::DGC, 1usize, 1usize),
        (ComplexKind::DGC, 3, 4),
        (ComplexKind::GC, 4, 6),
        (ComplexKind::FGC, 3, 3),
    ];
    for (kind, n, k) in cases {
        let id = ComplexId::new(kind);
        let b = Bigrade::new(n, k);
        assert_eq!(
            bigraded_cohomology_dim(&id, b).unwrap(),
            cohomology_dim(&id, b, RankMode::Exact).unwrap(),
            "{}({n},{k})",
            id.slug()
        );
    }
}

#[test]
fn plain_cohomology_refuses_multi_component_differentials() {
    // For the external kinds the raw per-bigrade blocks are not square-zero
    // and naive kernel-minus-image bookkeeping goes negative; the plain
    // reading must fail loudly rather than return nonsense.
    let xgc = ComplexId::new(ComplexKind::XGC);
    let r = cohomology_dim(&xgc, Bigrade::new(2, 2), RankMode::Exact);
    assert!(matches!(r, Err(ComplexError::Internal(_))));
}

//! Sparse elimination checked against a dense textbook oracle.
//!
//! The oracle is a plain dense reduced-row-echelon computation with
//! first-column partial pivoting — no sparsity, no pivot heuristics — so the
//! two implementations share no code paths beyond the scalar type.

use exact_linalg::{
    ImageOutcome, LinalgError, RankMode, Rational, SparseRationalMatrix, MODULAR_PRIMES,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn rat2(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

// ---------------------------------------------------------------------------
// Dense oracle
// ---------------------------------------------------------------------------

fn dense_of(m: &SparseRationalMatrix) -> Vec<Vec<Rational>> {
    let mut d = vec![vec![Rational::zero(); m.cols()]; m.rows()];
    for (i, j, v) in m.entries() {
        d[*i][*j] = v.clone();
    }
    d
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(d: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = d.len();
    let cols = if rows == 0 { 0 } else { d[0].len() };
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !d[i][c].is_zero()) else { continue };
        d.swap(r, p);
        let inv = d[r][c].clone();
        for x in &mut d[r] {
            *x /= &inv;
        }
        for i in 0..rows {
            if i != r && !d[i][c].is_zero() {
                let f = d[i][c].clone();
                for j in 0..cols {
                    let t = &f * &d[r][j];
                    d[i][j] -= t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivot_cols
}

fn oracle_rank(m: &SparseRationalMatrix) -> usize {
    let mut d = dense_of(m);
    rref(&mut d).len()
}

// ---------------------------------------------------------------------------
// Random matrices
// ---------------------------------------------------------------------------

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, spice: bool) -> SparseRationalMatrix {
    let mut triplets = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(0.4) {
                let n = rng.gen_range(-9i64..=9);
                if n == 0 {
                    continue;
                }
                let d = rng.gen_range(1i64..=4);
                let mut v = rat2(n, d);
                if spice && rng.gen_bool(0.15) {
                    // Entries divisible by a verification prime stress the
                    // disagreement path of the modular protocol.
                    let p = MODULAR_PRIMES[rng.gen_range(0..2)];
                    v *= Rational::from_integer(BigInt::from(p));
                }
                if spice && rng.gen_bool(0.1) {
                    v *= Rational::from_integer(BigInt::from(10u8).pow(25));
                }
                triplets.push((i, j, v));
            }
        }
    }
    SparseRationalMatrix::from_triplets(rows, cols, triplets).unwrap()
}

// ---------------------------------------------------------------------------
// Frozen cases
// ---------------------------------------------------------------------------

#[test]
fn identity_has_full_rank() {
    let m = SparseRationalMatrix::identity(2);
    assert_eq!(m.rank(RankMode::Exact), 2);
    assert_eq!(m.rank(RankMode::ModularVerified), 2);
    assert!(m.kernel_basis().is_empty());
}

#[test]
fn zero_map_kernel_is_everything() {
    let m = SparseRationalMatrix::zero(3, 4);
    assert_eq!(m.rank(RankMode::Exact), 0);
    let basis = m.kernel_basis();
    assert_eq!(basis.len(), 4);
    for (k, v) in basis.iter().enumerate() {
        let mut unit = vec![Rational::zero(); 4];
        unit[k] = Rational::one();
        assert_eq!(v, &unit);
    }
}

#[test]
fn prime_entry_exercises_the_tie_break() {
    // The single entry vanishes mod the first prime but not the second; the
    // third prime plus the exact minor check must settle on rank 1.
    let m = SparseRationalMatrix::from_triplets(
        1,
        1,
        [(0, 0, Rational::from_integer(BigInt::from(MODULAR_PRIMES[0])))],
    )
    .unwrap();
    assert_eq!(m.rank(RankMode::Exact), 1);
    assert_eq!(m.rank(RankMode::ModularVerified), 1);
}

#[test]
fn small_solve_with_known_answer() {
    // x + y = 3, x - y = 1  =>  x = 2, y = 1.
    let m = SparseRationalMatrix::from_triplets(
        2,
        2,
        [(0, 0, rat(1)), (0, 1, rat(1)), (1, 0, rat(1)), (1, 1, rat(-1))],
    )
    .unwrap();
    match m.in_image(&[rat(3), rat(1)]).unwrap() {
        ImageOutcome::Preimage(x) => assert_eq!(x, vec![rat(2), rat(1)]),
        other => panic!("expected a preimage, got {other:?}"),
    }
}

#[test]
fn infeasible_solve_yields_a_checkable_witness() {
    // Rows sum to zero, so anything outside that hyperplane is unreachable.
    let m = SparseRationalMatrix::from_triplets(
        2,
        2,
        [(0, 0, rat(1)), (0, 1, rat(2)), (1, 0, rat(-1)), (1, 1, rat(-2))],
    )
    .unwrap();
    match m.in_image(&[rat(1), rat(0)]).unwrap() {
        ImageOutcome::NotInImage { witness } => {
            assert_eq!(m.apply_transpose(&witness).unwrap(), vec![rat(0), rat(0)]);
            let pairing: Rational = witness[0].clone() * rat(1) + witness[1].clone() * rat(0);
            assert!(!pairing.is_zero());
        }
        other => panic!("expected infeasibility, got {other:?}"),
    }
}

#[test]
fn dimension_mismatches_are_reported() {
    let m = SparseRationalMatrix::identity(2);
    assert!(matches!(
        m.apply(&[rat(1)]),
        Err(LinalgError::DimensionMismatch { expected: 2, got: 1 })
    ));
    assert!(m.in_image(&[rat(1)]).is_err());
    assert!(matches!(
        SparseRationalMatrix::from_triplets(1, 1, [(1, 0, rat(1))]),
        Err(LinalgError::IndexOutOfRange(1, 0, 1, 1))
    ));
}

#[test]
fn triplet_text_round_trips() {
    let m = SparseRationalMatrix::from_triplets(
        3,
        4,
        [(0, 1, rat2(-2, 3)), (2, 0, rat(5)), (1, 3, rat2(1, 7))],
    )
    .unwrap();
    let text = m.to_text();
    assert!(text.starts_with("3 4 3\n"));
    assert_eq!(SparseRationalMatrix::from_text(&text).unwrap(), m);

    for bad in ["", "1 2\n", "1 1 1\n0 0 x\n", "1 1 2\n0 0 1\n", "1 1 1\n0 0 1/0\n"] {
        assert!(SparseRationalMatrix::from_text(bad).is_err(), "{bad:?}");
    }
}

#[test]
fn duplicate_triplets_are_summed() {
    let m = SparseRationalMatrix::from_triplets(
        1,
        1,
        [(0, 0, rat(2)), (0, 0, rat(-2))],
    )
    .unwrap();
    assert_eq!(m.nnz(), 0);
    assert_eq!(m.rank(RankMode::Exact), 0);
}

// ---------------------------------------------------------------------------
// Randomized agreement
// ---------------------------------------------------------------------------

#[test]
fn rank_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..60 {
        let rows = rng.gen_range(1..=8);
        let cols = rng.gen_range(1..=8);
        let m = random_matrix(&mut rng, rows, cols, false);
        let want = oracle_rank(&m);
        assert_eq!(m.rank(RankMode::Exact), want, "trial {trial}: {m:?}");
        assert_eq!(m.rank(RankMode::ModularVerified), want, "trial {trial} modular");
    }
}

#[test]
fn modular_rank_survives_adversarial_entries() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..40 {
        let rows = rng.gen_range(1..=7);
        let cols = rng.gen_range(1..=7);
        let m = random_matrix(&mut rng, rows, cols, true);
        assert_eq!(
            m.rank(RankMode::ModularVerified),
            oracle_rank(&m),
            "trial {trial}: {m:?}"
        );
    }
}

#[test]
fn rank_nullity_and_kernel_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let rows = rng.gen_range(1..=8);
        let cols = rng.gen_range(1..=8);
        let m = random_matrix(&mut rng, rows, cols, false);
        let rank = m.rank(RankMode::Exact);
        let basis = m.kernel_basis();
        assert_eq!(rank + basis.len(), cols, "rank—nullity");
        for v in &basis {
            assert!(m.apply(v).unwrap().iter().all(Rational::is_zero));
        }
        if !basis.is_empty() {
            // Independence: stacking the kernel vectors as columns gives a
            // matrix of full column rank.
            let triplets = basis.iter().enumerate().flat_map(|(k, v)| {
                v.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(move |(i, x)| (i, k, x.clone()))
                    .collect::<Vec<_>>()
            });
            let stacked =
                SparseRationalMatrix::from_triplets(cols, basis.len(), triplets).unwrap();
            assert_eq!(stacked.rank(RankMode::Exact), basis.len());
        }
    }
}

#[test]
fn preimages_and_witnesses_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut hits = 0;
    let mut misses = 0;
    for _ in 0..60 {
        let rows = rng.gen_range(1..=8);
        let cols = rng.gen_range(1..=8);
        let m = random_matrix(&mut rng, rows, cols, false);

        // A vector manufactured to lie in the image must come back solvable.
        let x: Vec<Rational> = (0..cols).map(|_| rat(rng.gen_range(-5i64..=5))).collect();
        let v = m.apply(&x).unwrap();
        match m.in_image(&v).unwrap() {
            ImageOutcome::Preimage(x2) => assert_eq!(m.apply(&x2).unwrap(), v),
            other => panic!("image vector declared infeasible: {other:?}"),
        }

        // An arbitrary vector either solves exactly or is certified out.
        let w: Vec<Rational> = (0..rows).map(|_| rat(rng.gen_range(-5i64..=5))).collect();
        match m.in_image(&w).unwrap() {
            ImageOutcome::Preimage(x2) => {
                hits += 1;
                assert_eq!(m.apply(&x2).unwrap(), w);
            }
            ImageOutcome::NotInImage { witness } => {
                misses += 1;
                assert!(m.apply_transpose(&witness).unwrap().iter().all(Rational::is_zero));
                let pairing: Rational = witness
                    .iter()
                    .zip(&w)
                    .map(|(a, b)| a * b)
                    .fold(Rational::zero(), |acc, t| acc + t);
                assert!(!pairing.is_zero(), "witness must separate the target");
            }
        }
    }
    assert!(hits > 0 && misses > 0, "both outcomes should occur (got {hits}/{misses})");
}

// ---------------------------------------------------------------------------
// Multiplication
// ---------------------------------------------------------------------------

#[test]
fn multiply_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d756c);
    for trial in 0..40 {
        let rows = rng.gen_range(0usize..7);
        let mid = rng.gen_range(0usize..7);
        let cols = rng.gen_range(0usize..7);
        let a = random_matrix(&mut rng, rows, mid, trial % 3 == 0);
        let b = random_matrix(&mut rng, mid, cols, trial % 4 == 0);
        let p = a.multiply(&b).unwrap();
        assert_eq!((p.rows(), p.cols()), (rows, cols));
        let (da, db, dp) = (dense_of(&a), dense_of(&b), dense_of(&p));
        for i in 0..rows {
            for l in 0..cols {
                let mut acc = Rational::zero();
                for j in 0..mid {
                    acc += &da[i][j] * &db[j][l];
                }
                assert_eq!(dp[i][l], acc, "entry ({i},{l}) of trial {trial}");
            }
        }
    }
}

#[test]
fn multiply_identities_and_mismatch() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = random_matrix(&mut rng, 4, 5, true);
    assert_eq!(SparseRationalMatrix::identity(4).multiply(&m).unwrap(), m);
    assert_eq!(m.multiply(&SparseRationalMatrix::identity(5)).unwrap(), m);
    let z = m.multiply(&SparseRationalMatrix::zero(5, 3)).unwrap();
    assert_eq!(z.nnz(), 0);
    assert!(matches!(
        m.multiply(&random_matrix(&mut rng, 4, 2, false)),
        Err(LinalgError::DimensionMismatch { .. })
    ));
}

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::elim::Eliminator;
use crate::matrix::SparseRationalMatrix;
use crate::Rational;

/// Fixed 62-bit primes for the modular rank fast path: the first two are
/// always used, the third only when they disagree.
pub const MODULAR_PRIMES: [u64; 3] =
    [4_611_686_018_427_387_847, 4_611_686_018_427_387_817, 4_611_686_018_427_387_787];

fn mod_u64(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    let digits = r.to_u64_digits().1;
    digits.first().copied().unwrap_or(0)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Reduces every entry mod `p`; `None` when a denominator vanishes mod `p`.
fn reduce(m: &SparseRationalMatrix, p: u64) -> Option<Vec<BTreeMap<usize, u64>>> {
    let mut rows: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); m.rows()];
    for (i, j, v) in m.entries() {
        let denom = mod_u64(v.denom(), p);
        if denom == 0 {
            return None;
        }
        let numer = mod_u64(v.numer(), p);
        let val = mul_mod(numer, inv_mod(denom, p), p);
        if val != 0 {
            rows[*i].insert(*j, val);
        }
    }
    Some(rows)
}

/// Sparse elimination mod `p` with the same pivot heuristic as the exact
/// path; returns the rank and the pivot (row, col) positions.
fn rank_mod_p(m: &SparseRationalMatrix, p: u64) -> Option<(usize, Vec<(usize, usize)>)> {
    let mut rows = reduce(m, p)?;
    let n_cols = m.cols();
    let mut active = vec![true; rows.len()];
    let mut col_count = vec![0usize; n_cols];
    for row in &rows {
        for (&c, _) in row.iter() {
            col_count[c] += 1;
        }
    }

    let mut pivots = Vec::new();
    loop {
        let mut best: Option<(usize, (usize, usize))> = None;
        for (i, row) in rows.iter().enumerate() {
            if !active[i] || row.is_empty() {
                continue;
            }
            let r = row.len();
            for (&j, _) in row.iter() {
                let key = ((r - 1) * (col_count[j] - 1), (j, i));
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        let Some((_, (pj, pi))) = best else { break };

        let prow = std::mem::take(&mut rows[pi]);
        active[pi] = false;
        for (&c, _) in prow.iter() {
            col_count[c] -= 1;
        }
        let pinv = inv_mod(prow[&pj], p);

        for i in 0..rows.len() {
            if !active[i] {
                continue;
            }
            let Some(&entry) = rows[i].get(&pj) else { continue };
            let factor = mul_mod(entry, pinv, p);
            for (&c, &v) in &prow {
                let delta = mul_mod(factor, v, p);
                let old = rows[i].get(&c).copied().unwrap_or(0);
                let new = (old + p - delta) % p;
                if old == 0 && new != 0 {
                    col_count[c] += 1;
                } else if old != 0 && new == 0 {
                    col_count[c] -= 1;
                }
                if new == 0 {
                    rows[i].remove(&c);
                } else {
                    rows[i].insert(c, new);
                }
            }
        }
        pivots.push((pi, pj));
    }
    Some((pivots.len(), pivots))
}

/// Exact-arithmetic check that the submatrix on the pivot rows and columns
/// is nonsingular, certifying the true rank is at least the modular one.
fn pivot_minor_nonsingular(m: &SparseRationalMatrix, pivots: &[(usize, usize)]) -> bool {
    if pivots.is_empty() {
        return true;
    }
    let row_index: BTreeMap<usize, usize> =
        pivots.iter().enumerate().map(|(k, &(r, _))| (r, k)).collect();
    let col_index: BTreeMap<usize, usize> =
        pivots.iter().enumerate().map(|(k, &(_, c))| (c, k)).collect();
    let triplets: Vec<(usize, usize, Rational)> = m
        .entries()
        .iter()
        .filter_map(|(i, j, v)| {
            match (row_index.get(i), col_index.get(j)) {
                (Some(&ri), Some(&ci)) => Some((ri, ci, v.clone())),
                _ => None,
            }
        })
        .collect();
    let minor = match SparseRationalMatrix::from_triplets(pivots.len(), pivots.len(), triplets) {
        Ok(m) => m,
        Err(_) => return false,
    };
    Eliminator::new(&minor, None, false).run().pivot_count() == pivots.len()
}

/// The verified modular protocol: two fixed primes must agree (a third
/// breaks ties towards the larger answer, since a modular rank never
/// exceeds the true one) and the pivotal minor must be exactly nonsingular.
/// `None` means the caller should fall back to exact elimination.
pub fn rank_modular_verified(m: &SparseRationalMatrix) -> Option<usize> {
    if m.rows() == 0 || m.cols() == 0 || m.nnz() == 0 {
        return Some(0);
    }
    let (r1, pivots1) = rank_mod_p(m, MODULAR_PRIMES[0])?;
    let (r2, _) = rank_mod_p(m, MODULAR_PRIMES[1])?;
    let (rank, pivots) = if r1 == r2 {
        (r1, pivots1)
    } else {
        let (r3, pivots3) = rank_mod_p(m, MODULAR_PRIMES[2])?;
        if r3 == r1.max(r2) {
            (r3, pivots3)
        } else {
            return None;
        }
    };
    pivot_minor_nonsingular(m, &pivots).then_some(rank)
}

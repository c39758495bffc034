use std::collections::BTreeMap;

use num_traits::Zero;

use crate::matrix::{ImageOutcome, SparseRationalMatrix};
use crate::Rational;

/// Exact sparse Gaussian elimination with Markowitz-style minimum-fill
/// pivoting.  Used for rank, kernel bases, and augmented solves; optionally
/// tracks each working row as a combination of original rows so that
/// infeasible solves yield a checkable left-nullspace certificate.
pub struct Eliminator {
    rows: Vec<BTreeMap<usize, Rational>>,
    combos: Option<Vec<BTreeMap<usize, Rational>>>,
    active: Vec<bool>,
    col_count: Vec<usize>,
    n_eligible: usize,
}

pub struct Pivot {
    pub col: usize,
    row: BTreeMap<usize, Rational>,
}

pub struct Eliminated {
    pivots: Vec<Pivot>,
    leftovers: Vec<(usize, BTreeMap<usize, Rational>, Option<BTreeMap<usize, Rational>>)>,
    n_eligible: usize,
}

impl Eliminator {
    /// `augment` appends one extra column holding the given vector; it is
    /// never eligible as a pivot.  `track_combos` enables certificates.
    pub fn new(
        m: &SparseRationalMatrix,
        augment: Option<&[Rational]>,
        track_combos: bool,
    ) -> Self {
        let n_eligible = m.cols();
        let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); m.rows()];
        for (i, j, v) in m.entries() {
            rows[*i].insert(*j, v.clone());
        }
        if let Some(v) = augment {
            for (i, val) in v.iter().enumerate() {
                if !val.is_zero() {
                    rows[i].insert(n_eligible, val.clone());
                }
            }
        }
        let mut col_count = vec![0usize; n_eligible];
        for row in &rows {
            for (&c, _) in row.range(..n_eligible) {
                col_count[c] += 1;
            }
        }
        let combos = track_combos.then(|| {
            (0..m.rows())
                .map(|i| BTreeMap::from([(i, Rational::from_integer(1.into()))]))
                .collect()
        });
        Eliminator { rows, combos, active: vec![true; m.rows()], col_count, n_eligible }
    }

    fn select_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, (usize, usize))> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if !self.active[i] {
                continue;
            }
            let r = row.range(..self.n_eligible).count();
            if r == 0 {
                continue;
            }
            for (&j, _) in row.range(..self.n_eligible) {
                let score = (r - 1) * (self.col_count[j] - 1);
                let key = (score, (j, i));
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        best.map(|(_, (j, i))| (i, j))
    }

    pub fn run(mut self) -> Eliminated {
        let mut pivots = Vec::new();
        while let Some((pi, pj)) = self.select_pivot() {
            let prow = std::mem::take(&mut self.rows[pi]);
            let pcombo = self.combos.as_mut().map(|c| std::mem::take(&mut c[pi]));
            self.active[pi] = false;
            for (&c, _) in prow.range(..self.n_eligible) {
                self.col_count[c] -= 1;
            }
            let pval = prow[&pj].clone();

            for i in 0..self.rows.len() {
                if !self.active[i] {
                    continue;
                }
                let Some(entry) = self.rows[i].get(&pj) else { continue };
                let factor = entry / &pval;
                for (&c, v) in &prow {
                    let delta = &factor * v;
                    let slot = self.rows[i].entry(c).or_insert_with(Rational::zero);
                    let was_zero = slot.is_zero();
                    *slot -= delta;
                    let now_zero = slot.is_zero();
                    if now_zero {
                        self.rows[i].remove(&c);
                    }
                    if c < self.n_eligible {
                        if was_zero && !now_zero {
                            self.col_count[c] += 1;
                        } else if !was_zero && now_zero {
                            self.col_count[c] -= 1;
                        }
                    }
                }
                if let (Some(combos), Some(pc)) = (self.combos.as_mut(), pcombo.as_ref()) {
                    for (&r, v) in pc {
                        let slot = combos[i].entry(r).or_insert_with(Rational::zero);
                        *slot -= &factor * v;
                        if slot.is_zero() {
                            combos[i].remove(&r);
                        }
                    }
                }
            }
            pivots.push(Pivot { col: pj, row: prow });
        }

        let mut leftovers = Vec::new();
        for i in 0..self.rows.len() {
            if self.active[i] {
                let row = std::mem::take(&mut self.rows[i]);
                let combo = self.combos.as_mut().map(|c| std::mem::take(&mut c[i]));
                leftovers.push((i, row, combo));
            }
        }
        Eliminated { pivots, leftovers, n_eligible: self.n_eligible }
    }
}

impl Eliminated {
    pub fn pivot_count(&self) -> usize {
        self.pivots.len()
    }

    /// Solves the homogeneous system: one vector per free column, with a 1
    /// in that coordinate and pivot coordinates back-substituted in reverse
    /// elimination order.
    pub fn kernel_basis(&self, cols: usize) -> Vec<Vec<Rational>> {
        let pivot_cols: std::collections::BTreeSet<usize> =
            self.pivots.iter().map(|p| p.col).collect();
        let mut basis = Vec::new();
        for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
            let mut x = vec![Rational::zero(); cols];
            x[free] = Rational::from_integer(1.into());
            self.back_substitute(&mut x, cols);
            basis.push(x);
        }
        basis
    }

    /// Writes the pivot coordinates of a solution into `x`, treating column
    /// `cols` (when present in a pivot row) as the right-hand side.
    fn back_substitute(&self, x: &mut [Rational], cols: usize) {
        for p in self.pivots.iter().rev() {
            let mut rhs = p.row.get(&cols).cloned().unwrap_or_else(Rational::zero);
            for (&c, v) in p.row.range(..cols) {
                if c != p.col {
                    rhs -= v * &x[c];
                }
            }
            x[p.col] = rhs / &p.row[&p.col];
        }
    }

    /// Interprets an augmented elimination: either every eliminated row is
    /// consistent and back-substitution produces a preimage, or some zero
    /// row of the coefficient part has a nonzero right-hand side and its
    /// tracked combination certifies infeasibility.
    pub fn image_outcome(&self, rows: usize, cols: usize) -> ImageOutcome {
        for (_, row, combo) in &self.leftovers {
            debug_assert!(row.range(..self.n_eligible).next().is_none());
            if row.get(&cols).is_some() {
                let mut witness = vec![Rational::zero(); rows];
                for (&r, v) in combo.as_ref().expect("solves track combinations") {
                    witness[r] = v.clone();
                }
                return ImageOutcome::NotInImage { witness };
            }
        }
        let mut x = vec![Rational::zero(); cols];
        self.back_substitute(&mut x, cols);
        ImageOutcome::Preimage(x)
    }
}

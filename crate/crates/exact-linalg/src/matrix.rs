use std::collections::BTreeMap;

use num_traits::Zero;

use crate::elim::Eliminator;
use crate::modular;
use crate::{LinalgError, Rational, RankMode, Result, MAX_NNZ};

/// An immutable sparse matrix with exact rational entries, stored as a
/// deduplicated, sorted triplet list with no explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseRationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Rational)>,
}

/// Outcome of a membership-in-image solve for `m·x = v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImageOutcome {
    /// A vector `x` with `m·x = v` exactly.
    Preimage(Vec<Rational>),
    /// Infeasibility certificate: `y` with `yᵀ·m = 0` but `yᵀ·v ≠ 0`.
    NotInImage { witness: Vec<Rational> },
}

impl SparseRationalMatrix {
    /// Builds a matrix from (row, col, value) triplets; duplicate positions
    /// are summed, exact zeros dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(LinalgError::IndexOutOfRange(i, j, rows, cols));
            }
            let slot = map.entry((i, j)).or_insert_with(Rational::zero);
            *slot += v;
            if slot.is_zero() {
                map.remove(&(i, j));
            }
        }
        if map.len() > MAX_NNZ {
            return Err(LinalgError::TooManyNonzeros(map.len()));
        }
        let entries = map.into_iter().map(|((i, j), v)| (i, j, v)).collect();
        Ok(SparseRationalMatrix { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseRationalMatrix { rows, cols, entries: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n).map(|i| (i, i, Rational::from_integer(1.into()))).collect();
        SparseRationalMatrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, Rational)] {
        &self.entries
    }

    /// Matrix-vector product `m·x`.
    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: x.len() });
        }
        let mut out = vec![Rational::zero(); self.rows];
        for (i, j, v) in &self.entries {
            out[*i] += v * &x[*j];
        }
        Ok(out)
    }

    /// Transposed product `mᵀ·y`.
    pub fn apply_transpose(&self, y: &[Rational]) -> Result<Vec<Rational>> {
        if y.len() != self.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, got: y.len() });
        }
        let mut out = vec![Rational::zero(); self.cols];
        for (i, j, v) in &self.entries {
            out[*j] += v * &y[*i];
        }
        Ok(out)
    }

    /// Matrix product `self · other`.
    pub fn multiply(&self, other: &SparseRationalMatrix) -> Result<SparseRationalMatrix> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        // Group the right factor's entries by row so each left entry scans
        // only the compatible ones.
        let mut right_rows: Vec<&[(usize, usize, Rational)]> = vec![&[]; other.rows];
        let mut start = 0;
        while start < other.entries.len() {
            let row = other.entries[start].0;
            let end = other.entries[start..]
                .iter()
                .position(|e| e.0 != row)
                .map_or(other.entries.len(), |p| start + p);
            right_rows[row] = &other.entries[start..end];
            start = end;
        }
        let mut map: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (i, j, v) in &self.entries {
            for (_, l, w) in right_rows[*j] {
                let slot = map.entry((*i, *l)).or_insert_with(Rational::zero);
                *slot += v * w;
                if slot.is_zero() {
                    map.remove(&(*i, *l));
                }
            }
        }
        if map.len() > MAX_NNZ {
            return Err(LinalgError::TooManyNonzeros(map.len()));
        }
        let entries = map.into_iter().map(|((i, j), v)| (i, j, v)).collect();
        Ok(SparseRationalMatrix { rows: self.rows, cols: other.cols, entries })
    }

    pub fn rank(&self, mode: RankMode) -> usize {
        match mode {
            RankMode::Exact => self.rank_exact(),
            RankMode::ModularVerified => match modular::rank_modular_verified(self) {
                Some(r) => r,
                None => {
                    log::warn!(
                        "modular rank verification failed on a {}x{} matrix; \
                         falling back to exact elimination",
                        self.rows,
                        self.cols
                    );
                    self.rank_exact()
                }
            },
        }
    }

    fn rank_exact(&self) -> usize {
        Eliminator::new(self, None, false).run().pivot_count()
    }

    /// A deterministic spanning set of `ker m`, one vector per free column,
    /// each with a 1 in its free coordinate (hence linearly independent).
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let done = Eliminator::new(self, None, false).run();
        done.kernel_basis(self.cols)
    }

    /// Solves `m·x = v`, returning either a preimage or an exact
    /// infeasibility certificate.
    pub fn in_image(&self, v: &[Rational]) -> Result<ImageOutcome> {
        if v.len() != self.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, got: v.len() });
        }
        let done = Eliminator::new(self, Some(v), true).run();
        Ok(done.image_outcome(self.rows, self.cols))
    }

    /// Serializes as shared triplet text: a `rows cols nnz` header line, then
    /// one `i j p/q` line per entry (0-based indices, sorted).
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.entries.len());
        for (i, j, v) in &self.entries {
            let val = if v.denom() == &num_bigint::BigInt::from(1) {
                v.numer().to_string()
            } else {
                format!("{}/{}", v.numer(), v.denom())
            };
            out.push_str(&format!("{i} {j} {val}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |why: String| LinalgError::Parse(why);
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("empty matrix text".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        if dims.len() != 3 {
            return Err(bad(format!("header needs 'rows cols nnz', got {header:?}")));
        }
        let (rows, cols, nnz) = (dims[0], dims[1], dims[2]);
        let mut triplets = Vec::with_capacity(nnz);
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(bad(format!("bad entry line {line:?}")));
            }
            let i: usize = toks[0].parse().map_err(|_| bad(format!("bad row in {line:?}")))?;
            let j: usize = toks[1].parse().map_err(|_| bad(format!("bad col in {line:?}")))?;
            let v = parse_rational(toks[2])
                .ok_or_else(|| bad(format!("bad value in {line:?}")))?;
            triplets.push((i, j, v));
        }
        if triplets.len() != nnz {
            return Err(bad(format!(
                "header promises {nnz} entries, found {}",
                triplets.len()
            )));
        }
        Self::from_triplets(rows, cols, triplets)
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let mut parts = s.splitn(2, '/');
    let numer: num_bigint::BigInt = parts.next()?.parse().ok()?;
    let denom: num_bigint::BigInt = match parts.next() {
        None => 1.into(),
        Some(d) => d.parse().ok()?,
    };
    if denom.is_zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

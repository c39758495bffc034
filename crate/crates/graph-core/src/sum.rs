use std::collections::BTreeMap;

use num_traits::Zero;

use crate::canon::{canonicalize_with, CanonOptions};
use crate::graph::{CanonicalGraph, RawGraph};
use crate::rat::Rational;
use crate::Result;

/// A finite linear combination of canonical graphs with exact rational
/// coefficients.  Terms that canonicalize to zero are dropped on entry,
/// coefficients that cancel are pruned, so equality of sums is structural
/// equality of the underlying maps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphSum {
    terms: BTreeMap<CanonicalGraph, Rational>,
}

impl GraphSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalGraph, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &CanonicalGraph) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `coeff` times an already-canonical graph.
    pub fn add_canonical(&mut self, g: CanonicalGraph, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(g);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Canonicalizes `g` under `opts` and adds `coeff` times the result;
    /// graphs that vanish by symmetry contribute nothing.
    pub fn add_raw_with(&mut self, g: &RawGraph, coeff: Rational, opts: &CanonOptions) -> Result<()> {
        let s = canonicalize_with(g, opts)?;
        if s.zero {
            return Ok(());
        }
        let signed = if s.sign < 0 { -coeff } else { coeff };
        self.add_canonical(s.graph, signed);
        Ok(())
    }

    /// `add_raw_with` for plain graphs (every edge odd, no pinned vertices).
    pub fn add_raw(&mut self, g: &RawGraph, coeff: Rational) -> Result<()> {
        self.add_raw_with(g, coeff, &CanonOptions::plain())
    }

    pub fn add_sum(&mut self, other: &GraphSum) {
        for (g, c) in &other.terms {
            self.add_canonical(g.clone(), c.clone());
        }
    }

    pub fn scale(&mut self, factor: &Rational) {
        if factor.is_zero() {
            self.terms.clear();
            return;
        }
        for c in self.terms.values_mut() {
            *c *= factor;
        }
    }

    pub fn negated(&self) -> GraphSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn into_terms(self) -> BTreeMap<CanonicalGraph, Rational> {
        self.terms
    }
}

impl FromIterator<(CanonicalGraph, Rational)> for GraphSum {
    fn from_iter<T: IntoIterator<Item = (CanonicalGraph, Rational)>>(iter: T) -> Self {
        let mut sum = GraphSum::new();
        for (g, c) in iter {
            sum.add_canonical(g, c);
        }
        sum
    }
}

//! Exact polynomials in `n` commuting variables `x1..xn` and `n`
//! anticommuting variables `xi1..xin`, with the odd Poisson bracket.
//!
//! A monomial stores the exponent vector of the commuting part and a bitmask
//! for the anticommuting part, read in increasing index order; the sign
//! conventions below all reduce to counting crossings against that order.

use std::collections::BTreeMap;
use std::fmt;

use graph_core::{format_rational, parse_rational, rat_int, Rational};
use num_traits::{One, Zero};

use crate::{PolyError, MAX_VARS};

type Result<T> = std::result::Result<T, PolyError>;

/// One product of variables: `x1^a1 .. xn^an * xi{i1,..,ik}` with the
/// anticommuting indices strictly increasing.  The coefficient lives in the
/// enclosing [`SuperPolynomial`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    /// Exponents of the commuting variables, one entry per variable.
    xdeg: Vec<u16>,
    /// Bitmask of the anticommuting variables present (bit `k` is `xi{k+1}`).
    xi: u32,
}

/// Iterates the set bits of `mask` from lowest to highest.
pub(crate) fn mask_bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..u32::BITS as usize).filter(move |k| mask >> k & 1 == 1)
}

impl Monomial {
    /// The constant monomial `1` over `n_vars` variables.
    pub fn one(n_vars: usize) -> Self {
        Monomial {
            xdeg: vec![0; n_vars],
            xi: 0,
        }
    }

    /// Builds a monomial from explicit exponents and anticommuting indices
    /// (0-based).  Errors on out-of-range indices.
    pub fn from_parts(n_vars: usize, xdeg: &[(usize, u16)], xi: &[usize]) -> Result<Self> {
        if n_vars > MAX_VARS {
            return Err(PolyError::TooManyVars(n_vars));
        }
        let mut m = Monomial::one(n_vars);
        for &(var, deg) in xdeg {
            if var >= n_vars {
                return Err(PolyError::Parse(format!(
                    "variable index {var} out of range for {n_vars} variables"
                )));
            }
            m.xdeg[var] += deg;
        }
        for &k in xi {
            if k >= n_vars {
                return Err(PolyError::Parse(format!(
                    "xi index {k} out of range for {n_vars} variables"
                )));
            }
            if m.xi >> k & 1 == 1 {
                return Err(PolyError::Parse(format!("repeated xi index {k}")));
            }
            m.xi |= 1 << k;
        }
        Ok(m)
    }

    pub fn n_vars(&self) -> usize {
        self.xdeg.len()
    }

    /// Exponent of `x{k+1}`.
    pub fn x_exp(&self, k: usize) -> u16 {
        self.xdeg[k]
    }

    /// Whether `xi{k+1}` occurs.
    pub fn has_xi(&self, k: usize) -> bool {
        self.xi >> k & 1 == 1
    }

    /// Total degree in the commuting variables.
    pub fn x_degree(&self) -> usize {
        self.xdeg.iter().map(|&d| d as usize).sum()
    }

    /// Total degree in the anticommuting variables.
    pub fn xi_degree(&self) -> usize {
        self.xi.count_ones() as usize
    }

    /// Combined degree in all variables.
    pub fn weight(&self) -> usize {
        self.x_degree() + self.xi_degree()
    }

    /// Parity of the anticommuting degree: 0 = even, 1 = odd.
    pub fn parity(&self) -> u8 {
        (self.xi.count_ones() & 1) as u8
    }

    /// Left derivative in `xi{k+1}` at the monomial level: removes the
    /// factor after commuting it past every lower-index one.  `None` when
    /// the factor is absent.
    pub fn dxi_mono(&self, k: usize) -> Option<(Monomial, i8)> {
        if self.xi >> k & 1 == 0 {
            return None;
        }
        let below = (self.xi & ((1u32 << k) - 1)).count_ones();
        let mut m = self.clone();
        m.xi &= !(1u32 << k);
        Some((m, if below % 2 == 0 { 1 } else { -1 }))
    }

    /// Derivative in `x{k+1}` at the monomial level: decrements the
    /// exponent and returns the old exponent as the multiplier.  `None`
    /// when the exponent is zero.
    pub fn dx_mono(&self, k: usize) -> Option<(Monomial, u16)> {
        let d = self.xdeg[k];
        if d == 0 {
            return None;
        }
        let mut m = self.clone();
        m.xdeg[k] = d - 1;
        Some((m, d))
    }

    /// Product with `other`; `None` when a shared anticommuting variable
    /// squares to zero.  The sign is the parity of crossings needed to merge
    /// the two increasing index lists (self's factors pass other's smaller
    /// ones).
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, i8)> {
        debug_assert_eq!(self.xdeg.len(), other.xdeg.len());
        if self.xi & other.xi != 0 {
            return None;
        }
        let mut crossings = 0u32;
        for k in mask_bits(self.xi) {
            crossings += (other.xi & ((1u32 << k) - 1)).count_ones();
        }
        let xdeg = self
            .xdeg
            .iter()
            .zip(&other.xdeg)
            .map(|(a, b)| a + b)
            .collect();
        let m = Monomial {
            xdeg,
            xi: self.xi | other.xi,
        };
        Some((m, if crossings % 2 == 0 { 1 } else { -1 }))
    }
}

/// A finite linear combination of [`Monomial`]s with exact rational
/// coefficients, over a fixed number of variable pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperPolynomial {
    n_vars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl SuperPolynomial {
    pub fn zero(n_vars: usize) -> Self {
        SuperPolynomial {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(Monomial::one(n_vars), c);
        p
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, Rational::one())
    }

    pub fn from_monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.n_vars());
        p.add_term(m, c);
        p
    }

    /// The monomial `x{k+1}` (0-based `k`).
    pub fn x_var(n_vars: usize, k: usize) -> Result<Self> {
        Ok(Self::from_monomial(
            Monomial::from_parts(n_vars, &[(k, 1)], &[])?,
            Rational::one(),
        ))
    }

    /// The monomial `xi{k+1}` (0-based `k`).
    pub fn xi_var(n_vars: usize, k: usize) -> Result<Self> {
        Ok(Self::from_monomial(
            Monomial::from_parts(n_vars, &[], &[k])?,
            Rational::one(),
        ))
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
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

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c * m`, removing the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.n_vars(), self.n_vars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(PolyError::VarMismatch {
                left: self.n_vars,
                right: other.n_vars,
            });
        }
        Ok(())
    }

    pub fn add_assign_poly(&mut self, other: &Self) -> Result<()> {
        self.check_vars(other)?;
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_assign_poly(other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.negated())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n_vars);
        }
        SuperPolynomial {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn negated(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Graded product: anticommuting factors pick up a sign when they cross.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.n_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, sign)) = ma.mul(mb) {
                    out.add_term(m, ca * cb * rat_int(sign as i64));
                }
            }
        }
        Ok(out)
    }

    /// Partial derivative in the commuting variable `x{k+1}`.
    pub fn dx(&self, k: usize) -> Self {
        let mut out = Self::zero(self.n_vars);
        for (m, c) in &self.terms {
            let d = m.xdeg[k];
            if d == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.xdeg[k] = d - 1;
            out.add_term(m2, c * rat_int(d as i64));
        }
        out
    }

    /// Left partial derivative in the anticommuting variable `xi{k+1}`:
    /// the factor is commuted to the front, past every lower-index factor,
    /// before being removed.
    pub fn dxi(&self, k: usize) -> Self {
        let mut out = Self::zero(self.n_vars);
        for (m, c) in &self.terms {
            if m.xi >> k & 1 == 0 {
                continue;
            }
            let below = (m.xi & ((1u32 << k) - 1)).count_ones();
            let sign = if below % 2 == 0 { 1 } else { -1 };
            let mut m2 = m.clone();
            m2.xi &= !(1u32 << k);
            out.add_term(m2, c * rat_int(sign));
        }
        out
    }

    /// Splits into (even, odd) anticommuting-degree parts.
    pub fn split_xi_parity(&self) -> (Self, Self) {
        let mut even = Self::zero(self.n_vars);
        let mut odd = Self::zero(self.n_vars);
        for (m, c) in &self.terms {
            if m.parity() == 0 {
                even.add_term(m.clone(), c.clone());
            } else {
                odd.add_term(m.clone(), c.clone());
            }
        }
        (even, odd)
    }

    /// Parity of the anticommuting degree if uniform across terms; `None`
    /// for zero or mixed-parity polynomials.
    pub fn xi_parity(&self) -> Option<u8> {
        let mut parity = None;
        for m in self.terms.keys() {
            match parity {
                None => parity = Some(m.parity()),
                Some(p) if p == m.parity() => {}
                Some(_) => return None,
            }
        }
        parity
    }

    /// `(x-degree, xi-degree)` if both are uniform across terms.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut bd = None;
        for m in self.terms.keys() {
            let here = (m.x_degree(), m.xi_degree());
            match bd {
                None => bd = Some(here),
                Some(b) if b == here => {}
                Some(_) => return None,
            }
        }
        bd
    }

    /// Largest combined degree of any term (0 for the zero polynomial).
    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(Monomial::weight).max().unwrap_or(0)
    }

    /// Applies the linear substitution `x{i+1} -> sum_j ax[i][j] x{j+1}`,
    /// `xi{i+1} -> sum_j axi[i][j] xi{j+1}`.  The anticommuting linear forms
    /// are multiplied in increasing order of the original index, so crossing
    /// signs are handled by the graded product.
    pub fn substitute(&self, ax: &[Vec<Rational>], axi: &[Vec<Rational>]) -> Result<Self> {
        let n = self.n_vars;
        if ax.len() != n || axi.len() != n || ax.iter().chain(axi).any(|row| row.len() != n) {
            return Err(PolyError::VarMismatch {
                left: n,
                right: ax.len().min(axi.len()),
            });
        }
        let linear = |row: &[Rational], odd: bool| -> Result<Self> {
            let mut p = Self::zero(n);
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let m = if odd {
                    Monomial::from_parts(n, &[], &[j])?
                } else {
                    Monomial::from_parts(n, &[(j, 1)], &[])?
                };
                p.add_term(m, c.clone());
            }
            Ok(p)
        };
        let mut out = Self::zero(n);
        for (m, c) in &self.terms {
            let mut acc = Self::constant(n, c.clone());
            for (k, &d) in m.xdeg.iter().enumerate() {
                let form = linear(&ax[k], false)?;
                for _ in 0..d {
                    acc = acc.mul(&form)?;
                }
            }
            for k in mask_bits(m.xi) {
                acc = acc.mul(&linear(&axi[k], true)?)?;
            }
            out.add_assign_poly(&acc)?;
        }
        Ok(out)
    }

    /// Renders the polynomial in the line format parsed by [`parse`].
    /// Terms appear in the monomial order of the internal map; the zero
    /// polynomial prints as `0`.
    pub fn print(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut factors = vec![format_rational(c)];
            for (k, &d) in m.xdeg.iter().enumerate() {
                match d {
                    0 => {}
                    1 => factors.push(format!("x{}", k + 1)),
                    _ => factors.push(format!("x{}^{}", k + 1, d)),
                }
            }
            if m.xi != 0 {
                let idx: Vec<String> = mask_bits(m.xi).map(|k| (k + 1).to_string()).collect();
                factors.push(format!("xi{{{}}}", idx.join(",")));
            }
            parts.push(factors.join(" * "));
        }
        parts.join(" + ")
    }

    /// Parses the format produced by [`print`]: terms joined by `+`, each a
    /// `*`-separated product of an optional rational coefficient, factors
    /// `xN` / `xN^K`, and at most one `xi{i1,i2,..}` with strictly
    /// increasing 1-based indices.
    pub fn parse(text: &str, n_vars: usize) -> Result<Self> {
        if n_vars > MAX_VARS {
            return Err(PolyError::TooManyVars(n_vars));
        }
        let mut out = Self::zero(n_vars);
        let text = text.trim();
        if text.is_empty() {
            return Err(PolyError::Parse("empty polynomial text".into()));
        }
        if text == "0" {
            return Ok(out);
        }
        for term in text.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(PolyError::Parse("empty term between '+' signs".into()));
            }
            let mut coeff = Rational::one();
            let mut mono = Monomial::one(n_vars);
            for (pos, chunk) in term.split('*').enumerate() {
                let chunk = chunk.trim();
                if chunk.is_empty() {
                    return Err(PolyError::Parse(format!("empty factor in term {term:?}")));
                }
                if let Some(rest) = chunk.strip_prefix("xi{") {
                    let inner = rest
                        .strip_suffix('}')
                        .ok_or_else(|| PolyError::Parse(format!("unterminated xi set {chunk:?}")))?;
                    let mut prev: Option<usize> = None;
                    for part in inner.split(',') {
                        let idx: usize = part.trim().parse().map_err(|_| {
                            PolyError::Parse(format!("bad xi index {part:?} in {chunk:?}"))
                        })?;
                        if idx == 0 || idx > n_vars {
                            return Err(PolyError::Parse(format!(
                                "xi index {idx} out of range 1..={n_vars}"
                            )));
                        }
                        if prev.is_some_and(|p| p >= idx) {
                            return Err(PolyError::Parse(format!(
                                "xi indices must be strictly increasing in {chunk:?}"
                            )));
                        }
                        prev = Some(idx);
                        if mono.xi >> (idx - 1) & 1 == 1 {
                            return Err(PolyError::Parse(format!(
                                "xi{idx} appears twice in term {term:?}"
                            )));
                        }
                        mono.xi |= 1 << (idx - 1);
                    }
                } else if let Some(rest) = chunk.strip_prefix('x') {
                    let (var, exp) = match rest.split_once('^') {
                        Some((v, e)) => (v, e),
                        None => (rest, "1"),
                    };
                    let var: usize = var.trim().parse().map_err(|_| {
                        PolyError::Parse(format!("bad variable in factor {chunk:?}"))
                    })?;
                    let exp: u16 = exp.trim().parse().map_err(|_| {
                        PolyError::Parse(format!("bad exponent in factor {chunk:?}"))
                    })?;
                    if var == 0 || var > n_vars {
                        return Err(PolyError::Parse(format!(
                            "variable x{var} out of range 1..={n_vars}"
                        )));
                    }
                    mono.xdeg[var - 1] += exp;
                } else if pos == 0 {
                    coeff = parse_rational(chunk)
                        .map_err(|e| PolyError::Parse(format!("bad coefficient {chunk:?}: {e}")))?;
                } else {
                    return Err(PolyError::Parse(format!(
                        "unrecognized factor {chunk:?} in term {term:?}"
                    )));
                }
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print())
    }
}

/// Odd Poisson bracket of polyvector fields:
///
/// `[a, b] = sum_k (da/dxi_k)(db/dx_k) + (-1)^{|a|} sum_k (da/dx_k)(db/dxi_k)`
///
/// computed per anticommuting-parity component of `a` (the sign only sees
/// `a`'s parity).  It is graded symmetric for the shifted grading in which a
/// field of anticommuting degree `d` has super degree `d - 1`:
/// `[a, b] = (-1)^{|a||b|} [b, a]` with `|a| = d(a) - 1`.
pub fn schouten(a: &SuperPolynomial, b: &SuperPolynomial) -> Result<SuperPolynomial> {
    if a.n_vars() != b.n_vars() {
        return Err(PolyError::VarMismatch {
            left: a.n_vars(),
            right: b.n_vars(),
        });
    }
    let n = a.n_vars();
    let mut out = SuperPolynomial::zero(n);
    let (even, odd) = a.split_xi_parity();
    for (part, sign) in [(even, rat_int(1)), (odd, rat_int(-1))] {
        if part.is_zero() {
            continue;
        }
        for k in 0..n {
            out.add_assign_poly(&part.dxi(k).mul(&b.dx(k))?)?;
            out.add_assign_poly(&part.dx(k).mul(&b.dxi(k))?.scale(&sign))?;
        }
    }
    Ok(out)
}

/// The Euler field `sum_k x{k} xi{k}`, bidegree (1,1).
pub fn euler_field(n_vars: usize) -> SuperPolynomial {
    let mut p = SuperPolynomial::zero(n_vars);
    for k in 0..n_vars {
        let m = Monomial::from_parts(n_vars, &[(k, 1)], &[k]).expect("index in range");
        p.add_term(m, Rational::one());
    }
    p
}

/// Embeds a matrix as the bidegree-(1,1) field `sum_ij m[i][j] x{i} xi{j}`.
/// Under [`schouten`] this is a Lie algebra map for the commutator:
/// `[gl(A), gl(B)] = gl(AB - BA)`.
pub fn gl_element(n_vars: usize, m: &[Vec<Rational>]) -> Result<SuperPolynomial> {
    if m.len() != n_vars || m.iter().any(|row| row.len() != n_vars) {
        return Err(PolyError::VarMismatch {
            left: n_vars,
            right: m.len(),
        });
    }
    let mut p = SuperPolynomial::zero(n_vars);
    for (i, row) in m.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
                p.add_term(Monomial::from_parts(n_vars, &[(i, 1)], &[j])?, c.clone());
            }
        }
    }
    Ok(p)
}

/// Inverse of [`gl_element`]: the matrix of a bidegree-(1,1) field, or
/// `None` when some term is not of the form `x{i} xi{j}`.
pub fn gl_matrix_of(p: &SuperPolynomial) -> Option<Vec<Vec<Rational>>> {
    let n = p.n_vars();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for (mono, c) in p.iter() {
        if mono.x_degree() != 1 || mono.xi_degree() != 1 {
            return None;
        }
        let i = (0..n).find(|&k| mono.x_exp(k) == 1)?;
        let j = mask_bits(mono.xi).next()?;
        m[i][j] = c.clone();
    }
    Some(m)
}

/// Exact inverse transpose of a square rational matrix, or `None` if
/// singular.  Substituting `x -> A x` and `xi -> contragredient(A) xi`
/// leaves `sum_k x{k} xi{k}` invariant.
pub fn contragredient(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return None;
    }
    // Gauss-Jordan on [A | I].
    let mut work: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !work[r][col].is_zero())?;
        work.swap(col, pivot);
        let inv = work[col][col].clone();
        for entry in &mut work[col] {
            *entry = &*entry / &inv;
        }
        for r in 0..n {
            if r != col && !work[r][col].is_zero() {
                let factor = work[r][col].clone();
                for c in 0..2 * n {
                    let delta = &factor * &work[col][c];
                    work[r][c] = &work[r][c] - &delta;
                }
            }
        }
    }
    // Transpose of the inverse: entry (i, j) of the result is inv[j][i].
    Some(
        (0..n)
            .map(|i| (0..n).map(|j| work[j][n + i].clone()).collect())
            .collect(),
    )
}

/// All monomials over `n_vars` variables of combined degree exactly `w`,
/// in increasing monomial order.
pub fn monomials_with_weight(n_vars: usize, w: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for mask in 0..(1u64 << n_vars) {
        let mask = mask as u32;
        let s = mask.count_ones() as usize;
        if s > w {
            continue;
        }
        let mut xdeg = vec![0u16; n_vars];
        push_compositions(&mut out, &mut xdeg, 0, w - s, mask);
    }
    out.sort();
    out
}

fn push_compositions(out: &mut Vec<Monomial>, xdeg: &mut Vec<u16>, pos: usize, left: usize, mask: u32) {
    if pos == xdeg.len() {
        if left == 0 {
            out.push(Monomial {
                xdeg: xdeg.clone(),
                xi: mask,
            });
        }
        return;
    }
    for d in 0..=left {
        xdeg[pos] = d as u16;
        push_compositions(out, xdeg, pos + 1, left - d, mask);
    }
    xdeg[pos] = 0;
}

/// All monomials of combined degree at most `w`, in increasing monomial
/// order within each weight, weights ascending.
pub fn monomials_up_to_weight(n_vars: usize, w: usize) -> Vec<Monomial> {
    (0..=w)
        .flat_map(|k| monomials_with_weight(n_vars, k))
        .collect()
}

//! Weight-truncated Chevalley–Eilenberg cochains of the odd Poisson
//! algebra of polyvector fields, and the graph-to-cochain assignment.
//!
//! A cochain of arity `r` stores one value per canonically ordered tuple of
//! monomials of combined weight up to a cap; evaluation on arbitrary tuples
//! sorts the arguments and pays the Koszul sign of the sort (two odd
//! arguments crossing flip the sign; a repeated odd argument kills the
//! tuple).  Asking about a tuple beyond the cap is an explicit error, never
//! a silent zero: truncation bounds certify, they do not guess.

use std::collections::BTreeMap;

use graph_core::{rat_int, Rational};
use gra_operads::{xgraph_degree, XGraphSum};
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::action::xgra_term_action;
use crate::poly::{euler_field, monomials_with_weight, schouten, Monomial, SuperPolynomial};
use crate::PolyError;

type Result<T> = std::result::Result<T, PolyError>;

/// Sorts a tuple of monomials into canonical (increasing) order.  Returns
/// the sorted tuple and the Koszul sign of the sort, or `None` when an odd
/// monomial repeats (the tuple is zero by antisymmetry).
pub(crate) fn canonicalize_tuple(args: &[Monomial]) -> Option<(Vec<Monomial>, i8)> {
    let mut tuple = args.to_vec();
    let mut sign = 1i8;
    // Insertion sort, tracking odd-odd crossings; tuples are tiny.
    for i in 1..tuple.len() {
        let mut j = i;
        while j > 0 && tuple[j] < tuple[j - 1] {
            if tuple[j].parity() == 1 && tuple[j - 1].parity() == 1 {
                sign = -sign;
            }
            tuple.swap(j, j - 1);
            j -= 1;
        }
    }
    for pair in tuple.windows(2) {
        if pair[0] == pair[1] && pair[0].parity() == 1 {
            return None;
        }
    }
    Some((tuple, sign))
}

/// Koszul sign of reading the tuple in the order `perm` (indices into
/// `args`): each pair of odd arguments that appears reversed flips it.
fn permutation_sign(perm: &[usize], parities: &[u8]) -> i8 {
    let mut sign = 1i8;
    for u in 0..perm.len() {
        for v in u + 1..perm.len() {
            if perm[u] > perm[v] && parities[perm[u]] == 1 && parities[perm[v]] == 1 {
                sign = -sign;
            }
        }
    }
    sign
}

/// All canonically ordered tuples of `arity` monomials over `n_vars`
/// variables with combined weight at most `weight_cap`, in increasing
/// tuple order.  Tuples repeating an odd monomial are omitted.
pub fn canonical_tuples_up_to_weight(
    n_vars: usize,
    arity: usize,
    weight_cap: usize,
) -> Vec<Vec<Monomial>> {
    let by_weight: Vec<Vec<Monomial>> = (0..=weight_cap)
        .map(|w| monomials_with_weight(n_vars, w))
        .collect();
    let mut out = Vec::new();
    let mut current: Vec<Monomial> = Vec::with_capacity(arity);
    fn rec(
        slot: usize,
        arity: usize,
        budget: usize,
        by_weight: &[Vec<Monomial>],
        current: &mut Vec<Monomial>,
        out: &mut Vec<Vec<Monomial>>,
    ) {
        if slot == arity {
            out.push(current.clone());
            return;
        }
        for bucket in by_weight.iter().take(budget + 1) {
            for m in bucket {
                if let Some(last) = current.last() {
                    if m < last || (m == last && m.parity() == 1) {
                        continue;
                    }
                }
                current.push(m.clone());
                rec(slot + 1, arity, budget - m.weight(), by_weight, current, out);
                current.pop();
            }
        }
    }
    rec(0, arity, weight_cap, &by_weight, &mut current, &mut out);
    out.sort();
    out
}

/// A multilinear graded-symmetric map from tuples of polyvector fields to
/// polyvector fields, stored on canonical monomial tuples of combined
/// weight at most `weight_cap`.
///
/// `parity` is the super parity of the map: the anticommuting degree of a
/// value minus the anticommuting degrees of the arguments, mod 2.  It
/// drives the sign in [`chevalley_diff`] and is validated against every
/// stored value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChevalleyCochain {
    arity: usize,
    n_vars: usize,
    weight_cap: usize,
    parity: u8,
    values: BTreeMap<Vec<Monomial>, SuperPolynomial>,
}

impl ChevalleyCochain {
    /// Builds a cochain by evaluating `f` on every canonical tuple within
    /// the weight cap.  Every nonzero value must match the declared parity.
    pub fn build<F>(
        arity: usize,
        n_vars: usize,
        weight_cap: usize,
        parity: u8,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(&[Monomial]) -> Result<SuperPolynomial> + Sync,
    {
        let tuples = canonical_tuples_up_to_weight(n_vars, arity, weight_cap);
        let computed: Vec<(Vec<Monomial>, SuperPolynomial)> = tuples
            .into_par_iter()
            .map(|t| f(&t).map(|v| (t, v)))
            .collect::<Result<_>>()?;
        let mut values = BTreeMap::new();
        for (t, v) in computed {
            if v.is_zero() {
                continue;
            }
            let args_parity: u32 = t.iter().map(|m| m.parity() as u32).sum();
            let expected = ((parity as u32 + args_parity) % 2) as u8;
            match v.xi_parity() {
                Some(p) if p == expected => {}
                _ => {
                    return Err(PolyError::NotHomogeneous(format!(
                        "cochain value at {:?} has wrong or mixed parity (expected {expected})",
                        t.iter().map(|m| m.weight()).collect::<Vec<_>>()
                    )))
                }
            }
            values.insert(t, v);
        }
        Ok(ChevalleyCochain {
            arity,
            n_vars,
            weight_cap,
            parity: parity % 2,
            values,
        })
    }

    pub fn zero(arity: usize, n_vars: usize, weight_cap: usize, parity: u8) -> Self {
        ChevalleyCochain {
            arity,
            n_vars,
            weight_cap,
            parity: parity % 2,
            values: BTreeMap::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn weight_cap(&self) -> usize {
        self.weight_cap
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = (&Vec<Monomial>, &SuperPolynomial)> {
        self.values.iter()
    }

    /// The `(input weight, output weight)` pairs the cochain touches.
    pub fn support_bigrades(&self) -> std::collections::BTreeSet<(usize, usize)> {
        let mut out = std::collections::BTreeSet::new();
        for (t, v) in &self.values {
            let d_in: usize = t.iter().map(Monomial::weight).sum();
            for (m, _) in v.iter() {
                out.insert((d_in, m.weight()));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity, self.n_vars, self.weight_cap, self.parity);
        }
        ChevalleyCochain {
            arity: self.arity,
            n_vars: self.n_vars,
            weight_cap: self.weight_cap,
            parity: self.parity,
            values: self
                .values
                .iter()
                .map(|(t, v)| (t.clone(), v.scale(c)))
                .collect(),
        }
    }

    /// Sum of two cochains of identical shape (arity, variables, cap,
    /// parity).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            return Err(PolyError::ArityMismatch {
                expected: self.arity,
                got: other.arity,
            });
        }
        if self.n_vars != other.n_vars {
            return Err(PolyError::VarMismatch {
                left: self.n_vars,
                right: other.n_vars,
            });
        }
        if self.weight_cap != other.weight_cap || self.parity != other.parity {
            return Err(PolyError::NotHomogeneous(
                "cochain sum needs matching weight cap and parity".into(),
            ));
        }
        let mut values = self.values.clone();
        for (t, v) in &other.values {
            match values.entry(t.clone()) {
                std::collections::btree_map::Entry::Vacant(slot) => {
                    slot.insert(v.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut slot) => {
                    let sum = slot.get().add(v)?;
                    if sum.is_zero() {
                        slot.remove();
                    } else {
                        *slot.get_mut() = sum;
                    }
                }
            }
        }
        Ok(ChevalleyCochain {
            arity: self.arity,
            n_vars: self.n_vars,
            weight_cap: self.weight_cap,
            parity: self.parity,
            values,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Evaluates on a tuple of monomials.  Errors when the combined weight
    /// exceeds the cap — the stored truncation cannot answer there.
    pub fn evaluate_monomials(&self, args: &[Monomial]) -> Result<SuperPolynomial> {
        if args.len() != self.arity {
            return Err(PolyError::ArityMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        let weight: usize = args.iter().map(Monomial::weight).sum();
        if weight > self.weight_cap {
            return Err(PolyError::WeightCapExceeded {
                weight,
                cap: self.weight_cap,
            });
        }
        let Some((tuple, sign)) = canonicalize_tuple(args) else {
            return Ok(SuperPolynomial::zero(self.n_vars));
        };
        match self.values.get(&tuple) {
            None => Ok(SuperPolynomial::zero(self.n_vars)),
            Some(v) => Ok(v.scale(&rat_int(sign as i64))),
        }
    }

    /// Multilinear evaluation on polynomial arguments.
    pub fn evaluate(&self, args: &[SuperPolynomial]) -> Result<SuperPolynomial> {
        if args.len() != self.arity {
            return Err(PolyError::ArityMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        for a in args {
            if a.n_vars() != self.n_vars {
                return Err(PolyError::VarMismatch {
                    left: self.n_vars,
                    right: a.n_vars(),
                });
            }
        }
        let mut combos: Vec<(Vec<Monomial>, Rational)> = vec![(Vec::new(), Rational::one())];
        for arg in args {
            let mut next = Vec::new();
            for (prefix, c) in &combos {
                for (m, a) in arg.iter() {
                    let mut tuple = prefix.clone();
                    tuple.push(m.clone());
                    next.push((tuple, c * a));
                }
            }
            combos = next;
        }
        let mut out = SuperPolynomial::zero(self.n_vars);
        for (tuple, c) in combos {
            let v = self.evaluate_monomials(&tuple)?;
            out.add_assign_poly(&v.scale(&c))?;
        }
        Ok(out)
    }
}

/// Graph-to-cochain assignment for sums of graphs-with-inputs: the raw
/// action is graded-symmetrized over the argument order and scaled by
/// `2^-arity`.  With that normalization the assignment intertwines the
/// graph differential and [`chevalley_diff`] exactly (the factor absorbs
/// the doubled two-vertex generator of the graph differential, once per
/// argument slot).
///
/// The sum's truncation bound, when present, must exceed the weight cap
/// (`bound >= weight_cap + 1`); otherwise dropped terms could still hit
/// tuples inside the cap and the call errors.
pub fn xgra_cochain(x: &XGraphSum, n_vars: usize, weight_cap: usize) -> Result<ChevalleyCochain> {
    if let Some(bound) = x.bound() {
        if bound < weight_cap + 1 {
            return Err(PolyError::TruncationTooSmall {
                bound,
                weight: weight_cap,
                needed: weight_cap + 1,
            });
        }
    }
    let r = x.n_inputs();
    let mut parity = None;
    for (cg, _) in x.iter() {
        let p = (xgraph_degree(cg).rem_euclid(2)) as u8;
        match parity {
            None => parity = Some(p),
            Some(q) if q == p => {}
            Some(_) => {
                return Err(PolyError::NotHomogeneous(
                    "graph sum mixes degrees of both parities".into(),
                ))
            }
        }
    }
    let parity = parity.unwrap_or(0);
    let norm = Rational::new(BigInt::one(), BigInt::from(1u64 << r));
    let perms: Vec<Vec<usize>> = (0..r).permutations(r).collect();
    let perms = if perms.is_empty() { vec![vec![]] } else { perms };
    ChevalleyCochain::build(r, n_vars, weight_cap, parity, |tuple| {
        let parities: Vec<u8> = tuple.iter().map(Monomial::parity).collect();
        let mut acc = SuperPolynomial::zero(n_vars);
        for perm in &perms {
            let sign = permutation_sign(perm, &parities);
            let permuted: Vec<Monomial> = perm.iter().map(|&i| tuple[i].clone()).collect();
            for (cg, coeff) in x.iter() {
                let acted = xgra_term_action(cg, &permuted, n_vars)?;
                acc.add_assign_poly(&acted.scale(&(coeff * rat_int(sign as i64))))?;
            }
        }
        Ok(acc.scale(&norm))
    })
}

fn mono_poly(m: &Monomial) -> SuperPolynomial {
    SuperPolynomial::from_monomial(m.clone(), Rational::one())
}

/// Chevalley–Eilenberg differential: for a cochain `c` of arity `r`,
///
/// `(dc)(a_0..a_r) = sum_i ±[c(..skip a_i..), a_i]
///                   - (-1)^{|c|} sum_{i<j} ± c([a_i, a_j], ..rest..)`
///
/// with Koszul signs from moving `a_i` out past the later arguments
/// (first sum) and moving `a_i, a_j` to the front (second sum), using the
/// anticommuting parities of the arguments.
pub fn chevalley_diff(c: &ChevalleyCochain) -> Result<ChevalleyCochain> {
    let r = c.arity();
    let n_vars = c.n_vars();
    let flip = c.parity() == 1;
    ChevalleyCochain::build(
        r + 1,
        n_vars,
        c.weight_cap(),
        (c.parity() + 1) % 2,
        |tuple| {
            let parities: Vec<u32> = tuple.iter().map(|m| m.parity() as u32).collect();
            let total = tuple.len();
            let mut acc = SuperPolynomial::zero(n_vars);

            // sum_i ±[c(tuple \ i), a_i], sign: a_i moves past the suffix.
            for i in 0..total {
                let suffix: u32 = parities[i + 1..].iter().sum();
                let sign = if parities[i] * suffix % 2 == 1 { -1 } else { 1 };
                let rest: Vec<Monomial> = tuple
                    .iter()
                    .enumerate()
                    .filter(|&(m, _)| m != i)
                    .map(|(_, v)| v.clone())
                    .collect();
                let inner = c.evaluate_monomials(&rest)?;
                if inner.is_zero() {
                    continue;
                }
                let br = schouten(&inner, &mono_poly(&tuple[i]))?;
                acc.add_assign_poly(&br.scale(&rat_int(sign)))?;
            }

            // sum_{i<j} ± c([a_i, a_j], rest), sign: a_i then a_j move to
            // the front past their predecessors.
            let mut pair_acc = SuperPolynomial::zero(n_vars);
            for i in 0..total {
                for j in i + 1..total {
                    let prefix_i: u32 = parities[..i].iter().sum();
                    let prefix_j: u32 = parities[..j].iter().sum::<u32>() - parities[i];
                    let exp = parities[i] * prefix_i + parities[j] * prefix_j;
                    let sign = if exp % 2 == 1 { -1 } else { 1 };
                    let br = schouten(&mono_poly(&tuple[i]), &mono_poly(&tuple[j]))?;
                    if br.is_zero() {
                        continue;
                    }
                    let mut args: Vec<SuperPolynomial> = vec![br];
                    for (m, v) in tuple.iter().enumerate() {
                        if m != i && m != j {
                            args.push(mono_poly(v));
                        }
                    }
                    let inner = c.evaluate(&args)?;
                    pair_acc.add_assign_poly(&inner.scale(&rat_int(sign)))?;
                }
            }
            let pair_sign = if flip { rat_int(1) } else { rat_int(-1) };
            acc.add_assign_poly(&pair_acc.scale(&pair_sign))?;
            Ok(acc)
        },
    )
}

/// The length-`n` wheel cochain on matrix-like fields: nonzero only on
/// tuples of bidegree-(1,1) monomials, where it takes the signed sum of
/// traces `sum_sigma sgn(sigma) tr(M_{sigma(1)} .. M_{sigma(n)})`.  Only
/// odd lengths are admitted; for even `n` the signed trace sum vanishes
/// identically by cyclic symmetry.
pub fn wheel_cocycle(n: usize, n_vars: usize, weight_cap: usize) -> Result<ChevalleyCochain> {
    if n == 0 || n % 2 == 0 {
        return Err(PolyError::EvenWheel(n));
    }
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    ChevalleyCochain::build(n, n_vars, weight_cap, 1, move |tuple| {
        // Each argument must be a single x_i xi_j factor.
        let mut pairs = Vec::with_capacity(n);
        for m in tuple {
            if m.x_degree() != 1 || m.xi_degree() != 1 {
                return Ok(SuperPolynomial::zero(n_vars));
            }
            let i = (0..n_vars).find(|&k| m.x_exp(k) == 1).expect("x factor");
            let j = (0..n_vars).find(|&k| m.has_xi(k)).expect("xi factor");
            pairs.push((i, j));
        }
        let mut total = BigInt::zero();
        for perm in &perms {
            let closes = (0..n).all(|t| {
                let here = pairs[perm[t]];
                let next = pairs[perm[(t + 1) % n]];
                here.1 == next.0
            });
            if !closes {
                continue;
            }
            let mut inversions = 0usize;
            for u in 0..n {
                for v in u + 1..n {
                    if perm[u] > perm[v] {
                        inversions += 1;
                    }
                }
            }
            if inversions % 2 == 0 {
                total += 1;
            } else {
                total -= 1;
            }
        }
        if total.is_zero() {
            return Ok(SuperPolynomial::zero(n_vars));
        }
        Ok(SuperPolynomial::constant(
            n_vars,
            Rational::from_integer(total),
        ))
    })
}

/// The arity-1 cochain `gamma -> [sum_k x_k xi_k, gamma]`: bracketing with
/// the Euler field.  On a field of bidegree `(r1, r2)` it acts as the
/// scalar `r1 - r2`.
pub fn euler_bracket_operator(n_vars: usize, weight_cap: usize) -> Result<ChevalleyCochain> {
    let e = euler_field(n_vars);
    ChevalleyCochain::build(1, n_vars, weight_cap, 0, move |tuple| {
        schouten(&e, &mono_poly(&tuple[0]))
    })
}

/// Outcome of [`coboundary_remark_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RemarkReport {
    /// The candidate 2-cocycle and the coboundary both vanish everywhere
    /// within the cap, so no sign can be read off.
    BothZero,
    /// The candidate equals `epsilon` times the coboundary on every pair
    /// within the cap; `support` counts the pairs where both are nonzero.
    Sign { epsilon: i8, support: usize },
    /// The two sides disagree beyond a global sign at the recorded pair.
    Counterexample {
        gamma: Monomial,
        nu: Monomial,
        candidate: SuperPolynomial,
        coboundary: SuperPolynomial,
    },
}

/// Compares the product-of-brackets 2-cochain built from paired families
/// `p_i, q_i` against the Chevalley–Eilenberg coboundary of its explicit
/// primitive, on every ordered monomial pair within the weight cap.
///
/// * candidate: `A(g, v) = sum_ij (-1)^{(|q_j|+1)|g|} [p_i,g][q_j,v]
///   + sum_ij (-1)^{(|q_j|+1+|g|)|v|} [p_i,v][q_j,g]`
/// * primitive: `B(g) = sum_{i<=j} p_i [q_j, g]
///   - sum_{i>j} (-1)^{|q_j||p_i|+|p_i|+|q_j|} q_j [p_i, g]`
///
/// where `|.|` is the anticommuting parity.  Reports the single global
/// sign `A = epsilon * dB` when one exists, or a counterexample pair.
/// All `p_i`, `q_i` must be homogeneous in anticommuting degree.
pub fn coboundary_remark_check(
    p: &[SuperPolynomial],
    q: &[SuperPolynomial],
    n_vars: usize,
    weight_cap: usize,
) -> Result<RemarkReport> {
    if p.len() != q.len() {
        return Err(PolyError::ArityMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    for f in p.iter().chain(q) {
        if f.n_vars() != n_vars {
            return Err(PolyError::VarMismatch {
                left: n_vars,
                right: f.n_vars(),
            });
        }
        if !f.is_zero() && f.xi_parity().is_none() {
            return Err(PolyError::NotHomogeneous(
                "remark families must have homogeneous anticommuting parity".into(),
            ));
        }
    }
    if p.is_empty() || p.iter().all(SuperPolynomial::is_zero) {
        return Ok(RemarkReport::BothZero);
    }
    let par = |f: &SuperPolynomial| -> u32 { f.xi_parity().unwrap_or(0) as u32 };
    let sign_pow = |exp: u32| -> Rational { rat_int(if exp % 2 == 0 { 1 } else { -1 }) };

    // Parity of the primitive's values relative to its argument: p_i [q_j, g]
    // shifts the anticommuting degree by xi(p) + xi(q) - 1.
    let prim_parity = ((par(&p[0]) + par(&q[0]) + 1) % 2) as u8;
    let primitive = ChevalleyCochain::build(1, n_vars, weight_cap, prim_parity, |tuple| {
        let g = mono_poly(&tuple[0]);
        let mut acc = SuperPolynomial::zero(n_vars);
        for (i, pi) in p.iter().enumerate() {
            for (j, qj) in q.iter().enumerate() {
                if i <= j {
                    acc.add_assign_poly(&pi.mul(&schouten(qj, &g)?)?)?;
                } else {
                    let s = sign_pow(par(qj) * par(pi) + par(pi) + par(qj));
                    acc.add_assign_poly(&qj.mul(&schouten(pi, &g)?)?.scale(&-s))?;
                }
            }
        }
        Ok(acc)
    })?;
    let coboundary = chevalley_diff(&primitive)?;

    let monomials: Vec<Monomial> = (0..=weight_cap)
        .flat_map(|w| monomials_with_weight(n_vars, w))
        .collect();
    let mut epsilon: Option<i8> = None;
    let mut support = 0usize;
    for gamma in &monomials {
        for nu in &monomials {
            if gamma.weight() + nu.weight() > weight_cap {
                continue;
            }
            let g = mono_poly(gamma);
            let v = mono_poly(nu);
            let mut candidate = SuperPolynomial::zero(n_vars);
            for pi in p {
                for qj in q {
                    let s1 = sign_pow((par(qj) + 1) * gamma.parity() as u32);
                    candidate.add_assign_poly(
                        &schouten(pi, &g)?.mul(&schouten(qj, &v)?)?.scale(&s1),
                    )?;
                    let s2 = sign_pow((par(qj) + 1 + gamma.parity() as u32) * nu.parity() as u32);
                    candidate.add_assign_poly(
                        &schouten(pi, &v)?.mul(&schouten(qj, &g)?)?.scale(&s2),
                    )?;
                }
            }
            let cb = coboundary.evaluate_monomials(&[gamma.clone(), nu.clone()])?;
            if candidate.is_zero() && cb.is_zero() {
                continue;
            }
            support += 1;
            let here = if candidate == cb {
                1
            } else if candidate == cb.negated() {
                -1
            } else {
                return Ok(RemarkReport::Counterexample {
                    gamma: gamma.clone(),
                    nu: nu.clone(),
                    candidate,
                    coboundary: cb,
                });
            };
            match epsilon {
                None => epsilon = Some(here),
                Some(e) if e == here => {}
                Some(_) => {
                    return Ok(RemarkReport::Counterexample {
                        gamma: gamma.clone(),
                        nu: nu.clone(),
                        candidate,
                        coboundary: cb,
                    });
                }
            }
        }
    }
    match epsilon {
        None => Ok(RemarkReport::BothZero),
        Some(e) => Ok(RemarkReport::Sign {
            epsilon: e,
            support,
        }),
    }
}

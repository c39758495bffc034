//! Graph sums acting on tuples of polyvector fields.
//!
//! Every vertex of a graph holds one tensor factor; a directed edge `(a, b)`
//! acts as the contraction `sum_k d/dxi_k` at factor `a` with `d/dx_k` at
//! factor `b`, an undirected edge as the sum of both orientations.  The
//! operators for the listed edges are composed so that the *last* edge in
//! the list acts first; under the edge-ordering sign conventions of the
//! graph crates this makes the assignment compatible with graph insertion.
//! After all edges act, the remaining tensor factors are multiplied
//! left-to-right with graded signs.
//!
//! For graphs with external legs (inputs `1..=n` plus an output vertex
//! `0`), a term contributes only when each input's in/out valence matches
//! the bidegree of its argument exactly; external edges then disappear into
//! a combinatorial prefactor, an output-output loop contributes a wedge
//! with the Euler field, and the internal edges act as above.

use std::collections::BTreeMap;

use graph_core::{rat_int, GraphSum, RawGraph, Rational};
use gra_operads::{xgraph_is_odd_edge, XGraphSum};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::{euler_field, Monomial, SuperPolynomial};
use crate::PolyError;

type Result<T> = std::result::Result<T, PolyError>;

/// Multi-linear tuples of monomial tensor factors with rational weights.
type Tensor = BTreeMap<Vec<Monomial>, Rational>;

fn factorial(n: usize) -> Rational {
    let mut b = BigInt::one();
    for i in 2..=n {
        b *= i;
    }
    Rational::from_integer(b)
}

/// Applies the directed-edge contraction from factor `src` to factor `tgt`.
/// The `xi`-derivative at `src` carries the Koszul sign of the factors to
/// its left (at their current degrees) and the in-factor left-derivative
/// sign; the `x`-derivative is even and adds no sign.
fn apply_directed_edge(t: &Tensor, src: usize, tgt: usize) -> Tensor {
    let mut out = Tensor::new();
    for (tuple, c) in t {
        let front: usize = tuple[..src].iter().map(Monomial::xi_degree).sum();
        let front_sign = if front % 2 == 0 { 1 } else { -1 };
        let n_vars = tuple[src].n_vars();
        for k in 0..n_vars {
            let Some((reduced, inner_sign)) = tuple[src].dxi_mono(k) else {
                continue;
            };
            let mut next = tuple.clone();
            next[src] = reduced;
            let Some((lowered, mult)) = next[tgt].dx_mono(k) else {
                continue;
            };
            next[tgt] = lowered;
            let coeff = c * rat_int((front_sign * inner_sign) as i64 * mult as i64);
            *out.entry(next).or_insert_with(Rational::zero) += coeff;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn apply_undirected_edge(t: &Tensor, a: usize, b: usize) -> Tensor {
    let mut out = apply_directed_edge(t, a, b);
    for (tuple, c) in apply_directed_edge(t, b, a) {
        let entry = out.entry(tuple).or_insert_with(Rational::zero);
        *entry += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Multiplies the remaining tensor factors left-to-right with graded signs.
fn multiply_out(t: &Tensor, n_vars: usize) -> SuperPolynomial {
    let mut out = SuperPolynomial::zero(n_vars);
    for (tuple, c) in t {
        let mut acc = Monomial::one(n_vars);
        let mut sign = 1i8;
        let mut dead = false;
        for m in tuple {
            match acc.mul(m) {
                Some((next, s)) => {
                    acc = next;
                    sign *= s;
                }
                None => {
                    dead = true;
                    break;
                }
            }
        }
        if !dead {
            out.add_term(acc, c * rat_int(sign as i64));
        }
    }
    out
}

/// Raw action of an ordinary graph term on one monomial per vertex: edge
/// operators applied last-edge-first, then the factors multiplied out.
pub fn gra_term_action(g: &RawGraph, args: &[Monomial], n_vars: usize) -> Result<SuperPolynomial> {
    if g.n_vertices() != args.len() {
        return Err(PolyError::ArityMismatch {
            expected: g.n_vertices(),
            got: args.len(),
        });
    }
    if args.iter().any(|m| m.n_vars() != n_vars) {
        return Err(PolyError::VarMismatch {
            left: n_vars,
            right: args.iter().map(Monomial::n_vars).find(|&v| v != n_vars).unwrap_or(n_vars),
        });
    }
    let mut t = Tensor::new();
    t.insert(args.to_vec(), Rational::one());
    for &(a, b) in g.edges().iter().rev() {
        if t.is_empty() {
            break;
        }
        t = if g.directed() {
            apply_directed_edge(&t, a as usize, b as usize)
        } else {
            apply_undirected_edge(&t, a as usize, b as usize)
        };
    }
    Ok(multiply_out(&t, n_vars))
}

/// Expands polynomial arguments into weighted monomial tuples.
fn monomial_combos(args: &[SuperPolynomial]) -> Vec<(Vec<Monomial>, Rational)> {
    let mut combos: Vec<(Vec<Monomial>, Rational)> = vec![(Vec::new(), Rational::one())];
    for arg in args {
        let mut next = Vec::with_capacity(combos.len() * arg.len().max(1));
        for (prefix, c) in &combos {
            for (m, a) in arg.iter() {
                let mut tuple = prefix.clone();
                tuple.push(m.clone());
                next.push((tuple, c * a));
            }
        }
        combos = next;
    }
    combos
}

/// Action of a sum of ordinary graphs (one vertex per argument) on
/// polyvector fields.  Linear in the graph sum and in every argument.
pub fn gra_action(g: &GraphSum, args: &[SuperPolynomial]) -> Result<SuperPolynomial> {
    let Some(first) = args.first() else {
        return Err(PolyError::ArityMismatch {
            expected: g.iter().map(|(cg, _)| cg.n_vertices()).next().unwrap_or(0),
            got: 0,
        });
    };
    let n_vars = first.n_vars();
    for a in args {
        if a.n_vars() != n_vars {
            return Err(PolyError::VarMismatch {
                left: n_vars,
                right: a.n_vars(),
            });
        }
    }
    let combos = monomial_combos(args);
    let mut out = SuperPolynomial::zero(n_vars);
    for (cg, coeff) in g.iter() {
        for (tuple, c) in &combos {
            let acted = gra_term_action(cg, tuple, n_vars)?;
            out.add_assign_poly(&acted.scale(&(coeff * c)))?;
        }
    }
    Ok(out)
}

/// Raw action of one graph-with-inputs term (vertex 0 = output, inputs
/// `1..=n`) on one monomial per input.
///
/// Output-output loops are commuted to the front of the edge list (sign =
/// parity of odd edges passed), stripped, and contribute a left wedge with
/// the Euler field each.  A term survives only if every input's total
/// outgoing/incoming edge counts equal the anticommuting/commuting degrees
/// of its argument; external edges are then consumed by the prefactor
/// `prod_j k_j! l_j!` and the internal edges act as in [`gra_term_action`].
pub fn xgra_term_action(g: &RawGraph, args: &[Monomial], n_vars: usize) -> Result<SuperPolynomial> {
    if !g.directed() {
        return Err(PolyError::Internal(
            "graphs with external legs must be directed".into(),
        ));
    }
    let n_inputs = g.n_vertices().saturating_sub(1);
    if n_inputs != args.len() {
        return Err(PolyError::ArityMismatch {
            expected: n_inputs,
            got: args.len(),
        });
    }
    if args.iter().any(|m| m.n_vars() != n_vars) {
        return Err(PolyError::VarMismatch {
            left: n_vars,
            right: n_vars,
        });
    }

    // Strip output-output loops, each picking up the sign of the odd edges
    // it passes on its way to the front of the list.
    let mut edges: Vec<(u8, u8)> = g.edges().to_vec();
    let mut sign = 1i64;
    let mut euler_wedges = 0usize;
    while let Some(pos) = edges.iter().position(|&e| e == (0, 0)) {
        let odd_before = edges[..pos]
            .iter()
            .filter(|&&(a, b)| xgraph_is_odd_edge(a, b))
            .count();
        if odd_before % 2 == 1 {
            sign = -sign;
        }
        edges.remove(pos);
        euler_wedges += 1;
    }

    // Valence matching: every derivative an input offers must be used.
    let mut prefactor = Rational::one();
    for j in 1..=n_inputs {
        let outgoing = edges.iter().filter(|&&(a, _)| a as usize == j).count();
        let incoming = edges.iter().filter(|&&(_, b)| b as usize == j).count();
        let arg = &args[j - 1];
        if outgoing != arg.xi_degree() || incoming != arg.x_degree() {
            return Ok(SuperPolynomial::zero(n_vars));
        }
        prefactor *= factorial(outgoing) * factorial(incoming);
    }

    // Internal edges keep their order; external edges are even, so dropping
    // them costs no sign.  Input vertex j becomes tensor factor j - 1.
    let internal: Vec<(u8, u8)> = edges
        .iter()
        .filter(|&&(a, b)| a > 0 && b > 0)
        .map(|&(a, b)| (a - 1, b - 1))
        .collect();

    let mut t = Tensor::new();
    t.insert(args.to_vec(), Rational::one());
    for &(a, b) in internal.iter().rev() {
        if t.is_empty() {
            break;
        }
        t = apply_directed_edge(&t, a as usize, b as usize);
    }
    let mut result = multiply_out(&t, n_vars);
    for _ in 0..euler_wedges {
        result = euler_field(n_vars).mul(&result)?;
    }
    Ok(result.scale(&(prefactor * rat_int(sign))))
}

/// Action of a sum of graphs-with-inputs on polyvector fields.
///
/// When the sum carries a truncation bound, the bound must exceed the
/// combined weight of the arguments (`bound >= weight + 1`); otherwise
/// terms dropped by the truncation could still have contributed, and the
/// call errors instead of returning an untrustworthy value.
pub fn xgra_action(
    x: &XGraphSum,
    args: &[SuperPolynomial],
    n_vars: usize,
) -> Result<SuperPolynomial> {
    if x.n_inputs() != args.len() {
        return Err(PolyError::ArityMismatch {
            expected: x.n_inputs(),
            got: args.len(),
        });
    }
    for a in args {
        if a.n_vars() != n_vars {
            return Err(PolyError::VarMismatch {
                left: n_vars,
                right: a.n_vars(),
            });
        }
    }
    let mut out = SuperPolynomial::zero(n_vars);
    for (tuple, c) in monomial_combos(args) {
        let weight: usize = tuple.iter().map(Monomial::weight).sum();
        if let Some(bound) = x.bound() {
            if bound < weight + 1 {
                return Err(PolyError::TruncationTooSmall {
                    bound,
                    weight,
                    needed: weight + 1,
                });
            }
        }
        for (cg, coeff) in x.iter() {
            let acted = xgra_term_action(cg, &tuple, n_vars)?;
            out.add_assign_poly(&acted.scale(&(coeff * &c)))?;
        }
    }
    Ok(out)
}

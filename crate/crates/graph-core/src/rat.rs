use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{GraphError, Result};

/// Exact scalar type used throughout the workspace.
pub type Rational = BigRational;

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders `r` as `p` or `p/q` with `q > 0` in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` (arbitrary precision, optional sign on `p`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = |why: &str| GraphError::Parse(format!("bad rational {s:?}: {why}"));
    let mut parts = s.splitn(2, '/');
    let numer: BigInt =
        parts.next().unwrap_or("").trim().parse().map_err(|_| bad("numerator"))?;
    let denom: BigInt = match parts.next() {
        None => BigInt::one(),
        Some(d) => d.trim().parse().map_err(|_| bad("denominator"))?,
    };
    if denom.is_zero() {
        return Err(bad("zero denominator"));
    }
    if denom.is_negative() {
        return Err(bad("denominator must be positive"));
    }
    Ok(BigRational::new(numer, denom))
}

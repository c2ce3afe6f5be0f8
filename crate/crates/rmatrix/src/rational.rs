//! Exact rational scalars used throughout the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The coefficient field for all exact computations.
pub type Q = BigRational;

pub fn qz() -> Q {
    Q::zero()
}

pub fn q1() -> Q {
    Q::one()
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a rational as `p` or `p/q`.
pub fn q_to_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `-p`, or `p/q`.
pub fn q_from_str(s: &str) -> Result<Q, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|e| format!("bad numerator {n:?}: {e}"))?;
        let d: BigInt = d.trim().parse().map_err(|e| format!("bad denominator {d:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|e| format!("bad rational {s:?}: {e}"))?;
        Ok(Q::from_integer(n))
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    let n = x.numer();
    let d = x.denom();
    // Good enough for the sampling / cross-check paths; exact path never uses this.
    let nf = n.to_string().parse::<f64>().unwrap_or(if n.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    });
    let df = d.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    nf / df
}

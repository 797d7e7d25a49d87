//! Exact rational scalars.

use alloc::string::{String, ToString};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// `(-1)^n`.
pub fn sign(n: i64) -> Scalar {
    if n.rem_euclid(2) == 0 {
        one()
    } else {
        -one()
    }
}

/// Parses `"p"` or `"p/q"`.
pub fn parse(s: &str) -> Option<Scalar> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().ok()?;
    let q: BigInt = q.parse().ok()?;
    if q.is_zero() {
        return None;
    }
    Some(BigRational::new(p, q))
}

/// `"p/q"`, or just `"p"` for integers.
pub fn format(x: &Scalar) -> String {
    x.to_string()
}

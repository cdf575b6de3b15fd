//! Exact scalar fields the algebra is generic over.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Zero};

/// An exact field of characteristic zero.
///
/// Every computation in this crate is exact; there is deliberately no
/// implementation for `f32`/`f64`.
pub trait Scalar: Num + Clone + Debug + Display + Neg<Output = Self> + PartialOrd {
    fn from_int(v: i64) -> Self;

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn is_negative_value(&self) -> bool {
        *self < Self::zero()
    }
}

impl Scalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl Scalar for Ratio<i64> {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v)
    }
}

impl Scalar for Ratio<i128> {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn rational_to_string(q: &BigRational) -> String {
    q.to_string()
}

/// Converts an exact rational to an integer when it is one.
pub fn as_integer(q: &BigRational) -> Option<i64> {
    use num_traits::ToPrimitive;
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

/// `|q|`, used by pivot heuristics only.
pub fn abs<T: Scalar>(q: &T) -> T {
    if q.is_negative_value() {
        -q.clone()
    } else {
        q.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(rational_to_string(&q), "-3/2");
        assert_eq!(rational_to_string(&parse_rational("8/4").unwrap()), "2");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn small_fields_agree() {
        let a = Ratio::<i64>::from_frac(3, 4) * Ratio::<i64>::from_int(2);
        assert_eq!(a, Ratio::new(3, 2));
        let b = BigRational::from_frac(3, 4) * BigRational::from_int(2);
        assert_eq!(b.to_string(), a.to_string());
    }
}

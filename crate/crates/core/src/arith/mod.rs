//! Exact integer, rational and q-polynomial arithmetic.

mod qpoly;
mod qrat;

pub use qpoly::QPoly;
pub use qrat::{normalize, QRat};

pub(crate) use qpoly::rat_pow;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Parse `"3/2"` or `"5"` into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::ParameterOutOfRange(format!("not a rational number: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

/// `(q)_m = (1-q)(1-q^2)...(1-q^m)`.
pub fn q_factorial(m: i64) -> Result<QPoly> {
    if m < 0 {
        return Err(Error::ParameterOutOfRange(format!(
            "q-factorial of negative index {m}"
        )));
    }
    Ok((1..=m).fold(QPoly::one(), |acc, i| acc * QPoly::one_minus_q_pow(i)))
}

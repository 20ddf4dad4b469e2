use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Laurent polynomial in `q` with arbitrary-precision integer coefficients.
///
/// Stored densely from the lowest exponent `lo`. The first and last stored
/// coefficients are always nonzero; the zero polynomial stores nothing.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    lo: i64,
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly::default()
    }

    pub fn one() -> Self {
        QPoly::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        QPoly::monomial(c, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        QPoly::from_dense(exp, vec![c.into()])
    }

    /// `q^exp`
    pub fn q_pow(exp: i64) -> Self {
        QPoly::monomial(1, exp)
    }

    /// `1 - q^exp`; zero when `exp == 0`.
    pub fn one_minus_q_pow(exp: i64) -> Self {
        QPoly::one() - QPoly::q_pow(exp)
    }

    /// Build from a dense coefficient run starting at exponent `lo`.
    pub fn from_dense(lo: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = QPoly { lo, coeffs };
        p.trim();
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut acc = QPoly::zero();
        for (e, c) in terms {
            acc.add_scaled(&QPoly::constant(c), e, false);
        }
        acc
    }

    fn trim(&mut self) {
        let Some(first) = self.coeffs.iter().position(|c| !c.is_zero()) else {
            self.coeffs.clear();
            self.lo = 0;
            return;
        };
        let last = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
        self.coeffs.truncate(last + 1);
        if first > 0 {
            self.coeffs.drain(..first);
            self.lo += first as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.lo == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.lo)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn high_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.lo + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        let idx = exp - self.lo;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            BigInt::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Nonzero terms `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.lo + i as i64, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms().count()
    }

    pub(crate) fn dense(&self) -> (i64, &[BigInt]) {
        (self.lo, &self.coeffs)
    }

    /// Multiply by `q^s`.
    pub fn shift(&self, s: i64) -> Self {
        if self.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            lo: self.lo + s,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// `self += (-1)^negate * q^shift * other`
    pub fn add_scaled(&mut self, other: &QPoly, shift: i64, negate: bool) {
        if other.is_zero() {
            return;
        }
        let olo = other.lo + shift;
        if self.is_zero() {
            self.lo = olo;
            self.coeffs = if negate {
                other.coeffs.iter().map(|c| -c).collect()
            } else {
                other.coeffs.clone()
            };
            return;
        }
        let new_lo = self.lo.min(olo);
        let new_hi = (self.lo + self.coeffs.len() as i64).max(olo + other.coeffs.len() as i64);
        if new_lo < self.lo {
            let pad = (self.lo - new_lo) as usize;
            self.coeffs
                .splice(0..0, std::iter::repeat_n(BigInt::zero(), pad));
            self.lo = new_lo;
        }
        let want = (new_hi - self.lo) as usize;
        if self.coeffs.len() < want {
            self.coeffs.resize(want, BigInt::zero());
        }
        let off = (olo - self.lo) as usize;
        for (i, c) in other.coeffs.iter().enumerate() {
            if negate {
                self.coeffs[off + i] -= c;
            } else {
                self.coeffs[off + i] += c;
            }
        }
        self.trim();
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at a rational point.
    pub fn eval(&self, q0: &BigRational) -> Result<BigRational> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        if q0.is_zero() {
            if self.lo < 0 {
                return Err(Error::EvalAtZero(self.lo));
            }
            return Ok(BigRational::from_integer(self.coeff(0)));
        }
        // Horner on the polynomial part, then the monomial factor.
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q0 + BigRational::from_integer(c.clone());
        }
        Ok(acc * rat_pow(q0, self.lo))
    }

    /// Gcd of the coefficients, positive; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }
}

pub(crate) fn rat_pow(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow::pow(base, e.unsigned_abs() as usize)
}

// ----- dense polynomial helpers on coefficient slices (index = degree) -----

pub(crate) fn dense_divides_exact(num: &[BigInt], den: &[BigInt]) -> Option<Vec<BigInt>> {
    if den.is_empty() {
        return None;
    }
    if num.is_empty() {
        return Some(Vec::new());
    }
    if num.len() < den.len() {
        return None;
    }
    let mut rem: Vec<BigInt> = num.to_vec();
    let dlen = den.len();
    let lead = &den[dlen - 1];
    let mut quot = vec![BigInt::zero(); num.len() - dlen + 1];
    for i in (0..quot.len()).rev() {
        let top = &rem[i + dlen - 1];
        if top.is_zero() {
            continue;
        }
        let (qc, r) = top.div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &qc * d;
        }
        quot[i] = qc;
    }
    rem.iter().all(Zero::is_zero).then_some(quot)
}

fn dense_trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn dense_primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|c| c / &g).collect()
}

/// Pseudo-remainder of `a` by `b`.
fn dense_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let blen = b.len();
    let lead = &b[blen - 1];
    while r.len() >= blen {
        let top = r[r.len() - 1].clone();
        let shift = r.len() - blen;
        for c in r.iter_mut() {
            *c *= lead;
        }
        for (j, d) in b.iter().enumerate() {
            r[shift + j] -= &top * d;
        }
        dense_trim(&mut r);
    }
    r
}

/// Primitive gcd of two nonzero polynomials, positive leading coefficient.
pub(crate) fn dense_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut x = dense_primitive(a);
    let mut y = dense_primitive(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            return vec![BigInt::one()];
        }
        let r = dense_prem(&x, &y);
        x = y;
        y = dense_primitive(&r);
    }
    if x.last().is_some_and(|c| c.is_negative()) {
        for c in x.iter_mut() {
            *c = -&*c;
        }
    }
    x
}

// ----- operators -----

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, 0, false);
        out
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, 0, true);
        out
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_dense(self.lo + rhs.lo, out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QPoly {
            type Output = QPoly;
            fn $m(self, rhs: QPoly) -> QPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QPoly> for QPoly {
            type Output = QPoly;
            fn $m(self, rhs: &QPoly) -> QPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

impl From<i64> for QPoly {
    fn from(c: i64) -> Self {
        QPoly::constant(c)
    }
}

impl PartialOrd for QPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural total order, only used to sort for canonical output.
impl Ord for QPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lo
            .cmp(&other.lo)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let qpart = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{e}"),
            };
            if qpart.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&qpart)?;
            } else {
                write!(f, "{mag}*{qpart}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

impl serde::Serialize for QPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::qpoly::{dense_divides_exact, dense_gcd, QPoly};
use crate::error::{Error, Result};

/// Reduced ratio of two [`QPoly`] values.
///
/// Canonical form: numerator and denominator share no polynomial factor of
/// positive degree, no power of `q` and no integer content; the denominator
/// has lowest exponent 0 and a positive trailing coefficient. Two values
/// are equal iff their canonical forms are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QRat {
    num: QPoly,
    den: QPoly,
}

impl QRat {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        normalize(num, den)
    }

    pub fn zero() -> Self {
        QRat {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        QRat::from(QPoly::one())
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value as a Laurent polynomial, when the denominator is 1.
    pub fn as_poly(&self) -> Option<&QPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn recip(&self) -> Result<Self> {
        QRat::new(self.den.clone(), self.num.clone())
    }

    pub fn shift(&self, s: i64) -> Self {
        QRat {
            num: self.num.shift(s),
            den: self.den.clone(),
        }
    }

    pub fn eval(&self, q0: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(q0)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(q0)? / d)
    }

    pub fn checked_div(&self, rhs: &QRat) -> Result<QRat> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        QRat::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn product<'a>(items: impl IntoIterator<Item = &'a QRat>) -> QRat {
        items.into_iter().fold(QRat::one(), |acc, x| &acc * x)
    }
}

impl From<QPoly> for QRat {
    fn from(p: QPoly) -> Self {
        QRat {
            num: p,
            den: QPoly::one(),
        }
    }
}

impl From<i64> for QRat {
    fn from(c: i64) -> Self {
        QRat::from(QPoly::constant(c))
    }
}

/// Canonical reduction of `num / den`.
pub fn normalize(num: QPoly, den: QPoly) -> Result<QRat> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if num.is_zero() {
        return Ok(QRat::zero());
    }
    let (nlo, ncoef) = num.dense();
    let (dlo, dcoef) = den.dense();
    let shift = nlo - dlo;

    let ncont = num.content();
    let dcont = den.content();
    let g = ncont.gcd(&dcont);
    let mut nscale = &ncont / &g;
    let dscale = &dcont / &g;
    let mut np: Vec<BigInt> = ncoef.iter().map(|c| c / &ncont).collect();
    let mut dp: Vec<BigInt> = dcoef.iter().map(|c| c / &dcont).collect();

    if dp.len() > 1 {
        if let Some(quot) = dense_divides_exact(&np, &dp) {
            np = quot;
            dp = vec![BigInt::one()];
        } else {
            let gd = dense_gcd(&np, &dp);
            if gd.len() > 1 {
                np = dense_divides_exact(&np, &gd).expect("gcd divides numerator");
                dp = dense_divides_exact(&dp, &gd).expect("gcd divides denominator");
            }
        }
    }
    if dp[0].is_negative() {
        nscale = -nscale;
        for c in dp.iter_mut() {
            *c = -&*c;
        }
    }
    let num = QPoly::from_dense(shift, np.iter().map(|c| c * &nscale).collect());
    let den = QPoly::from_dense(0, dp.iter().map(|c| c * &dscale).collect());
    Ok(QRat { num, den })
}

impl Add for &QRat {
    type Output = QRat;
    fn add(self, rhs: &QRat) -> QRat {
        if self.den == rhs.den {
            return normalize(&self.num + &rhs.num, self.den.clone()).expect("nonzero den");
        }
        normalize(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero den")
    }
}

impl Sub for &QRat {
    type Output = QRat;
    fn sub(self, rhs: &QRat) -> QRat {
        self + &(-rhs)
    }
}

impl Mul for &QRat {
    type Output = QRat;
    fn mul(self, rhs: &QRat) -> QRat {
        if self.is_zero() || rhs.is_zero() {
            return QRat::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return QRat::from(&self.num * &rhs.num);
        }
        normalize(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero den")
    }
}

impl Div for &QRat {
    type Output = QRat;
    /// Panics on division by zero; see [`QRat::checked_div`].
    fn div(self, rhs: &QRat) -> QRat {
        self.checked_div(rhs).expect("division by zero QRat")
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QRat {
            type Output = QRat;
            fn $m(self, rhs: QRat) -> QRat {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        -&self
    }
}

impl Zero for QRat {
    fn zero() -> Self {
        QRat::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for QRat {
    fn one() -> Self {
        QRat::one()
    }
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRat({self})")
    }
}

impl serde::Serialize for QRat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

//! Closed-form right-hand sides: q-factorials, Gaussian binomials, the
//! Dyson, q-Dyson and Habsieger-Kadell products, the root sets of the
//! vanishing lemma and both sides of the finite summation used at the
//! extra point.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

pub use crate::arith::q_factorial;
use crate::arith::{QPoly, QRat};
use crate::error::{Error, Result};

/// The parameter tuple `(n, a, b, m, l, k)` and an optional specialisation
/// `q = q0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamSet {
    pub n: usize,
    pub a: i64,
    pub b: i64,
    pub m: usize,
    pub l: usize,
    pub k: i64,
    pub q0: Option<BigRational>,
}

impl ParamSet {
    pub fn new(n: usize, a: i64, b: i64, m: usize, l: usize, k: i64) -> Result<Self> {
        let p = ParamSet {
            n,
            a,
            b,
            m,
            l,
            k,
            q0: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_a(&self, a: i64) -> Self {
        ParamSet { a, ..self.clone() }
    }

    pub fn with_q0(&self, q0: BigRational) -> Self {
        ParamSet {
            q0: Some(q0),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::ParameterOutOfRange("n must be at least 1".into()));
        }
        if self.m > self.n || self.l > self.n {
            return Err(Error::ParameterOutOfRange(format!(
                "need 0 <= m, l <= n (n={}, m={}, l={})",
                self.n, self.m, self.l
            )));
        }
        if self.b < 0 || self.k < 0 {
            return Err(Error::ParameterOutOfRange(format!(
                "b, k must be nonnegative (b={}, k={})",
                self.b, self.k
            )));
        }
        Ok(())
    }

    /// Both `m` and `l` strictly below `n`.
    pub fn require_reduced(&self) -> Result<()> {
        self.validate()?;
        if self.m >= self.n || self.l >= self.n {
            return Err(Error::ParameterOutOfRange(format!(
                "need 0 <= m, l < n (n={}, m={}, l={})",
                self.n, self.m, self.l
            )));
        }
        Ok(())
    }

    /// `d = nb + m + l`, the degree bound in `q^a`.
    pub fn degree_bound(&self) -> usize {
        self.n * self.b as usize + self.m + self.l
    }

    /// `h = (n-l-1)k + b + 1`
    pub fn extra_point(&self) -> i64 {
        (self.n - self.l - 1) as i64 * self.k + self.b + 1
    }

    /// `b + chi(i >= n-l+1)` for `1 <= i <= n`.
    pub fn b_star(&self, i: usize) -> i64 {
        self.b + chi(i + self.l > self.n)
    }

    pub fn q_params(&self) -> crate::kernels::QParams {
        crate::kernels::QParams {
            n: self.n,
            b: self.b,
            m: self.m,
            l: self.l,
            k: self.k,
        }
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} a={} b={} m={} l={} k={}",
            self.n, self.a, self.b, self.m, self.l, self.k
        )?;
        if let Some(q0) = &self.q0 {
            write!(f, " q0={q0}")?;
        }
        Ok(())
    }
}

impl Serialize for ParamSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("a", &self.a)?;
        map.serialize_entry("b", &self.b)?;
        map.serialize_entry("m", &self.m)?;
        map.serialize_entry("l", &self.l)?;
        map.serialize_entry("k", &self.k)?;
        if let Some(q0) = &self.q0 {
            map.serialize_entry("q0", &q0.to_string())?;
        }
        map.end()
    }
}

fn chi(b: bool) -> i64 {
    b as i64
}

/// `chi(i >= n-m-l) + chi(i >= 2n-m-l)`. The second term is zero when
/// `m + l <= n`; otherwise the top `m + l - n` rows carry `(q)_{b+ik+2}`,
/// one for each variable with both `i <= m` and `i >= n-l+1` in the kernel.
pub(crate) fn den_shift(p: &ParamSet, i: i64) -> i64 {
    let (n, ml) = (p.n as i64, (p.m + p.l) as i64);
    chi(i >= n - ml) + chi(i >= 2 * n - ml)
}

fn qfac(m: i64) -> Result<QRat> {
    q_factorial(m).map(QRat::from)
}

/// `prod_{i=1}^{kk} (1 - q^(N-i+1)) / (1 - q^i)`, defined for every integer
/// `N`.
pub fn gauss_binom(big_n: i64, kk: i64) -> Result<QRat> {
    if kk < 0 {
        return Err(Error::ParameterOutOfRange(format!(
            "Gaussian binomial with negative lower index {kk}"
        )));
    }
    let num = (1..=kk).fold(QPoly::one(), |acc, i| {
        acc * QPoly::one_minus_q_pow(big_n - i + 1)
    });
    QRat::new(num, q_factorial(kk)?)
}

/// Checks `(u)_N = sum_j q^(j(j-1)/2) [N, j] (-u)^j` coefficientwise in `u`.
pub fn qbinomial_theorem_finite(big_n: i64) -> bool {
    if big_n < 0 {
        return false;
    }
    // coefficients of u^0..u^N in (u)_N
    let mut lhs = vec![QPoly::one()];
    for i in 0..big_n {
        let mut next = vec![QPoly::zero(); lhs.len() + 1];
        for (j, c) in lhs.iter().enumerate() {
            next[j] = &next[j] + c;
            next[j + 1] = &next[j + 1] - &c.shift(i);
        }
        lhs = next;
    }
    lhs.iter().enumerate().all(|(j, c)| {
        let j = j as i64;
        let sign = if j % 2 == 0 {
            QRat::one()
        } else {
            -QRat::one()
        };
        match gauss_binom(big_n, j) {
            Ok(g) => QRat::from(c.clone()) == &sign * &g.shift(j * (j - 1) / 2),
            Err(_) => false,
        }
    })
}

/// `(a_0 + ... + a_n)! / (a_0! ... a_n!)`
pub fn dyson_rhs(a: &[i64]) -> Result<BigInt> {
    if let Some(x) = a.iter().find(|&&x| x < 0) {
        return Err(Error::ParameterOutOfRange(format!("negative exponent {x}")));
    }
    let mut total = 0i64;
    let mut acc = BigInt::one();
    for &x in a {
        for j in 1..=x {
            acc = acc * BigInt::from(total + j) / BigInt::from(j);
        }
        total += x;
    }
    Ok(acc)
}

/// `(q)_{a_0+...+a_n} / ((q)_{a_0} ... (q)_{a_n})`
pub fn qdyson_rhs(a: &[i64]) -> Result<QRat> {
    if let Some(x) = a.iter().find(|&&x| x < 0) {
        return Err(Error::ParameterOutOfRange(format!("negative exponent {x}")));
    }
    let num = q_factorial(a.iter().sum())?;
    let den = a.iter().try_fold(QPoly::one(), |acc, &x| {
        Ok::<_, Error>(acc * q_factorial(x)?)
    })?;
    QRat::new(num, den)
}

/// `M_n(a,b,k,m,l;q)`, defined for every integer `a` through the product
/// of linear factors in `q^a`.
///
/// The `a`-free denominator is `(q)_{b+ik+den_shift(i)}`.
pub fn morris_rhs(p: &ParamSet) -> Result<QRat> {
    p.validate()?;
    let (n, a, b, k) = (p.n as i64, p.a, p.b, p.k);
    let mut num = q_factorial(n * k)?;
    let mut den = q_factorial(k)?.pow(p.n as u32);
    for i in 0..n {
        if i < p.m as i64 {
            num = num * QPoly::one_minus_q_pow(a + i * k);
        }
        if i >= n - p.l as i64 {
            num = num * QPoly::one_minus_q_pow(a + i * k + b + 1);
        }
        for j in 1..=b {
            num = num * QPoly::one_minus_q_pow(a + i * k + j);
        }
        num = num * q_factorial(i * k)?;
        den = den * q_factorial(b + i * k + den_shift(p, i))?;
    }
    QRat::new(num, den)
}

/// `M_n` as a product of q-factorials; needs `a >= 1` when `m >= 1` and
/// `a >= 0` otherwise.
pub fn morris_rhs_factorial(p: &ParamSet) -> Result<QRat> {
    p.validate()?;
    if p.a < chi(p.m > 0) {
        return Err(Error::ParameterOutOfRange(format!(
            "factorial form needs a >= {} (a={})",
            chi(p.m > 0),
            p.a
        )));
    }
    let (n, a, b, k) = (p.n as i64, p.a, p.b, p.k);
    let mut acc = QRat::one();
    for i in 0..n {
        let num = &qfac(a + b + i * k + chi(i >= n - p.l as i64))? * &qfac((i + 1) * k)?;
        let den = &(&qfac(a + i * k - chi(i < p.m as i64))? * &qfac(b + i * k + den_shift(p, i))?)
            * &qfac(k)?;
        acc = &acc * &num.checked_div(&den)?;
    }
    Ok(acc)
}

/// The root sets `D_1`, `D_2`, `D_3` of the vanishing lemma.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingSets {
    pub d1: Vec<i64>,
    pub d2: Vec<i64>,
    pub d3: Vec<i64>,
}

impl VanishingSets {
    /// All roots in increasing order, with multiplicity.
    pub fn all(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self
            .d1
            .iter()
            .chain(&self.d2)
            .chain(&self.d3)
            .copied()
            .collect();
        v.sort_unstable();
        v
    }

    pub fn len(&self) -> usize {
        self.d1.len() + self.d2.len() + self.d3.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn distinct(&self) -> bool {
        self.all().iter().collect::<BTreeSet<_>>().len() == self.len()
    }
}

pub fn vanishing_sets(p: &ParamSet) -> Result<VanishingSets> {
    p.require_reduced()?;
    let (n, b, k) = (p.n as i64, p.b, p.k);
    let d1 = (0..p.m as i64).map(|i| i * k).collect();
    let d2 = (n - p.l as i64..n).map(|i| i * k + b + 1).collect();
    let mut d3: Vec<i64> = (0..n)
        .flat_map(|i| (1..=b).map(move |j| i * k + j))
        .collect();
    d3.sort_unstable();
    Ok(VanishingSets { d1, d2, d3 })
}

fn check_prop52(b: i64, k: i64) -> Result<()> {
    if b < 0 || k <= b {
        return Err(Error::ParameterOutOfRange(format!(
            "need 0 <= b < k (b={b}, k={k})"
        )));
    }
    Ok(())
}

/// `sum_{t=0}^{k-b-1} (-1)^t q^((n-1)kt + (b+1)t + t(t+1)/2) / ((q)_{k-t-b-1} (q)_t)`
pub fn prop52_lhs(n: i64, b: i64, k: i64) -> Result<QRat> {
    check_prop52(b, k)?;
    let mut acc = QRat::zero();
    for t in 0..=k - b - 1 {
        let e = (n - 1) * k * t + (b + 1) * t + t * (t + 1) / 2;
        let mono = QPoly::monomial(if t % 2 == 0 { 1 } else { -1 }, e);
        let term = QRat::new(mono, q_factorial(k - t - b - 1)? * q_factorial(t)?)?;
        acc = &acc + &term;
    }
    Ok(acc)
}

/// `[nk, k-b-1]`
pub fn prop52_rhs(n: i64, b: i64, k: i64) -> Result<QRat> {
    check_prop52(b, k)?;
    gauss_binom(n * k, k - b - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(i64, i64)]) -> QRat {
        QRat::from(QPoly::from_terms(terms.iter().copied()))
    }

    fn ps(n: usize, a: i64, b: i64, m: usize, l: usize, k: i64) -> ParamSet {
        ParamSet::new(n, a, b, m, l, k).unwrap()
    }

    #[test]
    fn factorial_examples() {
        assert!(q_factorial(0).unwrap().is_one());
        assert_eq!(
            q_factorial(2).unwrap(),
            QPoly::one_minus_q_pow(1) * QPoly::one_minus_q_pow(2)
        );
        assert!(q_factorial(-1).is_err());
    }

    #[test]
    fn gauss_binom_examples() {
        assert_eq!(gauss_binom(2, 1).unwrap(), poly(&[(0, 1), (1, 1)]));
        assert_eq!(gauss_binom(7, 0).unwrap(), QRat::one());
        assert_eq!(gauss_binom(-3, 0).unwrap(), QRat::one());
        assert_eq!(gauss_binom(-1, 1).unwrap(), poly(&[(-1, -1)]));
        assert_eq!(
            gauss_binom(4, 2).unwrap(),
            poly(&[(0, 1), (1, 1), (2, 2), (3, 1), (4, 1)])
        );
        assert!(gauss_binom(3, 5).unwrap().is_zero());
    }

    #[test]
    fn finite_qbinomial_theorem() {
        for big_n in 0..=8 {
            assert!(qbinomial_theorem_finite(big_n), "N = {big_n}");
        }
    }

    #[test]
    fn dyson_examples() {
        assert_eq!(dyson_rhs(&[1, 1]).unwrap(), BigInt::from(2));
        assert_eq!(dyson_rhs(&[0, 0, 0]).unwrap(), BigInt::from(1));
        assert_eq!(dyson_rhs(&[1, 1, 1]).unwrap(), BigInt::from(6));
        assert_eq!(dyson_rhs(&[2, 3, 1]).unwrap(), BigInt::from(60));
    }

    #[test]
    fn qdyson_examples() {
        assert_eq!(qdyson_rhs(&[1, 1]).unwrap(), poly(&[(0, 1), (1, 1)]));
        assert_eq!(qdyson_rhs(&[0, 0]).unwrap(), QRat::one());
        assert_eq!(
            qdyson_rhs(&[2, 1]).unwrap(),
            poly(&[(0, 1), (1, 1), (2, 1)])
        );
    }

    #[test]
    fn morris_examples() {
        for a in 0..4 {
            for b in 0..3 {
                let m1 = morris_rhs(&ps(1, a, b, 0, 0, 3)).unwrap();
                assert_eq!(m1, qdyson_rhs(&[a, b]).unwrap());
                let m2 = morris_rhs(&ps(2, a, b, 0, 0, 0)).unwrap();
                assert_eq!(m2, &m1 * &m1);
            }
        }
        assert_eq!(
            morris_rhs(&ps(1, 1, 1, 0, 0, 2)).unwrap(),
            poly(&[(0, 1), (1, 1)])
        );
    }

    #[test]
    fn overlapping_m_and_l() {
        // k = 0 factorizes: variable i contributes (q)_{a+b+c}/((q)_{a-1}(q)_{b+1+c})
        // when i <= m and (q)_{a+b+c}/((q)_a (q)_{b+c}) otherwise, c = chi(i >= n-l+1)
        let qf = |x: i64| QRat::from(q_factorial(x).unwrap());
        for (n, m, l) in [(3, 2, 2), (2, 1, 1), (3, 3, 3), (4, 3, 2)] {
            for (a, b) in [(1, 0), (2, 1), (3, 2)] {
                let mut want = QRat::one();
                for i in 1..=n as i64 {
                    let c = chi(i > n as i64 - l as i64);
                    let small = chi(i <= m as i64);
                    let den = &qf(a - small) * &qf(b + small + c);
                    want = &want * &qf(a + b + c).checked_div(&den).unwrap();
                }
                let p = ps(n, a, b, m, l, 0);
                assert_eq!(morris_rhs(&p).unwrap(), want, "{p}");
                assert_eq!(morris_rhs_factorial(&p).unwrap(), want, "{p}");
            }
        }
        // n=3, a=1, b=0, m=l=2: only x_3 contributes, (q)_2/((q)_1 (q)_1) = 1 + q
        assert_eq!(
            morris_rhs(&ps(3, 1, 0, 2, 2, 0)).unwrap(),
            poly(&[(0, 1), (1, 1)])
        );
    }

    #[test]
    fn morris_forms_agree() {
        for n in 1..=3 {
            for m in 0..n {
                for l in 0..n {
                    for a in 1..=3 {
                        for b in 0..=2 {
                            for k in 0..=3 {
                                let p = ps(n, a, b, m, l, k);
                                assert_eq!(
                                    morris_rhs(&p).unwrap(),
                                    morris_rhs_factorial(&p).unwrap(),
                                    "{p}"
                                );
                            }
                        }
                    }
                }
            }
        }
        assert!(morris_rhs_factorial(&ps(2, 0, 0, 1, 0, 1)).is_err());
    }

    #[test]
    fn morris_vanishes_on_root_sets() {
        for n in 2..=3 {
            for b in 0..=1 {
                let k = b + 2;
                for m in 0..n {
                    for l in 0..n {
                        let p = ps(n, 0, b, m, l, k);
                        let d = vanishing_sets(&p).unwrap();
                        assert!(d.distinct());
                        assert_eq!(d.len(), p.degree_bound());
                        for h in d.all() {
                            assert!(morris_rhs(&p.with_a(-h)).unwrap().is_zero(), "{p} h={h}");
                        }
                        assert!(!morris_rhs(&p.with_a(-p.extra_point())).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn vanishing_set_examples() {
        let d = vanishing_sets(&ps(3, 0, 1, 2, 1, 4)).unwrap();
        assert_eq!(
            (d.d1.clone(), d.d2.clone(), d.d3.clone()),
            (vec![0, 4], vec![10], vec![1, 5, 9])
        );
        assert!(vanishing_sets(&ps(3, 0, 1, 0, 1, 4)).unwrap().d1.is_empty());
        // k = b + 1: 4 lies in both D_1 = {0,2,4} and D_2 = {4,6,8}
        assert!(!vanishing_sets(&ps(4, 0, 1, 3, 3, 2)).unwrap().distinct());
        // k = 0: D_3 repeats
        assert!(!vanishing_sets(&ps(2, 0, 1, 0, 0, 0)).unwrap().distinct());
        assert!(vanishing_sets(&ps(2, 0, 1, 2, 0, 2)).is_err());
    }

    #[test]
    fn summation_identity_examples() {
        for b in 0..4 {
            assert_eq!(prop52_lhs(3, b, b + 1).unwrap(), QRat::one());
            assert_eq!(prop52_rhs(3, b, b + 1).unwrap(), QRat::one());
        }
        let one_plus_q = poly(&[(0, 1), (1, 1)]);
        assert_eq!(prop52_lhs(1, 0, 2).unwrap(), one_plus_q);
        assert_eq!(prop52_rhs(1, 0, 2).unwrap(), one_plus_q);
        let four = poly(&[(0, 1), (1, 1), (2, 1), (3, 1)]);
        assert_eq!(prop52_lhs(2, 0, 2).unwrap(), four);
        assert!(prop52_lhs(2, 2, 2).is_err());
    }

    #[test]
    fn summation_identity_grid() {
        for n in 1..=4 {
            for k in 1..=6 {
                for b in 0..k {
                    assert_eq!(prop52_lhs(n, b, k).unwrap(), prop52_rhs(n, b, k).unwrap());
                }
            }
        }
    }
}

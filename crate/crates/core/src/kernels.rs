//! Unexpanded products of binomial factors `1 - q^s x^e`.
//!
//! The constant-term kernels, the rational functions `Q(h)` and their
//! chain images are all kept as factor lists so that substitution, zero
//! detection and cancellation can be done factor by factor. Expansion into a
//! [`MultiLaurent`] happens only on request.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::arith::{rat_pow, QPoly, QRat};
use crate::error::{Error, Result};
use crate::laurent::{expand_binomials, Coeff, ExponentVector, MultiLaurent, WidePoly, MAX_VARS};

/// The factor `1 - q^qexp * x^mono`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AtomicFactor {
    pub qexp: i64,
    pub mono: ExponentVector,
}

impl AtomicFactor {
    pub fn new(qexp: i64, mono: ExponentVector) -> Self {
        AtomicFactor { qexp, mono }
    }

    /// `1 - 1`
    pub fn is_zero_factor(&self) -> bool {
        self.qexp == 0 && self.mono.is_zero()
    }

    /// Free of every variable.
    pub fn is_scalar(&self) -> bool {
        self.mono.is_zero()
    }

    pub fn as_qpoly(&self) -> Option<QPoly> {
        self.is_scalar().then(|| QPoly::one_minus_q_pow(self.qexp))
    }
}

impl Serialize for AtomicFactor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for AtomicFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("1 - ")?;
        fmt_monomial(f, self.qexp, &self.mono)
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, qexp: i64, mono: &ExponentVector) -> fmt::Result {
    let q = match qexp {
        0 => None,
        1 => Some("q".to_string()),
        s => Some(format!("q^{s}")),
    };
    match (q, mono.is_zero()) {
        (None, true) => f.write_str("1"),
        (Some(q), true) => f.write_str(&q),
        (None, false) => write!(f, "{mono}"),
        (Some(q), false) => write!(f, "{q}*{mono}"),
    }
}

/// `prefactor * q^qshift * x^premono * prod(num) / prod(den)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactorProduct {
    nvars: usize,
    pub prefactor: QRat,
    pub qshift: i64,
    pub premono: ExponentVector,
    pub num: Vec<AtomicFactor>,
    pub den: Vec<AtomicFactor>,
}

impl FactorProduct {
    pub fn one(nvars: usize) -> Self {
        FactorProduct {
            nvars,
            prefactor: QRat::one(),
            qshift: 0,
            premono: ExponentVector::zeros(nvars),
            num: Vec::new(),
            den: Vec::new(),
        }
    }

    pub fn from_factors(
        nvars: usize,
        num: Vec<AtomicFactor>,
        den: Vec<AtomicFactor>,
    ) -> Result<Self> {
        let fp = FactorProduct {
            num,
            den,
            ..FactorProduct::one(nvars)
        };
        fp.check()?;
        Ok(fp)
    }

    fn check(&self) -> Result<()> {
        for f in self.num.iter().chain(&self.den) {
            if f.mono.len() != self.nvars {
                return Err(Error::NvarsMismatch {
                    left: self.nvars,
                    right: f.mono.len(),
                });
            }
        }
        if let Some(z) = self.den.iter().find(|f| f.is_zero_factor()) {
            return Err(Error::DuplicateFactor(format!(
                "zero factor {z} in denominator"
            )));
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn mul(&self, other: &FactorProduct) -> Result<FactorProduct> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        let mut num = self.num.clone();
        num.extend_from_slice(&other.num);
        let mut den = self.den.clone();
        den.extend_from_slice(&other.den);
        Ok(FactorProduct {
            nvars: self.nvars,
            prefactor: &self.prefactor * &other.prefactor,
            qshift: self.qshift + other.qshift,
            premono: self.premono.checked_add(&other.premono)?,
            num,
            den,
        })
    }

    /// Sorted factor lists, so structurally equal products compare equal.
    pub fn canonical(mut self) -> Self {
        self.num.sort();
        self.den.sort();
        self
    }

    /// Apply a monomial substitution to every factor and to the monomial
    /// prefactor. `subst(mono)` returns the extra power of `q` and the image
    /// monomial.
    pub fn map_monomials(
        &self,
        subst: impl Fn(&ExponentVector) -> Result<(i64, ExponentVector)>,
    ) -> Result<FactorProduct> {
        let map = |fs: &[AtomicFactor]| -> Result<Vec<AtomicFactor>> {
            fs.iter()
                .map(|f| {
                    let (dq, mono) = subst(&f.mono)?;
                    Ok(AtomicFactor::new(f.qexp + dq, mono))
                })
                .collect()
        };
        let (dq, premono) = subst(&self.premono)?;
        Ok(FactorProduct {
            nvars: self.nvars,
            prefactor: self.prefactor.clone(),
            qshift: self.qshift + dq,
            premono,
            num: map(&self.num)?,
            den: map(&self.den)?,
        })
    }

    /// Substitute `x_var -> x_target * q^shift`.
    pub fn substitute(&self, var: usize, target: usize, shift: i64) -> Result<FactorProduct> {
        for i in [var, target] {
            if i >= self.nvars {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    nvars: self.nvars,
                });
            }
        }
        self.map_monomials(|m| {
            let e = m.get(var);
            if e == 0 || var == target {
                return Ok((shift * e, *m));
            }
            let mut out = *m;
            out.set(var, 0)?;
            out.set(target, m.get(target) + e)?;
            Ok((shift * e, out))
        })
    }

    /// A numerator factor equal to `1 - 1`, if any.
    pub fn detect_zero(&self) -> Option<AtomicFactor> {
        self.num.iter().copied().find(AtomicFactor::is_zero_factor)
    }

    /// Remove factors common to numerator and denominator (multiset
    /// difference on identical factors).
    pub fn cancel(&self) -> FactorProduct {
        let mut counts: FxHashMap<AtomicFactor, usize> = FxHashMap::default();
        for f in &self.den {
            *counts.entry(*f).or_default() += 1;
        }
        let mut num = Vec::with_capacity(self.num.len());
        for f in &self.num {
            match counts.get_mut(f) {
                Some(c) if *c > 0 => *c -= 1,
                _ => num.push(*f),
            }
        }
        let mut den = Vec::new();
        for f in &self.den {
            if let Some(c) = counts.get_mut(f) {
                if *c > 0 {
                    *c -= 1;
                    den.push(*f);
                }
            }
        }
        FactorProduct {
            num,
            den,
            ..self.clone()
        }
    }

    /// Degree in `x_i` of the rational function (numerator degree minus
    /// denominator degree).
    pub fn degree_in(&self, i: usize) -> i64 {
        let deg = |f: &AtomicFactor| f.mono.get(i).max(0);
        self.premono.get(i) + self.num.iter().map(deg).sum::<i64>()
            - self.den.iter().map(deg).sum::<i64>()
    }

    /// Split into the scalar part, the variable-carrying numerator factors
    /// and the monomial prefactor. Requires every variable-carrying
    /// denominator factor to cancel.
    pub(crate) fn polynomial_parts(&self) -> Result<PolynomialParts> {
        let c = self.cancel();
        let remaining = c.den.iter().filter(|f| !f.is_scalar()).count();
        if remaining > 0 {
            return Err(Error::NotPolynomial(remaining));
        }
        let mut scalar_num = QPoly::q_pow(c.qshift);
        let mut scalar_den = QPoly::one();
        let mut factors = Vec::new();
        for f in &c.num {
            match f.as_qpoly() {
                Some(p) => scalar_num = scalar_num * p,
                None => factors.push((f.qexp, f.mono)),
            }
        }
        for f in &c.den {
            scalar_den = scalar_den * f.as_qpoly().expect("scalar");
        }
        let scalar = &c.prefactor * &QRat::new(scalar_num, scalar_den)?;
        order_for_expansion(&mut factors);
        Ok(PolynomialParts {
            scalar,
            factors,
            premono: c.premono,
        })
    }

    /// Full expansion as a Laurent polynomial; the scalar part must be a
    /// polynomial in `q`.
    pub fn expand(&self) -> Result<MultiLaurent> {
        let parts = self.polynomial_parts()?;
        let Some(scalar) = parts.scalar.as_poly() else {
            return Err(Error::NotPolynomial(0));
        };
        let body: MultiLaurent = expand_binomials(self.nvars, &parts.factors, QPoly::one(), None)?;
        let mut out = MultiLaurent::zero(self.nvars);
        for (m, c) in body.terms() {
            let term = MultiLaurent::monomial(m.checked_add(&parts.premono)?, c * scalar);
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Exact value at `q = q0`, `x_i = xs[i]`.
    pub fn eval(&self, q0: &BigRational, xs: &[BigRational]) -> Result<BigRational> {
        if xs.len() != self.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: xs.len(),
            });
        }
        // zero to a negative power is a pole
        let power = |base: &BigRational, e: i64| {
            if e < 0 && base.is_zero() {
                Err(Error::DivisionByZero)
            } else {
                Ok(rat_pow(base, e))
            }
        };
        let mono = |qexp: i64, m: &ExponentVector| -> Result<BigRational> {
            let mut v = power(q0, qexp)?;
            for i in m.support() {
                v *= power(&xs[i], m.get(i))?;
            }
            Ok(v)
        };
        let mut val = self.prefactor.eval(q0)? * mono(self.qshift, &self.premono)?;
        for f in &self.num {
            val *= BigRational::one() - mono(f.qexp, &f.mono)?;
        }
        for f in &self.den {
            let d = BigRational::one() - mono(f.qexp, &f.mono)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            val /= d;
        }
        Ok(val)
    }

    pub fn to_record(&self) -> FactorRecord {
        let c = self.clone().canonical();
        FactorRecord {
            prefactor: c.prefactor.to_string(),
            monomial: MonomialDisplay(c.qshift, c.premono).to_string(),
            num: c.num.iter().map(ToString::to_string).collect(),
            den: c.den.iter().map(ToString::to_string).collect(),
        }
    }
}

pub(crate) struct PolynomialParts {
    pub scalar: QRat,
    pub factors: Vec<(i64, ExponentVector)>,
    pub premono: ExponentVector,
}

impl PolynomialParts {
    /// Coefficient of `x^0`: the scalar times the coefficient of
    /// `x^(-premono)` in the product of the factors.
    pub fn constant_term(&self) -> Result<QRat> {
        if self.scalar.is_zero() {
            return Ok(QRat::zero());
        }
        let nvars = self.premono.len();
        let target = self.premono.neg();
        let c = match expand_binomials::<WidePoly>(
            nvars,
            &self.factors,
            <WidePoly as Coeff>::one(),
            Some(&target),
        ) {
            Ok(r) => r.coeff(&target).to_qpoly(),
            Err(Error::Overflow) => {
                expand_binomials::<QPoly>(nvars, &self.factors, QPoly::one(), Some(&target))?
                    .coeff(&target)
            }
            Err(e) => return Err(e),
        };
        Ok(&self.scalar * &QRat::from(c))
    }

    /// Same with `q` specialised to 1; the scalar must not vanish there.
    pub fn constant_term_at_one(&self) -> Result<BigRational> {
        let one = BigRational::one();
        let scalar = self.scalar.eval(&one)?;
        let nvars = self.premono.len();
        let target = self.premono.neg();
        let c = expand_binomials::<BigInt>(
            nvars,
            &self.factors,
            <BigInt as One>::one(),
            Some(&target),
        )?
        .coeff(&target);
        Ok(scalar * BigRational::from_integer(c))
    }
}

/// Group factors by the pair of variables they touch so that the reachable
/// exponent window closes early during pruned expansion.
fn order_for_expansion(factors: &mut [(i64, ExponentVector)]) {
    factors.sort_by_key(|(q, m)| {
        let mut vars: Vec<usize> = m.support().collect();
        vars.reverse();
        (vars, *q)
    });
}

struct MonomialDisplay(i64, ExponentVector);

impl fmt::Display for MonomialDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_monomial(f, self.0, &self.1)
    }
}

/// Serialisable view of a [`FactorProduct`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorRecord {
    pub prefactor: String,
    pub monomial: String,
    pub num: Vec<String>,
    pub den: Vec<String>,
}

impl fmt::Display for FactorProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_record();
        write!(f, "({})*{}", r.prefactor, r.monomial)?;
        for n in &r.num {
            write!(f, "*({n})")?;
        }
        if !r.den.is_empty() {
            f.write_str(" / [")?;
            for (i, d) in r.den.iter().enumerate() {
                if i > 0 {
                    f.write_str("*")?;
                }
                write!(f, "({d})")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// builders

/// Factors `1 - q^(qshift+i) x^mono` for `i = 0..length`.
pub fn pochhammer(qshift: i64, mono: ExponentVector, length: i64) -> Result<Vec<AtomicFactor>> {
    if length < 0 {
        return Err(Error::ParameterOutOfRange(format!(
            "negative Pochhammer length {length}"
        )));
    }
    Ok((0..length)
        .map(|i| AtomicFactor::new(qshift + i, mono))
        .collect())
}

fn chi(b: bool) -> i64 {
    b as i64
}

fn check_nvars(n: usize) -> Result<usize> {
    let nvars = n + 1;
    if n == 0 || nvars > MAX_VARS {
        return Err(Error::ParameterOutOfRange(format!(
            "n = {n} outside 1..={}",
            MAX_VARS - 1
        )));
    }
    Ok(nvars)
}

fn pairwise_factors(nvars: usize, first: usize, k: i64, out: &mut Vec<AtomicFactor>) -> Result<()> {
    for i in first..nvars {
        for j in i + 1..nvars {
            out.extend(pochhammer(0, ExponentVector::ratio(nvars, i, j), k)?);
            out.extend(pochhammer(1, ExponentVector::ratio(nvars, j, i), k)?);
        }
    }
    Ok(())
}

/// The q-Dyson product `prod_{i<j} (x_i/x_j)_{a_i} (q x_j/x_i)_{a_j}` in
/// `a.len()` variables.
pub fn build_qdyson_kernel(a: &[i64]) -> Result<FactorProduct> {
    let nvars = a.len();
    if nvars == 0 || nvars > MAX_VARS {
        return Err(Error::ParameterOutOfRange(format!(
            "q-Dyson kernel needs 1..={MAX_VARS} exponents, got {nvars}"
        )));
    }
    if let Some(x) = a.iter().find(|&&x| x < 0) {
        return Err(Error::ParameterOutOfRange(format!("negative exponent {x}")));
    }
    let mut num = Vec::new();
    for i in 0..nvars {
        for j in i + 1..nvars {
            num.extend(pochhammer(0, ExponentVector::ratio(nvars, i, j), a[i])?);
            num.extend(pochhammer(1, ExponentVector::ratio(nvars, j, i), a[j])?);
        }
    }
    FactorProduct::from_factors(nvars, num, Vec::new())
}

/// The Habsieger-Kadell kernel `A_q(x0..xn; a, b, m, l, k)`.
pub fn build_hk_kernel(
    n: usize,
    a: i64,
    b: i64,
    m: usize,
    l: usize,
    k: i64,
) -> Result<FactorProduct> {
    let nvars = check_nvars(n)?;
    if m > n || l > n {
        return Err(Error::ParameterOutOfRange(format!(
            "need 0 <= m, l <= n (n={n}, m={m}, l={l})"
        )));
    }
    if a < 0 || b < 0 || k < 0 {
        return Err(Error::ParameterOutOfRange(format!(
            "a, b, k must be nonnegative (a={a}, b={b}, k={k})"
        )));
    }
    if m >= 1 && a == 0 {
        return Err(Error::ParameterOutOfRange(
            "a = 0 with m >= 1 gives a Pochhammer symbol of length -1".into(),
        ));
    }
    let mut num = Vec::new();
    for i in 1..=n {
        let low = chi(i <= m);
        let high = chi(i + l > n);
        num.extend(pochhammer(
            low,
            ExponentVector::ratio(nvars, 0, i),
            a - low,
        )?);
        num.extend(pochhammer(
            chi(i > m),
            ExponentVector::ratio(nvars, i, 0),
            b + low + high,
        )?);
    }
    pairwise_factors(nvars, 1, k, &mut num)?;
    FactorProduct::from_factors(nvars, num, Vec::new())
}

/// Parameters `(n, b, m, l, k)` of the rational function `Q(h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QParams {
    pub n: usize,
    pub b: i64,
    pub m: usize,
    pub l: usize,
    pub k: i64,
}

impl QParams {
    pub fn validate(&self) -> Result<()> {
        check_nvars(self.n)?;
        if self.m >= self.n || self.l >= self.n {
            return Err(Error::ParameterOutOfRange(format!(
                "need 0 <= m, l < n (n={}, m={}, l={})",
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

    /// `b + chi(i >= n-l+1)`
    pub fn b_star(&self, i: usize) -> i64 {
        self.b + chi(i + self.l > self.n)
    }
}

/// `Q(h)`: numerator `(x_i/x0)_{b*_i+1}` for `i <= m`, `(q x_i/x0)_{b*_i}`
/// for `i > m`, times the pairwise product; denominator
/// `(1 - x0/(x_i q^t))` for `t = 0..=h` (`i <= m`) or `t = 1..=h` (`i > m`).
pub fn build_q(h: i64, p: &QParams) -> Result<FactorProduct> {
    p.validate()?;
    if h < 0 {
        return Err(Error::ParameterOutOfRange(format!("h = {h} < 0")));
    }
    let nvars = p.n + 1;
    let mut num = Vec::new();
    let mut den = Vec::new();
    for i in 1..=p.n {
        let up = ExponentVector::ratio(nvars, i, 0);
        let down = ExponentVector::ratio(nvars, 0, i);
        if i <= p.m {
            num.extend(pochhammer(0, up, p.b_star(i) + 1)?);
            den.extend((0..=h).map(|t| AtomicFactor::new(-t, down)));
        } else {
            num.extend(pochhammer(1, up, p.b_star(i))?);
            den.extend((1..=h).map(|t| AtomicFactor::new(-t, down)));
        }
    }
    pairwise_factors(nvars, 1, p.k, &mut num)?;
    FactorProduct::from_factors(nvars, num, den)
}

/// Chain `(r_1 < ... < r_s; k_1, ..., k_s)` of the residue recursion for
/// `Q(h)`. The implicit `r_0 = k_0 = 0` is not stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ChainState {
    pub r: Vec<usize>,
    pub k: Vec<i64>,
    pub h: i64,
    pub params: QParams,
}

impl ChainState {
    pub fn root(h: i64, params: QParams) -> Self {
        ChainState {
            r: Vec::new(),
            k: Vec::new(),
            h,
            params,
        }
    }

    pub fn new(r: Vec<usize>, k: Vec<i64>, h: i64, params: QParams) -> Result<Self> {
        let c = ChainState { r, k, h, params };
        c.validate()?;
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let bad = |msg: String| Err(Error::MalformedChain(msg));
        if self.r.len() != self.k.len() {
            return bad(format!(
                "r has {} entries, k has {}",
                self.r.len(),
                self.k.len()
            ));
        }
        let mut prev = 0;
        for &ri in &self.r {
            if ri <= prev || ri > self.params.n {
                return bad(format!(
                    "r = {:?} not strictly increasing in 1..={}",
                    self.r, self.params.n
                ));
            }
            prev = ri;
        }
        if let Some(&ki) = self.k.iter().find(|&&ki| ki < 0 || ki > self.h) {
            return bad(format!("k entry {ki} outside 0..={}", self.h));
        }
        Ok(())
    }

    pub fn extend(&self, r_next: usize, k_next: i64) -> ChainState {
        let mut c = self.clone();
        c.r.push(r_next);
        c.k.push(k_next);
        c
    }

    /// The last chain variable (`x0` for the empty chain).
    pub fn hub(&self) -> usize {
        self.r.last().copied().unwrap_or(0)
    }

    /// `r = (1, ..., n-l)`, `k_i = (n-l-i) k + b + 1`.
    pub fn is_exceptional(&self) -> bool {
        let p = &self.params;
        let s = p.n - p.l;
        self.len() == s
            && (0..s).all(|i| self.r[i] == i + 1 && self.k[i] == (s - i - 1) as i64 * p.k + p.b + 1)
    }
}

impl fmt::Display for ChainState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={:?};k={:?}", self.r, self.k)
    }
}

/// `E_{r,k}`: replace `x_{r_i}` by `x_{r_s} q^{k_s - k_i}` for
/// `i = 0..s-1` (with `r_0 = k_0 = 0`).
pub fn apply_e(f: &FactorProduct, chain: &ChainState) -> Result<FactorProduct> {
    chain.validate()?;
    let s = chain.len();
    if s == 0 {
        return Ok(f.clone());
    }
    let hub = chain.r[s - 1];
    let ks = chain.k[s - 1];
    let mut moves = vec![(0usize, ks)];
    for i in 0..s - 1 {
        moves.push((chain.r[i], ks - chain.k[i]));
    }
    f.map_monomials(|m| {
        let mut out = *m;
        let mut dq = 0;
        for &(v, shift) in &moves {
            let e = m.get(v);
            if e != 0 {
                out.set(v, 0)?;
                out.set(hub, out.get(hub) + e)?;
                dq += e * shift;
            }
        }
        Ok((dq, out))
    })
}

/// `Q(h | r; k) = E_{r,k}[ Q(h) * prod_i (1 - x0/(x_{r_i} q^{k_i})) ]`.
///
/// Each extra factor cancels a denominator factor of `Q(h)`; the one
/// exception, `k_i = 0` with `r_i > m`, has no partner and is kept in the
/// numerator, where `E` turns it into `1 - 1`.
pub fn build_q_chain(chain: &ChainState) -> Result<FactorProduct> {
    chain.validate()?;
    let p = &chain.params;
    let mut q = build_q(chain.h, p)?;
    let nvars = p.n + 1;
    for (&ri, &ki) in chain.r.iter().zip(&chain.k) {
        let f = AtomicFactor::new(-ki, ExponentVector::ratio(nvars, 0, ri));
        match q.den.iter().position(|d| *d == f) {
            Some(pos) => {
                q.den.remove(pos);
            }
            None if ki == 0 && ri > p.m => q.num.push(f),
            None => {
                return Err(Error::MalformedChain(format!(
                    "factor {f} absent from the denominator of Q({})",
                    chain.h
                )))
            }
        }
    }
    apply_e(&q, chain)
}

//! Sparse multivariate Laurent polynomials in `x0..x_{n}` with coefficients
//! in a ring of q-polynomials.
//!
//! The default coefficient ring is the exact [`QPoly`]. Two further rings
//! implement [`Coeff`]: [`WidePoly`], a fixed-width `i128` q-polynomial that
//! reports overflow instead of wrapping (the fast path of the product
//! expander), and `BigInt`, which is the coefficient ring with `q`
//! specialised to 1.

use std::collections::hash_map::Entry;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::arith::QPoly;
use crate::error::{Error, Result};

/// Largest supported number of variables.
pub const MAX_VARS: usize = 8;

/// Exponent vector of a monomial `x0^e0 * ... * x_{n}^{en}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExponentVector {
    len: u8,
    exps: [i16; MAX_VARS],
}

impl ExponentVector {
    pub fn zeros(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        ExponentVector {
            len: nvars as u8,
            exps: [0; MAX_VARS],
        }
    }

    pub fn new(exps: &[i64]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::TooManyVariables(exps.len()));
        }
        let mut out = ExponentVector::zeros(exps.len());
        for (i, &e) in exps.iter().enumerate() {
            out.exps[i] = i16::try_from(e).map_err(|_| Error::ExponentOverflow(e))?;
        }
        Ok(out)
    }

    /// `x_i^e`
    pub fn unit(nvars: usize, i: usize, e: i64) -> Self {
        let mut v = ExponentVector::zeros(nvars);
        v.exps[i] = e as i16;
        v
    }

    /// `x_i / x_j`
    pub fn ratio(nvars: usize, i: usize, j: usize) -> Self {
        let mut v = ExponentVector::zeros(nvars);
        v.exps[i] += 1;
        v.exps[j] -= 1;
        v
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> i64 {
        self.exps[i] as i64
    }

    pub fn set(&mut self, i: usize, e: i64) -> Result<()> {
        self.exps[i] = i16::try_from(e).map_err(|_| Error::ExponentOverflow(e))?;
        Ok(())
    }

    pub fn as_slice(&self) -> &[i16] {
        &self.exps[..self.len()]
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.as_slice().iter().map(|&e| e as i64).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.as_slice().iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.as_slice().iter().map(|&e| e as i64).sum()
    }

    /// Variables with a nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.exps[i] != 0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        debug_assert_eq!(self.len, other.len);
        let mut out = *self;
        for i in 0..self.len() {
            out.exps[i] =
                self.exps[i]
                    .checked_add(other.exps[i])
                    .ok_or(Error::ExponentOverflow(
                        self.exps[i] as i64 + other.exps[i] as i64,
                    ))?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = *self;
        for e in out.exps.iter_mut() {
            *e = -*e;
        }
        out
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.as_slice().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_slice())
    }
}

/// Coefficient ring of a [`MultiLaurent`]: a commutative ring containing
/// the powers of `q`.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// `self += (-1)^negate * q^shift * other`
    fn add_scaled(&mut self, other: &Self, shift: i64, negate: bool) -> Result<()>;
    fn mul(&self, other: &Self) -> Result<Self>;
}

impl Coeff for QPoly {
    fn zero() -> Self {
        QPoly::zero()
    }
    fn one() -> Self {
        QPoly::one()
    }
    fn is_zero(&self) -> bool {
        QPoly::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, shift: i64, negate: bool) -> Result<()> {
        QPoly::add_scaled(self, other, shift, negate);
        Ok(())
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
}

/// `q = 1`: powers of `q` act as the identity.
impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, _shift: i64, negate: bool) -> Result<()> {
        if negate {
            *self -= other;
        } else {
            *self += other;
        }
        Ok(())
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
}

/// q-polynomial with `i128` coefficients; every operation is checked and
/// reports [`Error::Overflow`] rather than wrapping.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WidePoly {
    lo: i64,
    coeffs: Vec<i128>,
}

impl WidePoly {
    fn trim(&mut self) {
        let Some(first) = self.coeffs.iter().position(|&c| c != 0) else {
            self.coeffs.clear();
            self.lo = 0;
            return;
        };
        let last = self.coeffs.iter().rposition(|&c| c != 0).unwrap();
        self.coeffs.truncate(last + 1);
        if first > 0 {
            self.coeffs.drain(..first);
            self.lo += first as i64;
        }
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::from_dense(
            self.lo,
            self.coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        )
    }
}

impl Coeff for WidePoly {
    fn zero() -> Self {
        WidePoly::default()
    }
    fn one() -> Self {
        WidePoly {
            lo: 0,
            coeffs: vec![1],
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_scaled(&mut self, other: &Self, shift: i64, negate: bool) -> Result<()> {
        if other.coeffs.is_empty() {
            return Ok(());
        }
        let olo = other.lo + shift;
        if self.coeffs.is_empty() {
            self.lo = olo;
            self.coeffs = if negate {
                other
                    .coeffs
                    .iter()
                    .map(|c| c.checked_neg().ok_or(Error::Overflow))
                    .collect::<Result<_>>()?
            } else {
                other.coeffs.clone()
            };
            return Ok(());
        }
        let new_lo = self.lo.min(olo);
        let new_hi = (self.lo + self.coeffs.len() as i64).max(olo + other.coeffs.len() as i64);
        if new_lo < self.lo {
            let pad = (self.lo - new_lo) as usize;
            self.coeffs.splice(0..0, std::iter::repeat_n(0, pad));
            self.lo = new_lo;
        }
        let want = (new_hi - self.lo) as usize;
        if self.coeffs.len() < want {
            self.coeffs.resize(want, 0);
        }
        let off = (olo - self.lo) as usize;
        for (dst, &c) in self.coeffs[off..].iter_mut().zip(&other.coeffs) {
            *dst = if negate {
                dst.checked_sub(c)
            } else {
                dst.checked_add(c)
            }
            .ok_or(Error::Overflow)?;
        }
        self.trim();
        Ok(())
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(WidePoly::default());
        }
        let mut out = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                let p = a.checked_mul(b).ok_or(Error::Overflow)?;
                out[i + j] = out[i + j].checked_add(p).ok_or(Error::Overflow)?;
            }
        }
        let mut w = WidePoly {
            lo: self.lo + other.lo,
            coeffs: out,
        };
        w.trim();
        Ok(w)
    }
}

/// Sparse Laurent polynomial in `nvars` variables.
#[derive(Clone, PartialEq)]
pub struct MultiLaurent<C: Coeff = QPoly> {
    nvars: usize,
    terms: FxHashMap<ExponentVector, C>,
}

impl<C: Coeff> MultiLaurent<C> {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        MultiLaurent {
            nvars,
            terms: FxHashMap::default(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(ExponentVector::zeros(nvars), C::one())
    }

    pub fn monomial(mono: ExponentVector, c: C) -> Self {
        let mut out = Self::zero(mono.len());
        if !c.is_zero() {
            out.terms.insert(mono, c);
        }
        out
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (ExponentVector, C)>,
    ) -> Result<Self> {
        let mut out = Self::zero(nvars);
        for (m, c) in terms {
            if m.len() != nvars {
                return Err(Error::NvarsMismatch {
                    left: nvars,
                    right: m.len(),
                });
            }
            out.add_term(m, &c, 0, false)?;
        }
        Ok(out)
    }

    /// The binomial `1 - q^qexp * x^mono`.
    pub fn binomial(qexp: i64, mono: ExponentVector) -> Result<Self> {
        let mut out = Self::one(mono.len());
        out.add_term(mono, &C::one(), qexp, true)?;
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// No stored terms; same as [`MultiLaurent::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &C)> {
        self.terms.iter()
    }

    /// Terms sorted by exponent vector, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(&ExponentVector, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    fn add_term(&mut self, m: ExponentVector, c: &C, shift: i64, negate: bool) -> Result<()> {
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                o.get_mut().add_scaled(c, shift, negate)?;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                let mut z = C::zero();
                z.add_scaled(c, shift, negate)?;
                if !z.is_zero() {
                    v.insert(z);
                }
            }
        }
        Ok(())
    }

    fn check_nvars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c, 0, false)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c, 0, true)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_nvars(other)?;
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.checked_add(m2)?;
                out.add_term(m, &c1.mul(c2)?, 0, false)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Result<Self> {
        let mut out = Self::zero(self.nvars);
        for (m, x) in &self.terms {
            let p = x.mul(c)?;
            if !p.is_zero() {
                out.terms.insert(*m, p);
            }
        }
        Ok(out)
    }

    /// Coefficient of `x^alpha` (zero when absent).
    pub fn coeff(&self, alpha: &ExponentVector) -> C {
        self.terms.get(alpha).cloned().unwrap_or_else(C::zero)
    }

    /// Sum of the terms free of `x_i`.
    pub fn ct_var(&self, i: usize) -> Result<Self> {
        self.check_index(i)?;
        Ok(MultiLaurent {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.get(i) == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        })
    }

    /// Constant term in all variables, taken one variable at a time in
    /// ascending index order.
    pub fn ct_all(&self) -> C {
        let mut cur = self.clone();
        for i in 0..self.nvars {
            cur = cur.ct_var(i).expect("index in range");
        }
        cur.coeff(&ExponentVector::zeros(self.nvars))
    }

    /// Substitute `x_i -> x_j * q^s` (with `i == j` a pure rescaling).
    pub fn subst(&self, i: usize, j: usize, s: i64) -> Result<Self> {
        self.check_index(i)?;
        self.check_index(j)?;
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.get(i);
            let mut m2 = *m;
            if i != j {
                m2.set(i, 0)?;
                m2.set(j, m.get(j) + e)?;
            }
            out.add_term(m2, c, s * e, false)?;
        }
        Ok(out)
    }

    /// True when every term has total degree 0.
    pub fn is_homogeneous_degree_zero(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MultiLaurent<D> {
        MultiLaurent {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Multiply by `1 - q^qexp * x^mono`, keeping only terms inside `window`.
    fn mul_binomial(
        self,
        qexp: i64,
        mono: &ExponentVector,
        window: Option<&Window>,
    ) -> Result<Self> {
        let keep = |m: &ExponentVector| window.is_none_or(|w| w.contains(m));
        let mut out: FxHashMap<ExponentVector, C> =
            FxHashMap::with_capacity_and_hasher(self.terms.len() * 2, Default::default());
        for (m, c) in &self.terms {
            let m2 = m.checked_add(mono)?;
            if keep(&m2) {
                out.entry(m2)
                    .or_insert_with(C::zero)
                    .add_scaled(c, qexp, true)?;
            }
        }
        for (m, c) in self.terms {
            if !keep(&m) {
                continue;
            }
            match out.entry(m) {
                Entry::Occupied(mut o) => o.get_mut().add_scaled(&c, 0, false)?,
                Entry::Vacant(v) => {
                    v.insert(c);
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(MultiLaurent {
            nvars: self.nvars,
            terms: out,
        })
    }
}

impl MultiLaurent<WidePoly> {
    pub fn to_exact(&self) -> MultiLaurent<QPoly> {
        self.map_coeffs(WidePoly::to_qpoly)
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for MultiLaurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            if m.is_zero() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for MultiLaurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.sorted_terms()).finish()
    }
}

/// Per-variable inclusive exponent bounds.
#[derive(Clone, Copy, Debug)]
struct Window {
    len: usize,
    lo: [i64; MAX_VARS],
    hi: [i64; MAX_VARS],
}

impl Window {
    fn contains(&self, m: &ExponentVector) -> bool {
        (0..self.len).all(|i| {
            let e = m.get(i);
            self.lo[i] <= e && e <= self.hi[i]
        })
    }
}

/// Expand `prefactor * prod (1 - q^s_t * x^e_t)`.
///
/// With `target = Some(alpha)`, terms are dropped as soon as the exponent
/// range still reachable by the remaining factors excludes `alpha`, so the
/// result holds at most the single term `x^alpha`; its coefficient equals
/// the coefficient of `x^alpha` in the full product.
pub fn expand_binomials<C: Coeff>(
    nvars: usize,
    factors: &[(i64, ExponentVector)],
    prefactor: C,
    target: Option<&ExponentVector>,
) -> Result<MultiLaurent<C>> {
    if nvars > MAX_VARS {
        return Err(Error::TooManyVariables(nvars));
    }
    for (_, m) in factors {
        if m.len() != nvars {
            return Err(Error::NvarsMismatch {
                left: nvars,
                right: m.len(),
            });
        }
    }
    // suffix[t] = (min, max) total exponent reachable from factors t..
    let mut suffix = vec![([0i64; MAX_VARS], [0i64; MAX_VARS]); factors.len() + 1];
    for t in (0..factors.len()).rev() {
        let (mut lo, mut hi) = suffix[t + 1];
        for v in 0..nvars {
            let e = factors[t].1.get(v);
            lo[v] += e.min(0);
            hi[v] += e.max(0);
        }
        suffix[t] = (lo, hi);
    }
    let window_after = |t: usize| {
        target.map(|alpha| {
            let (lo, hi) = suffix[t];
            let mut w = Window {
                len: nvars,
                lo: [0; MAX_VARS],
                hi: [0; MAX_VARS],
            };
            for v in 0..nvars {
                w.lo[v] = alpha.get(v) - hi[v];
                w.hi[v] = alpha.get(v) - lo[v];
            }
            w
        })
    };

    let mut acc = MultiLaurent::monomial(ExponentVector::zeros(nvars), prefactor);
    if let Some(w) = window_after(0) {
        if !w.contains(&ExponentVector::zeros(nvars)) {
            return Ok(MultiLaurent::zero(nvars));
        }
    }
    for (t, (qexp, mono)) in factors.iter().enumerate() {
        let w = window_after(t + 1);
        acc = acc.mul_binomial(*qexp, mono, w.as_ref())?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

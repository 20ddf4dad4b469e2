use std::ops::RangeInclusive;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::direct::ct_direct;
use crate::arith::{rat_pow, QRat};
use crate::closed_forms::ParamSet;
use crate::error::{Error, Result};
use crate::kernels::build_hk_kernel;

/// A polynomial in `t = q0^a` with rational coefficients, lowest degree
/// first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolatedPoly {
    pub coeffs: Vec<BigRational>,
    pub q0: BigRational,
    pub params: ParamSet,
}

impl InterpolatedPoly {
    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    /// Value at `t = q0^a`.
    pub fn eval_at_a(&self, a: i64) -> BigRational {
        self.eval(&rat_pow(&self.q0, a))
    }
}

/// `a = a0 ..= a0 + d` with `a0 = 1` when `m >= 1` (the kernel needs
/// `a >= 1` there) and `a0 = 0` otherwise.
pub fn sample_window(p: &ParamSet) -> RangeInclusive<i64> {
    let a0 = (p.m > 0) as i64;
    a0..=a0 + p.degree_bound() as i64
}

/// Exact `CT A_q` at every `a` of the sample window.
pub fn ct_samples(p: &ParamSet) -> Result<Vec<(i64, QRat)>> {
    p.validate()?;
    let window: Vec<i64> = sample_window(p).collect();
    window
        .par_iter()
        .map(|&a| {
            let f = build_hk_kernel(p.n, a, p.b, p.m, p.l, p.k)?;
            Ok((a, ct_direct(&f)?))
        })
        .collect()
}

/// Coefficients of the unique polynomial of degree below `points.len()`
/// through the given points (Newton divided differences).
pub fn interpolate(points: &[(BigRational, BigRational)]) -> Result<Vec<BigRational>> {
    let n = points.len();
    let xs: Vec<&BigRational> = points.iter().map(|(x, _)| x).collect();
    let mut dd: Vec<BigRational> = points.iter().map(|(_, y)| y.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let dx = xs[i] - xs[i - j];
            if dx.is_zero() {
                return Err(Error::DivisionByZero);
            }
            dd[i] = (&dd[i] - &dd[i - 1]) / dx;
        }
    }
    // expand sum_j dd[j] prod_{i<j} (t - x_i), innermost first
    let mut coeffs = vec![BigRational::zero(); n.max(1)];
    for j in (0..n).rev() {
        // coeffs = coeffs * (t - x_j) + dd[j]
        let mut next = vec![BigRational::zero(); n.max(1)];
        for (d, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if d + 1 < next.len() {
                next[d + 1] += c;
            }
            next[d] -= c * xs[j];
        }
        next[0] += &dd[j];
        coeffs = next;
    }
    Ok(coeffs)
}

fn check_q0(q0: &BigRational) -> Result<()> {
    if q0.is_zero() || q0.abs().is_one() {
        return Err(Error::ParameterOutOfRange(format!(
            "q0 = {q0} gives repeated sample points"
        )));
    }
    Ok(())
}

/// Interpolate precomputed symbolic samples at `q = q0`.
pub fn interp_from_samples(
    p: &ParamSet,
    q0: &BigRational,
    samples: &[(i64, QRat)],
) -> Result<InterpolatedPoly> {
    check_q0(q0)?;
    let points = samples
        .iter()
        .map(|(a, v)| Ok((rat_pow(q0, *a), v.eval(q0)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(InterpolatedPoly {
        coeffs: interpolate(&points)?,
        q0: q0.clone(),
        params: p.with_q0(q0.clone()),
    })
}

/// The polynomial in `q0^a` through the constant terms over the sample
/// window; `p.q0` must be set.
pub fn interp_in_qa(p: &ParamSet) -> Result<InterpolatedPoly> {
    let q0 =
        p.q0.clone()
            .ok_or_else(|| Error::ParameterOutOfRange("interpolation needs q0".into()))?;
    check_q0(&q0)?;
    interp_from_samples(p, &q0, &ct_samples(p)?)
}

/// `M'_n(-h)` at `q = q0`.
pub fn mprime_at(p: &ParamSet, h: i64, q0: &BigRational) -> Result<BigRational> {
    Ok(interp_in_qa(&p.with_q0(q0.clone()))?.eval_at_a(-h))
}

use serde::Serialize;

use crate::arith::QRat;
use crate::error::{Error, Result};
use crate::kernels::{AtomicFactor, FactorProduct};
use crate::laurent::ExponentVector;

/// Whether `q^s x_i/x_j` is small in the iterated Laurent order
/// `x_0 << x_1 << ... << x_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Smallness {
    Small,
    Large,
}

pub fn classify_monomial(_s: i64, i: usize, j: usize) -> Result<Smallness> {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => Ok(Smallness::Small),
        std::cmp::Ordering::Greater => Ok(Smallness::Large),
        std::cmp::Ordering::Equal => Err(Error::ParameterOutOfRange(format!(
            "monomial x{i}/x{j} is free of variables"
        ))),
    }
}

/// A pole `x_var = x_t q^(-c)`, from the factor `1 - q^c x_var/x_t`.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Pole {
    t: usize,
    c: i64,
}

/// One partial-fraction step: `CT_{x_var} F` as a list of summands, one
/// per small pole plus, for almost-proper `F`, the limit at infinity.
///
/// Every denominator factor containing `x_var` must be `1 - q^c x_var/x_t`
/// or `1 - q^c x_t/x_var`, with pairwise distinct poles.
pub fn pf_ct_step(f: &FactorProduct, var: usize) -> Result<Vec<FactorProduct>> {
    let nvars = f.nvars();
    if var >= nvars {
        return Err(Error::IndexOutOfRange { index: var, nvars });
    }
    let mut g = f.clone();
    let mut poles: Vec<Pole> = Vec::new();
    let mut other_den = Vec::new();
    for d in &f.den {
        let e = d.mono.get(var);
        if e == 0 {
            other_den.push(*d);
            continue;
        }
        let t = d.mono.support().find(|&i| i != var);
        let t = match t {
            Some(t) if e.abs() == 1 && d.mono.get(t) == -e && d.mono.support().count() == 2 => t,
            _ => return Err(Error::NotInClass(d.to_string())),
        };
        let pole = if e == 1 {
            Pole { t, c: d.qexp }
        } else {
            // 1/(1 - q^s x_t/x_var) = -q^-s (x_var/x_t) / (1 - q^-s x_var/x_t)
            g.prefactor = -&g.prefactor;
            g.qshift -= d.qexp;
            g.premono.set(var, g.premono.get(var) + 1)?;
            g.premono.set(t, g.premono.get(t) - 1)?;
            Pole { t, c: -d.qexp }
        };
        if poles.contains(&pole) {
            return Err(Error::DuplicateFactor(format!(
                "pole x{var} = x{} q^{}",
                pole.t, -pole.c
            )));
        }
        poles.push(pole);
    }
    let pole_factor = |p: &Pole| AtomicFactor::new(p.c, ExponentVector::ratio(nvars, var, p.t));
    g.den = other_den.clone();
    g.den.extend(poles.iter().map(pole_factor));

    let degree = g.degree_in(var);
    if degree > 0 {
        return Err(Error::PositiveDegree { var, degree });
    }
    let mut out = Vec::new();
    for (j, p) in poles.iter().enumerate() {
        if classify_monomial(p.c, var, p.t)? == Smallness::Large {
            continue;
        }
        let mut term = g.clone();
        term.den = other_den.clone();
        term.den.extend(
            poles
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, p)| pole_factor(p)),
        );
        out.push(term.substitute(var, p.t, -p.c)?);
    }
    if degree == 0 {
        out.push(limit_at_infinity(&g, var, &other_den)?);
    }
    Ok(out)
}

/// Value of an almost-proper `g` as `x_var -> infinity`: every factor with
/// positive degree in `x_var` is replaced by its leading monomial, every
/// factor with negative degree by 1.
fn limit_at_infinity(
    g: &FactorProduct,
    var: usize,
    other_den: &[AtomicFactor],
) -> Result<FactorProduct> {
    let mut out = g.clone();
    out.num.clear();
    out.den = other_den.to_vec();
    for f in &g.num {
        let e = f.mono.get(var);
        if e > 0 {
            out.prefactor = -&out.prefactor;
            out.qshift += f.qexp;
            out.premono = out.premono.checked_add(&f.mono)?;
        } else if e == 0 {
            out.num.push(*f);
        }
    }
    for f in g.den.iter().filter(|f| f.mono.get(var) != 0) {
        out.prefactor = -&out.prefactor;
        out.qshift -= f.qexp;
        out.premono = out.premono.checked_add(&f.mono.neg())?;
    }
    debug_assert_eq!(out.premono.get(var), 0);
    Ok(out)
}

/// `CT` in all variables by applying [`pf_ct_step`] to `x_0, x_1, ...` in
/// turn.
pub fn ct_iterated_pf(f: &FactorProduct) -> Result<QRat> {
    let mut terms = vec![f.clone()];
    for var in 0..f.nvars() {
        let mut next = Vec::new();
        for t in &terms {
            if t.detect_zero().is_none() {
                next.extend(pf_ct_step(t, var)?);
            }
        }
        terms = next;
    }
    let mut total = QRat::zero();
    for t in &terms {
        debug_assert!(t.premono.is_zero());
        total = &total + &t.polynomial_parts()?.scalar;
    }
    Ok(total)
}

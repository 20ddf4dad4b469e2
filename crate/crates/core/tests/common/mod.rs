//! Test-only oracles that share no code path with the engine under test.

#![allow(dead_code)]

use num_rational::BigRational;
use qmorris_core::kernels::{AtomicFactor, FactorProduct};
use qmorris_core::{ExponentVector, MultiLaurent, QPoly, QRat};
use rand::rngs::StdRng;
use rand::Rng;

fn monomial(nvars: usize, e: &ExponentVector, c: QPoly) -> MultiLaurent {
    assert_eq!(e.len(), nvars);
    MultiLaurent::monomial(*e, c)
}

fn keep_up_to(f: &MultiLaurent, v: usize, depth: i64) -> MultiLaurent {
    let terms: Vec<_> = f
        .terms()
        .filter(|(m, _)| m.get(v) <= depth)
        .map(|(m, c)| (*m, c.clone()))
        .collect();
    MultiLaurent::from_terms(f.nvars(), terms).unwrap()
}

/// Constant term of a rational function in the field of iterated Laurent
/// series with `x_0 << x_1 << ... << x_n`, by expanding every denominator
/// factor as a geometric series, one variable at a time.
///
/// When `x_v` is eliminated, every remaining denominator factor containing
/// `x_v` has `x_v` as its lowest variable, so its expansion only raises the
/// power of `x_v`; the series is cut at the largest negative power of `x_v`
/// in the numerator, which is exact for the constant term.
pub fn series_ct(f: &FactorProduct) -> QRat {
    let nvars = f.nvars();
    let mut num = monomial(nvars, &f.premono, QPoly::q_pow(f.qshift));
    for g in &f.num {
        num = num
            .mul(&MultiLaurent::binomial(g.qexp, g.mono).unwrap())
            .unwrap();
    }
    let mut den: Vec<AtomicFactor> = f.den.clone();
    for v in 0..nvars {
        let (dv, rest): (Vec<_>, Vec<_>) = den.into_iter().partition(|d| d.mono.get(v) != 0);
        den = rest;
        let depth = num
            .terms()
            .map(|(m, _)| -m.get(v))
            .max()
            .unwrap_or(0)
            .max(0);
        for d in &dv {
            assert!(
                d.mono.support().all(|i| i >= v),
                "factor {d} reaches below x{v}"
            );
            let e = d.mono.get(v);
            let mut series = Vec::new();
            if e > 0 {
                // sum_l (q^c x^e)^l
                let mut l = 0;
                while l * e <= depth {
                    series.push((scale(&d.mono, l), QPoly::q_pow(d.qexp * l)));
                    l += 1;
                }
            } else {
                // -sum_l (q^c x^e)^-(l+1)
                let mut l = 1;
                while l * -e <= depth {
                    series.push((scale(&d.mono, -l), -QPoly::q_pow(-d.qexp * l)));
                    l += 1;
                }
            }
            let s = MultiLaurent::from_terms(nvars, series).unwrap();
            num = keep_up_to(&num.mul(&s).unwrap(), v, depth);
        }
        num = num.ct_var(v).unwrap();
    }
    let mut value = QRat::from(num.ct_all());
    for d in &den {
        assert!(d.mono.is_zero());
        value = value
            .checked_div(&QRat::from(QPoly::one_minus_q_pow(d.qexp)))
            .unwrap();
    }
    &value * &f.prefactor
}

fn scale(e: &ExponentVector, l: i64) -> ExponentVector {
    let v: Vec<i64> = e.to_vec().iter().map(|x| x * l).collect();
    ExponentVector::new(&v).unwrap()
}

/// A random factor `1 - q^c x_i/x_j`.
pub fn random_ratio_factor(rng: &mut StdRng, nvars: usize) -> AtomicFactor {
    let i = rng.gen_range(0..nvars);
    let mut j = rng.gen_range(0..nvars - 1);
    if j >= i {
        j += 1;
    }
    AtomicFactor::new(rng.gen_range(-2..=2), ExponentVector::ratio(nvars, i, j))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

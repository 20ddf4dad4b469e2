use super::direct::ct_direct;
use crate::arith::QRat;
use crate::closed_forms::{gauss_binom, ParamSet};
use crate::error::{Error, Result};
use crate::kernels::{build_hk_kernel, pochhammer, FactorProduct};
use crate::laurent::ExponentVector;

fn binom2(x: i64) -> i64 {
    x * (x - 1) / 2
}

/// The `a`-free Laurent polynomial `L(x_1..x_n; k)` in the variables
/// `x_0..x_n` (`x_0` unused).
pub fn aomoto_l(p: &ParamSet, ks: &[i64]) -> Result<FactorProduct> {
    p.validate()?;
    let n = p.n;
    if ks.len() != n {
        return Err(Error::ParameterOutOfRange(format!(
            "composition has {} parts, expected {n}",
            ks.len()
        )));
    }
    let nvars = n + 1;
    let (b, l) = (p.b, p.l as i64);
    let split = n - p.l;
    let mut qexp = (n as i64 - l) * binom2(b + 1) + l * binom2(b + 2);
    for (idx, &ki) in ks.iter().enumerate() {
        qexp += binom2(ki) - if idx < split { b * ki } else { (b + 1) * ki };
    }
    let mut mono = vec![0i64; nvars];
    for i in 1..=n {
        mono[i] = p.b_star(i) + (i <= p.m) as i64 - ks[i - 1];
    }
    let mut num = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            num.extend(pochhammer(0, ExponentVector::ratio(nvars, i, j), p.k)?);
            num.extend(pochhammer(1, ExponentVector::ratio(nvars, j, i), p.k)?);
        }
    }
    let mut f = FactorProduct::from_factors(nvars, num, Vec::new())?;
    f.qshift = qexp;
    f.premono = ExponentVector::new(&mono)?;
    Ok(f)
}

/// All compositions of `total` into `parts` nonnegative parts.
pub fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    fn go(total: i64, parts: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in 0..=total {
            prefix.push(x);
            go(total - x, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

/// `sum_k prod_i [a + b*_i, k_i] CT L(x; k)` over compositions of
/// `nb + m + l`.
pub fn aomoto_rhs(p: &ParamSet) -> Result<QRat> {
    let mut acc = QRat::zero();
    for ks in compositions(p.degree_bound() as i64, p.n) {
        let mut coeff = QRat::one();
        for (idx, &ki) in ks.iter().enumerate() {
            coeff = &coeff * &gauss_binom(p.a + p.b_star(idx + 1), ki)?;
        }
        if coeff.is_zero() {
            continue;
        }
        acc = &acc + &(&coeff * &ct_direct(&aomoto_l(p, &ks)?)?);
    }
    Ok(acc)
}

/// `CT A_q` equals the expansion over compositions.
pub fn aomoto_expansion_check(p: &ParamSet) -> Result<bool> {
    let lhs = ct_direct(&build_hk_kernel(p.n, p.a, p.b, p.m, p.l, p.k)?)?;
    Ok(lhs == aomoto_rhs(p)?)
}

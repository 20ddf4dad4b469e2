use std::fmt::Display;
use std::time::Instant;

use serde_json::{json, Value};

use super::report::{Status, VerifyReport};
use super::{Context, Point, Span};
use crate::closed_forms::{
    dyson_rhs, morris_rhs, prop52_lhs, prop52_rhs, qdyson_rhs, vanishing_sets, ParamSet,
};
use crate::ct_engine::{
    aomoto_rhs, ct_direct, ct_direct_at_one, ct_recursion, interp_in_qa, lemma_important,
    Lemma42Verdict, RecursionCertificate,
};
use crate::error::Result;
use crate::kernels::{build_hk_kernel, build_qdyson_kernel};

/// Default range per flag `n a b m l k`; `None` marks a flag the command
/// does not read.
pub(crate) struct GridSpec {
    pub defaults: [Option<Span>; 6],
    /// `--a` ranges over each of the `n + 1` exponents.
    pub vector_a: bool,
}

const fn sp(lo: i64, hi: i64) -> Option<Span> {
    Some(Span { lo, hi })
}

pub(crate) fn grid_spec(command: &str) -> GridSpec {
    let (defaults, vector_a) = match command {
        "verify-dyson" | "verify-qdyson" => ([sp(1, 2), sp(0, 2), None, None, None, None], true),
        "verify-hk" | "verify-expansion" => (
            [sp(1, 2), sp(1, 2), sp(0, 1), sp(0, 1), sp(0, 1), sp(0, 2)],
            false,
        ),
        "bench" => (
            [sp(3, 3), sp(2, 2), sp(1, 1), sp(1, 1), sp(1, 1), sp(3, 3)],
            false,
        ),
        "verify-vanishing" | "verify-extra" => (
            [sp(2, 2), None, sp(0, 0), sp(0, 1), sp(0, 1), sp(2, 2)],
            false,
        ),
        "verify-prop52" => ([sp(1, 3), None, sp(0, 2), None, None, sp(1, 4)], false),
        "verify-lemma42" => ([sp(1, 4), None, sp(0, 2), None, None, sp(0, 3)], false),
        other => unreachable!("unknown command {other}"),
    };
    GridSpec { defaults, vector_a }
}

/// Rejects grids that cannot be run at all; points outside a command's
/// domain are skipped later instead.
pub(crate) fn check_domain(command: &str, points: &[Point]) -> std::result::Result<(), String> {
    for p in points {
        let needs_n = !matches!(command, "verify-lemma42");
        if needs_n && p.n < 1 {
            return Err(format!("{command} needs n >= 1"));
        }
        if matches!(command, "verify-vanishing" | "verify-extra") && p.k <= p.b + 1 {
            return Err(format!("{command} needs k > b + 1 (b={}, k={})", p.b, p.k));
        }
    }
    Ok(())
}

fn skip_reason(command: &str, p: &Point) -> Option<String> {
    match command {
        "verify-hk" | "verify-expansion" | "bench" => {
            if p.m > p.n || p.l > p.n {
                Some("needs m, l <= n".into())
            } else if p.m >= 1 && p.a == 0 {
                Some("needs a >= 1 when m >= 1".into())
            } else {
                None
            }
        }
        "verify-vanishing" | "verify-extra" if p.m >= p.n || p.l >= p.n => {
            Some("needs m, l < n".into())
        }
        "verify-prop52" if p.b >= p.k => Some("needs b < k".into()),
        _ => None,
    }
}

fn params_json(command: &str, p: &Point) -> Value {
    match command {
        "verify-dyson" | "verify-qdyson" => json!({ "n": p.n, "a": p.avec }),
        "verify-prop52" => json!({ "n": p.n, "b": p.b, "k": p.k }),
        "verify-lemma42" => json!({ "s": p.n, "b": p.b, "k": p.k }),
        "verify-vanishing" | "verify-extra" => {
            json!({ "n": p.n, "b": p.b, "m": p.m, "l": p.l, "k": p.k })
        }
        _ => json!({ "n": p.n, "a": p.a, "b": p.b, "m": p.m, "l": p.l, "k": p.k }),
    }
}

/// Left and right sides of one check, plus an optional certificate path.
struct Sides {
    lhs: String,
    rhs: String,
    certificate: Option<String>,
}

fn sides(lhs: impl Display, rhs: impl Display) -> Sides {
    Sides {
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        certificate: None,
    }
}

fn list(items: &[String]) -> String {
    format!("[{}]", items.join(", "))
}

pub(crate) fn check(command: &str, p: &Point, ctx: &Context) -> VerifyReport {
    let start = Instant::now();
    let mut report = VerifyReport {
        command: command.to_string(),
        params: params_json(command, p),
        status: Status::Skipped,
        lhs: None,
        rhs: None,
        certificate: None,
        elapsed_ms: 0,
        message: skip_reason(command, p),
    };
    if report.message.is_some() {
        return report;
    }
    match compute(command, p, ctx) {
        Ok(s) => {
            report.status = if s.lhs == s.rhs {
                Status::Pass
            } else {
                Status::Fail
            };
            report.lhs = Some(s.lhs);
            report.rhs = Some(s.rhs);
            report.certificate = s.certificate;
        }
        Err(e) => {
            report.status = Status::Error;
            report.message = Some(e.to_string());
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    report
}

fn param_set(p: &Point) -> Result<ParamSet> {
    ParamSet::new(p.n as usize, p.a, p.b, p.m as usize, p.l as usize, p.k)
}

fn compute(command: &str, p: &Point, ctx: &Context) -> Result<Sides> {
    match command {
        "verify-dyson" => Ok(sides(
            ct_direct_at_one(&build_qdyson_kernel(&p.avec)?)?,
            dyson_rhs(&p.avec)?,
        )),
        "verify-qdyson" => Ok(sides(
            ct_direct(&build_qdyson_kernel(&p.avec)?)?,
            qdyson_rhs(&p.avec)?,
        )),
        "verify-hk" | "bench" => {
            let ps = param_set(p)?;
            let f = build_hk_kernel(ps.n, ps.a, ps.b, ps.m, ps.l, ps.k)?;
            Ok(sides(ct_direct(&f)?, morris_rhs(&ps)?))
        }
        "verify-expansion" => {
            let ps = param_set(p)?;
            let f = build_hk_kernel(ps.n, ps.a, ps.b, ps.m, ps.l, ps.k)?;
            Ok(sides(ct_direct(&f)?, aomoto_rhs(&ps)?))
        }
        "verify-prop52" => Ok(sides(
            prop52_lhs(p.n, p.b, p.k)?,
            prop52_rhs(p.n, p.b, p.k)?,
        )),
        "verify-vanishing" => vanishing(p, ctx),
        "verify-extra" => extra(p, ctx),
        "verify-lemma42" => Ok(classifier_check(p.n as usize, p.k, p.b)),
        other => unreachable!("unknown command {other}"),
    }
}

/// Validates each certificate and, with `--cert-dir`, writes them as one
/// JSON array per grid point.
fn store_certificates(
    p: &Point,
    ctx: &Context,
    tag: &str,
    certs: &[&RecursionCertificate],
) -> Result<Option<String>> {
    for c in certs {
        c.validate()?;
    }
    let Some(dir) = &ctx.cert_dir else {
        return Ok(None);
    };
    let path = dir.join(format!(
        "{tag}-n{}-b{}-m{}-l{}-k{}.json",
        p.n, p.b, p.m, p.l, p.k
    ));
    let body = serde_json::to_string_pretty(certs).expect("certificates serialize");
    std::fs::write(&path, body)
        .map_err(|e| crate::Error::InvalidCertificate(format!("{}: {e}", path.display())))?;
    Ok(Some(path.display().to_string()))
}

/// Every root value, from interpolation at each `q0` and from the
/// recursion, plus the interpolated degree, against zeros and `d`.
fn vanishing(p: &Point, ctx: &Context) -> Result<Sides> {
    let ps = param_set(p)?;
    let sets = vanishing_sets(&ps)?;
    let d = ps.degree_bound();
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    lhs.push(format!("roots={} distinct={}", sets.len(), sets.distinct()));
    rhs.push(format!("roots={d} distinct=true"));
    for q0 in &ctx.q0s {
        let poly = interp_in_qa(&ps.with_q0(q0.clone()))?;
        let deg = poly.degree().map_or("zero".to_string(), |x| x.to_string());
        lhs.push(format!("deg@{q0}={deg}"));
        rhs.push(format!("deg@{q0}={d}"));
        for h in sets.all() {
            lhs.push(format!("h={h}@{q0}: {}", poly.eval_at_a(-h)));
            rhs.push(format!("h={h}@{q0}: 0"));
        }
    }
    let mut certs = Vec::new();
    for h in sets.all() {
        let (value, cert) = ct_recursion(&ps, h)?;
        lhs.push(format!("h={h}: {value}"));
        rhs.push(format!("h={h}: 0"));
        certs.push(cert);
    }
    let certificate = store_certificates(p, ctx, "vanishing", &certs.iter().collect::<Vec<_>>())?;
    Ok(Sides {
        lhs: list(&lhs),
        rhs: list(&rhs),
        certificate,
    })
}

/// The recursion total and the interpolated value at each `q0`, against
/// the closed form at `a = -h`.
fn extra(p: &Point, ctx: &Context) -> Result<Sides> {
    let ps = param_set(p)?;
    let h = ps.extra_point();
    let closed = morris_rhs(&ps.with_a(-h))?;
    let (value, cert) = ct_recursion(&ps, h)?;
    let (mut lhs, mut rhs) = (
        vec![format!("h={h}: {value}")],
        vec![format!("h={h}: {closed}")],
    );
    lhs.push(format!("expanded leaves: {}", cert.expanded_leaves().len()));
    rhs.push("expanded leaves: 1".to_string());
    for q0 in &ctx.q0s {
        let poly = interp_in_qa(&ps.with_q0(q0.clone()))?;
        lhs.push(format!("@{q0}: {}", poly.eval_at_a(-h)));
        rhs.push(format!("@{q0}: {}", closed.eval(q0)?));
    }
    let certificate = store_certificates(p, ctx, "extra", &[&cert])?;
    Ok(Sides {
        lhs: list(&lhs),
        rhs: list(&rhs),
        certificate,
    })
}

/// Direct search for the first `t_i <= b`, then the first pair with
/// `1 - k <= t_j - t_i <= k`.
fn brute_force_verdict(k: i64, b: i64, t: &[i64]) -> Lemma42Verdict {
    if let Some(i) = t.iter().position(|&x| x <= b) {
        return Lemma42Verdict::EarlySmall(i + 1);
    }
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if (1 - k..=k).contains(&(t[j] - t[i])) {
                return Lemma42Verdict::ClosePair(i + 1, j + 1);
            }
        }
    }
    Lemma42Verdict::Exceptional
}

/// Classifier against brute force on every tuple in `[0, (s-1)k+b+1]^s`.
fn classifier_check(s: usize, k: i64, b: i64) -> Sides {
    let top = (s as i64 - 1).max(0) * k + b + 1;
    let mut t = vec![0i64; s];
    let (mut mismatches, mut exceptional) = (0usize, Vec::new());
    loop {
        let want = brute_force_verdict(k, b, &t);
        match lemma_important(k, b, s, &t) {
            Ok(v) if v == want => {
                if v == Lemma42Verdict::Exceptional {
                    exceptional.push(t.clone());
                }
            }
            _ => mismatches += 1,
        }
        let Some(i) = t.iter().position(|&x| x < top) else {
            break;
        };
        t[i] += 1;
        t[..i].iter_mut().for_each(|x| *x = 0);
    }
    let shape: Vec<i64> = (1..=s as i64).map(|i| (s as i64 - i) * k + b + 1).collect();
    sides(
        format!("mismatches={mismatches} exceptional={exceptional:?}"),
        format!("mismatches=0 exceptional={:?}", vec![shape]),
    )
}

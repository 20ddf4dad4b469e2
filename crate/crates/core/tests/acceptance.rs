//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons
//! only. Run a subset with `cargo test --test acceptance -- 3 7`.

mod common;

use std::sync::OnceLock;
use std::time::Instant;

use num_rational::BigRational;
use qmorris_core::closed_forms::{
    dyson_rhs, morris_rhs, morris_rhs_factorial, prop52_lhs, prop52_rhs, qbinomial_theorem_finite,
    qdyson_rhs, vanishing_sets, ParamSet,
};
use qmorris_core::ct_engine::{
    aomoto_expansion_check, ct_direct, ct_direct_at_one, ct_iterated_pf, ct_recursion, ct_samples,
    interp_from_samples, lemma_important, pf_ct_step, InterpolatedPoly, Lemma42Verdict,
    RecursionCertificate, Verdict,
};
use qmorris_core::kernels::{build_hk_kernel, build_qdyson_kernel, AtomicFactor, FactorProduct};
use qmorris_core::{ExponentVector, QRat};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{random_ratio_factor, rat, series_ct};

type Criterion = (u32, &'static str, fn() -> Outcome);
type RecursionResult = Result<(QRat, RecursionCertificate), String>;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn from_failures(checked: usize, failures: Vec<String>) -> Outcome {
        if failures.is_empty() {
            Outcome {
                pass: true,
                detail: format!("{checked} cases"),
            }
        } else {
            let shown: Vec<_> = failures.iter().take(3).cloned().collect();
            Outcome {
                pass: false,
                detail: format!(
                    "{}/{checked} failed, e.g. {}",
                    failures.len(),
                    shown.join("; ")
                ),
            }
        }
    }
}

/// Nonnegative integer vectors of length `len` with sum at most `max_sum`.
fn bounded_vectors(len: usize, max_sum: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                let used: i64 = v.iter().sum();
                (0..=max_sum - used).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=3 {
        for a in bounded_vectors(n + 1, 6) {
            checked += 1;
            let lhs = ct_direct(&build_qdyson_kernel(&a).unwrap()).unwrap();
            if lhs != qdyson_rhs(&a).unwrap() {
                failures.push(format!("a={a:?}"));
            }
        }
    }
    Outcome::from_failures(checked, failures)
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=4 {
        for a in bounded_vectors(n + 1, 8) {
            checked += 1;
            let lhs = ct_direct_at_one(&build_qdyson_kernel(&a).unwrap()).unwrap();
            if lhs != BigRational::from_integer(dyson_rhs(&a).unwrap()) {
                failures.push(format!("a={a:?}"));
            }
        }
    }
    Outcome::from_failures(checked, failures)
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=3usize {
        for m in 0..n {
            for l in 0..n {
                for a in (m > 0) as i64..=3 {
                    for b in 0..=2 {
                        for k in 0..=3 {
                            checked += 1;
                            let p = ParamSet::new(n, a, b, m, l, k).unwrap();
                            let lhs =
                                ct_direct(&build_hk_kernel(n, a, b, m, l, k).unwrap()).unwrap();
                            let rhs = morris_rhs(&p).unwrap();
                            if lhs != rhs || rhs != morris_rhs_factorial(&p).unwrap() {
                                failures.push(p.to_string());
                            }
                        }
                    }
                }
            }
        }
    }
    Outcome::from_failures(checked, failures)
}

/// Everything criteria 4-6 need at one `(n, b, m, l)` with `k = b + 2`.
struct GridPoint {
    p: ParamSet,
    polys: Vec<InterpolatedPoly>,
    /// `(h, value, certificate)` for every root and the extra point.
    recursions: Vec<(i64, RecursionResult)>,
}

fn q0_values() -> [BigRational; 2] {
    [rat(3, 2), rat(5, 2)]
}

fn vanishing_grid() -> &'static [GridPoint] {
    static GRID: OnceLock<Vec<GridPoint>> = OnceLock::new();
    GRID.get_or_init(|| {
        let mut out = Vec::new();
        for n in 2..=3usize {
            for b in 0..=1 {
                for m in 0..n {
                    for l in 0..n {
                        let p = ParamSet::new(n, 0, b, m, l, b + 2).unwrap();
                        let samples = ct_samples(&p).unwrap();
                        let polys = q0_values()
                            .iter()
                            .map(|q0| interp_from_samples(&p, q0, &samples).unwrap())
                            .collect();
                        let mut hs = vanishing_sets(&p).unwrap().all();
                        hs.push(p.extra_point());
                        let recursions = hs
                            .into_iter()
                            .map(|h| (h, ct_recursion(&p, h).map_err(|e| e.to_string())))
                            .collect();
                        out.push(GridPoint {
                            p,
                            polys,
                            recursions,
                        });
                    }
                }
            }
        }
        out
    })
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for g in vanishing_grid() {
        let sets = vanishing_sets(&g.p).unwrap();
        let d = g.p.degree_bound();
        for poly in &g.polys {
            checked += 1;
            let roots_ok = sets
                .all()
                .iter()
                .all(|&h| poly.eval_at_a(-h) == BigRational::from_integer(0.into()));
            // a nonzero polynomial of degree d has at most d roots, so the
            // d distinct roots above are all of them
            if !roots_ok || !sets.distinct() || sets.len() != d || poly.degree() != Some(d) {
                failures.push(format!("{} q0={}", g.p, poly.q0));
            }
        }
    }
    Outcome::from_failures(checked, failures)
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for g in vanishing_grid() {
        let h = g.p.extra_point();
        let closed = morris_rhs(&g.p.with_a(-h)).unwrap();
        for poly in &g.polys {
            checked += 1;
            if poly.eval_at_a(-h) != closed.eval(&poly.q0).unwrap() {
                failures.push(format!("{} q0={}", g.p, poly.q0));
            }
        }
    }
    Outcome::from_failures(checked, failures)
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut leaves = 0;
    for g in vanishing_grid() {
        let extra = g.p.extra_point();
        let s = g.p.n - g.p.l;
        for (h, res) in &g.recursions {
            checked += 1;
            let tag = format!("{} h={h}", g.p);
            let (value, cert) = match res {
                Ok(x) => x,
                Err(e) => {
                    failures.push(format!("{tag}: {e}"));
                    continue;
                }
            };
            leaves += cert.leaves().len();
            if let Err(e) = cert.validate() {
                failures.push(format!("{tag}: {e}"));
                continue;
            }
            if g.polys
                .iter()
                .any(|poly| value.eval(&poly.q0).unwrap() != poly.eval_at_a(-h))
            {
                failures.push(format!("{tag}: recursion and interpolation differ"));
            }
            let expanded = cert.expanded_leaves();
            let witnesses_ok = cert.leaves().iter().all(|n| match &n.verdict {
                Verdict::ZeroByFactor { witness } => {
                    *witness == AtomicFactor::new(0, ExponentVector::zeros(g.p.n + 1))
                }
                _ => true,
            });
            let shape_ok = if *h == extra {
                expanded.len() == 1
                    && expanded[0].r == (1..=s).collect::<Vec<_>>()
                    && expanded[0].k
                        == (1..=s)
                            .map(|i| (s - i) as i64 * g.p.k + g.p.b + 1)
                            .collect::<Vec<_>>()
            } else {
                expanded.is_empty()
            };
            if !witnesses_ok || !shape_ok {
                failures.push(format!("{tag}: unexpected certificate shape"));
            }
        }
    }
    let mut o = Outcome::from_failures(checked, failures);
    o.detail = format!("{}, {leaves} leaves re-validated", o.detail);
    o
}

fn brute_force_classifier(k: i64, b: i64, t: &[i64]) -> Lemma42Verdict {
    if let Some(i) = (0..t.len()).find(|&i| t[i] <= b) {
        return Lemma42Verdict::EarlySmall(i + 1);
    }
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if 1 - k <= t[j] - t[i] && t[j] - t[i] <= k {
                return Lemma42Verdict::ClosePair(i + 1, j + 1);
            }
        }
    }
    Lemma42Verdict::Exceptional
}

fn criterion_7() -> Outcome {
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for s in 1..=5usize {
        for k in 0..=4i64 {
            for b in 0..=2i64 {
                let top = (s as i64 - 1) * k + b + 1;
                let mut t = vec![0i64; s];
                let mut exceptional = Vec::new();
                loop {
                    checked += 1;
                    let want = brute_force_classifier(k, b, &t);
                    match lemma_important(k, b, s, &t) {
                        Ok(v) if v == want => {
                            if v == Lemma42Verdict::Exceptional {
                                exceptional.push(t.clone());
                            }
                        }
                        other => {
                            failures.push(format!("s={s} k={k} b={b} {t:?}: {other:?} vs {want:?}"))
                        }
                    }
                    // odometer over [0, top]^s
                    let mut i = 0;
                    while i < s && t[i] == top {
                        t[i] = 0;
                        i += 1;
                    }
                    if i == s {
                        break;
                    }
                    t[i] += 1;
                }
                let shape: Vec<i64> = (1..=s as i64).map(|i| (s as i64 - i) * k + b + 1).collect();
                if exceptional != vec![shape] {
                    failures.push(format!(
                        "s={s} k={k} b={b}: exceptional tuples {exceptional:?}"
                    ));
                }
            }
        }
    }
    Outcome::from_failures(checked, failures)
}

fn random_kernel(rng: &mut StdRng, cancelling: bool) -> FactorProduct {
    loop {
        let nvars = rng.gen_range(2..=3);
        let den: Vec<AtomicFactor> = (0..rng.gen_range(1..=3))
            .map(|_| random_ratio_factor(rng, nvars))
            .collect();
        let mut num: Vec<AtomicFactor> = (0..rng.gen_range(0..=3))
            .map(|_| random_ratio_factor(rng, nvars))
            .collect();
        if cancelling {
            num.extend(den.iter().copied());
        }
        let mut f = FactorProduct::from_factors(nvars, num, den).unwrap();
        let pm: Vec<i64> = (0..nvars).map(|_| rng.gen_range(-1..=1)).collect();
        f.premono = ExponentVector::new(&pm).unwrap();
        f.qshift = rng.gen_range(-2..=2);
        // proper in x0 and inside the class handled by the residue step
        if f.degree_in(0) < 0 && ct_iterated_pf(&f).is_ok() {
            return f;
        }
    }
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0008);
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut nonzero = 0;
    for i in 0..50 {
        let f = random_kernel(&mut rng, false);
        checked += 1;
        let pf = ct_iterated_pf(&f).unwrap();
        nonzero += !pf.is_zero() as usize;
        if pf != series_ct(&f) {
            failures.push(format!("rational kernel #{i}: {f}"));
        }
    }
    for i in 0..50 {
        let f = random_kernel(&mut rng, true);
        checked += 1;
        let pf = ct_iterated_pf(&f).unwrap();
        if pf != ct_direct(&f).unwrap() || pf != series_ct(&f) {
            failures.push(format!("cancelling kernel #{i}: {f}"));
        }
    }
    let nvars = 4;
    for i in 0..nvars {
        for j in (0..nvars).filter(|&j| j != i) {
            for s in -3..=3 {
                checked += 1;
                let d = AtomicFactor::new(s, ExponentVector::ratio(nvars, i, j));
                let f = FactorProduct::from_factors(nvars, vec![], vec![d]).unwrap();
                let value = pf_ct_step(&f, i)
                    .unwrap()
                    .iter()
                    .fold(QRat::zero(), |acc, t| {
                        &acc + &QRat::from(t.expand().unwrap().ct_all())
                    });
                let want = if i < j { QRat::one() } else { QRat::zero() };
                if value != want || series_ct(&f) != want {
                    failures.push(format!("CT_x{i} 1/({d})"));
                }
            }
        }
    }
    let mut o = Outcome::from_failures(checked, failures);
    o.detail = format!(
        "{}, {nonzero}/50 rational kernels with nonzero CT",
        o.detail
    );
    o
}

fn criterion_9() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=4 {
        for k in 1..=6 {
            for b in 0..k {
                checked += 1;
                if prop52_lhs(n, b, k).unwrap() != prop52_rhs(n, b, k).unwrap() {
                    failures.push(format!("n={n} b={b} k={k}"));
                }
            }
        }
    }
    Outcome::from_failures(checked, failures)
}

fn criterion_10() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=2usize {
        for a in 1..=2 {
            for b in 0..=1 {
                for m in 0..=1 {
                    for l in 0..=1 {
                        for k in 1..=2 {
                            checked += 1;
                            let p = ParamSet::new(n, a, b, m, l, k).unwrap();
                            if !aomoto_expansion_check(&p).unwrap() {
                                failures.push(p.to_string());
                            }
                        }
                    }
                }
            }
        }
    }
    Outcome::from_failures(checked, failures)
}

fn criterion_11() -> Outcome {
    let n = 2;
    let mut checked = 0;
    let mut failures = Vec::new();
    for a in 1..=3 {
        for b in 0..=1 {
            for l in 0..=1 {
                for k in 0..=2 {
                    checked += 1;
                    let tag = format!("a={a} b={b} l={l} k={k}");
                    let full = build_hk_kernel(n, a, b, n, l, k).unwrap();
                    let reduced = build_hk_kernel(n, a - 1, b + 1, 0, l, k).unwrap();
                    // A_q(x0 q, ...; a-1, b+1, 0, l, k)
                    let shifted = reduced.substitute(0, 0, 1).unwrap();
                    if full.clone().canonical() != shifted.canonical() {
                        failures.push(format!("{tag}: kernels differ"));
                    }
                    let ct_full = ct_direct(&full).unwrap();
                    let m_reduced =
                        morris_rhs(&ParamSet::new(n, a - 1, b + 1, 0, l, k).unwrap()).unwrap();
                    if ct_full != ct_direct(&reduced).unwrap() || ct_full != m_reduced {
                        failures.push(format!("{tag}: constant terms differ"));
                    }
                    let m_full = morris_rhs(&ParamSet::new(n, a, b, n, l, k).unwrap()).unwrap();
                    if m_full != m_reduced {
                        failures.push(format!("{tag}: closed forms differ"));
                    }
                }
            }
        }
    }
    for big_n in 0..=8 {
        checked += 1;
        if !qbinomial_theorem_finite(big_n) {
            failures.push(format!("q-binomial N={big_n}"));
        }
    }
    Outcome::from_failures(checked, failures)
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "q-Dyson constant term", criterion_1),
        (2, "Dyson constant term at q=1", criterion_2),
        (3, "Habsieger-Kadell identity", criterion_3),
        (4, "vanishing lemma by interpolation", criterion_4),
        (5, "extra point value", criterion_5),
        (6, "recursion agrees with interpolation", criterion_6),
        (7, "tuple classifier exhaustive", criterion_7),
        (8, "partial-fraction step vs oracles", criterion_8),
        (9, "finite summation identity", criterion_9),
        (10, "Aomoto-style expansion", criterion_10),
        (11, "reductions and finite q-binomial theorem", criterion_11),
    ];
    let wanted: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (id, name, run) in criteria {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!(
                "panicked: {}",
                e.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default()
            ),
        });
        println!(
            "criterion {id:>2} [{}] {name}: {} ({:.1}s)",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
        failed += !outcome.pass as usize;
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

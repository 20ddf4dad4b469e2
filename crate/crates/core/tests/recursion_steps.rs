//! Structural checks of the chain recursion against independent
//! evaluations.

mod common;

use num_rational::BigRational;
use qmorris_core::closed_forms::{morris_rhs, vanishing_sets, ParamSet};
use qmorris_core::ct_engine::{ct_recursion, pf_ct_step};
use qmorris_core::kernels::{build_q, build_q_chain, ChainState, FactorProduct, QParams};
use qmorris_core::Error;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::rat;

/// Sum of exact evaluations; `None` if the point hits a pole.
fn eval_sum(terms: &[FactorProduct], q0: &BigRational, xs: &[BigRational]) -> Option<BigRational> {
    let mut acc = rat(0, 1);
    for t in terms {
        match t.eval(q0, xs) {
            Ok(v) => acc += v,
            Err(Error::DivisionByZero) => return None,
            Err(e) => panic!("{e}"),
        }
    }
    Some(acc)
}

#[test]
fn x0_residues_match_chain_terms() {
    let mut rng = StdRng::seed_from_u64(11);
    let mut checked = 0;
    for n in 1..=3usize {
        for m in 0..n {
            for l in 0..n {
                for b in 0..=1 {
                    for k in 0..=3 {
                        for h in 0..=3 {
                            if n as i64 * h + m as i64 == 0 {
                                continue;
                            }
                            let p = QParams { n, b, m, l, k };
                            let residues = pf_ct_step(&build_q(h, &p).unwrap(), 0).unwrap();
                            let chains: Vec<FactorProduct> = (1..=n)
                                .flat_map(|r| (0..=h).map(move |k1| (r, k1)))
                                .map(|(r, k1)| {
                                    build_q_chain(
                                        &ChainState::new(vec![r], vec![k1], h, p).unwrap(),
                                    )
                                    .unwrap()
                                })
                                .collect();
                            let q0 = rat(rng.gen_range(2..9), rng.gen_range(1..4) * 2 + 1);
                            let xs: Vec<BigRational> = (0..=n)
                                .map(|_| rat(rng.gen_range(-40..40), rng.gen_range(1..7)))
                                .collect();
                            if let (Some(lhs), Some(rhs)) =
                                (eval_sum(&residues, &q0, &xs), eval_sum(&chains, &q0, &xs))
                            {
                                assert_eq!(lhs, rhs, "n={n} m={m} l={l} b={b} k={k} h={h}");
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 300, "only {checked} points evaluated");
}

#[test]
fn recursion_matches_closed_form_symbolically() {
    for n in 1..=3usize {
        for b in 0..=1 {
            for k in b + 2..=b + 3 {
                for m in 0..n {
                    for l in 0..n {
                        let p = ParamSet::new(n, 0, b, m, l, k).unwrap();
                        let mut hs = vanishing_sets(&p).unwrap().all();
                        hs.push(p.extra_point());
                        for h in hs {
                            let (value, cert) = ct_recursion(&p, h).unwrap();
                            cert.validate().unwrap();
                            assert_eq!(value, cert.value());
                            assert_eq!(value, morris_rhs(&p.with_a(-h)).unwrap(), "{p} h={h}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn recursion_rejects_points_outside_its_domain() {
    let p = ParamSet::new(2, 0, 0, 1, 0, 2).unwrap();
    // 1 is neither a root nor the extra point
    assert!(ct_recursion(&p, 5).is_err());
    let small_k = ParamSet::new(2, 0, 1, 1, 0, 2).unwrap();
    assert!(ct_recursion(&small_k, 0).is_err());
    let reduced = ParamSet::new(2, 1, 0, 2, 0, 3).unwrap();
    assert!(ct_recursion(&reduced, 0).is_err());
}

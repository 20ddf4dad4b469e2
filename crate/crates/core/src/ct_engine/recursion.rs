use rayon::prelude::*;
use serde::Serialize;

use super::direct::ct_direct;
use crate::arith::QRat;
use crate::closed_forms::{vanishing_sets, ParamSet};
use crate::error::{Error, Result};
use crate::kernels::{build_q_chain, AtomicFactor, ChainState, QParams};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// The term carries the factor `1 - 1`.
    ZeroByFactor { witness: AtomicFactor },
    /// Every denominator cancelled; `value` is the constant term.
    Expanded { value: QRat },
    /// `CT` in the chain's last variable, one child per small pole.
    Branch { children: Vec<CertNode> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertNode {
    pub r: Vec<usize>,
    pub k: Vec<i64>,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl CertNode {
    fn visit<'a>(&'a self, out: &mut Vec<&'a CertNode>) {
        out.push(self);
        if let Verdict::Branch { children } = &self.verdict {
            for c in children {
                c.visit(out);
            }
        }
    }
}

/// Proof tree for `CT Q(h)`: the root is the empty chain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecursionCertificate {
    pub params: QParams,
    pub h: i64,
    pub root: CertNode,
}

impl RecursionCertificate {
    pub fn nodes(&self) -> Vec<&CertNode> {
        let mut out = Vec::new();
        self.root.visit(&mut out);
        out
    }

    pub fn leaves(&self) -> Vec<&CertNode> {
        self.nodes()
            .into_iter()
            .filter(|n| !matches!(n.verdict, Verdict::Branch { .. }))
            .collect()
    }

    pub fn expanded_leaves(&self) -> Vec<&CertNode> {
        self.nodes()
            .into_iter()
            .filter(|n| matches!(n.verdict, Verdict::Expanded { .. }))
            .collect()
    }

    /// Sum of the values at the expanded leaves.
    pub fn value(&self) -> QRat {
        self.nodes()
            .iter()
            .fold(QRat::zero(), |acc, n| match &n.verdict {
                Verdict::Expanded { value } => &acc + value,
                _ => acc,
            })
    }

    /// Rebuild every node from its chain and re-check its verdict.
    pub fn validate(&self) -> Result<()> {
        self.validate_node(&self.root, None)
    }

    fn validate_node(&self, node: &CertNode, parent: Option<&CertNode>) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidCertificate(msg));
        if let Some(p) = parent {
            let s = p.r.len();
            if node.r.len() != s + 1 || node.r[..s] != p.r[..] || node.k[..s] != p.k[..] {
                return bad(format!(
                    "child {:?};{:?} does not extend its parent",
                    node.r, node.k
                ));
            }
        } else if !node.r.is_empty() {
            return bad("root chain is not empty".into());
        }
        let chain = ChainState::new(node.r.clone(), node.k.clone(), self.h, self.params)?;
        let f = build_q_chain(&chain)?;
        match &node.verdict {
            Verdict::ZeroByFactor { witness } => {
                if !witness.is_zero_factor() || !f.num.contains(witness) {
                    return bad(format!(
                        "{chain}: witness {witness} is not a zero factor of the term"
                    ));
                }
            }
            Verdict::Expanded { value } => {
                if ct_direct(&f)? != *value {
                    return bad(format!("{chain}: stored value does not match"));
                }
            }
            Verdict::Branch { children } => {
                for c in children {
                    self.validate_node(c, Some(node))?;
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

fn chi(b: bool) -> i64 {
    b as i64
}

/// `CT_x Q(h)` by the chain recursion. Requires `k > b + 1`, `m, l < n`
/// and `h` a root of the vanishing lemma or the extra point.
pub fn ct_recursion(p: &ParamSet, h: i64) -> Result<(QRat, RecursionCertificate)> {
    p.require_reduced()?;
    if p.k <= p.b + 1 {
        return Err(Error::ParameterOutOfRange(format!(
            "recursion needs k > b + 1 (k={}, b={})",
            p.k, p.b
        )));
    }
    if h != p.extra_point() && !vanishing_sets(p)?.all().contains(&h) {
        return Err(Error::ParameterOutOfRange(format!(
            "h = {h} is neither a root nor the extra point for {p}"
        )));
    }
    let cert = RecursionCertificate {
        params: p.q_params(),
        h,
        root: expand_node(&ChainState::root(h, p.q_params()))?,
    };
    Ok((cert.value(), cert))
}

fn expand_node(chain: &ChainState) -> Result<CertNode> {
    let f = build_q_chain(chain)?;
    let node = |verdict| CertNode {
        r: chain.r.clone(),
        k: chain.k.clone(),
        verdict,
    };
    if let Some(witness) = f.detect_zero() {
        return Ok(node(Verdict::ZeroByFactor { witness }));
    }
    let p = &chain.params;
    let s = chain.len();
    let hub = chain.hub();
    let may_branch = s == 0 || {
        let bound = (s as i64 - 1) * p.k + p.b + chi(s + p.l > p.n);
        p.n > s && chain.k.iter().any(|&ki| ki > bound)
    };
    if may_branch {
        let degree = f.degree_in(hub);
        if degree < 0 {
            let children: Vec<ChainState> = (hub + 1..=p.n)
                .flat_map(|r| (0..=chain.h).map(move |k| (r, k)))
                .filter(|&(r, k)| k > 0 || r <= p.m)
                .map(|(r, k)| chain.extend(r, k))
                .collect();
            let children = if s == 0 {
                children
                    .par_iter()
                    .map(expand_node)
                    .collect::<Result<Vec<_>>>()?
            } else {
                children
                    .iter()
                    .map(expand_node)
                    .collect::<Result<Vec<_>>>()?
            };
            return Ok(node(Verdict::Branch { children }));
        }
        if !chain.is_exceptional() {
            return Err(Error::ImproperBranch(format!(
                "{chain} (degree {degree} in x{hub})"
            )));
        }
    }
    if chain.is_exceptional() {
        let value = ct_direct(&f)?;
        return Ok(node(Verdict::Expanded { value }));
    }
    Err(Error::ImproperBranch(chain.to_string()))
}

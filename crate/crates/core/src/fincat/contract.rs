use std::sync::Arc;

use serde::Serialize;

use super::fibers::{left_fiber, right_fiber, strict_fiber, strict_to_right};
use super::homology::Coefficients;
use super::morse::category_homology;
use super::ops::skeleton;
use super::pi1::{pi1_presentation, tietze_simplify};
use super::{FinCat, FinFunctor};
use crate::error::Result;
use crate::guards::Guards;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "snake_case")]
pub enum Verdict {
    Contractible,
    NotContractible(String),
    Inconclusive(String),
}

impl Verdict {
    pub fn is_contractible(&self) -> bool {
        matches!(self, Verdict::Contractible)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::NotContractible(_))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub depth: usize,
    pub method: String,
}

impl Certificate {
    fn new(verdict: Verdict, depth: usize, method: impl Into<String>) -> Self {
        Certificate {
            verdict,
            depth,
            method: method.into(),
        }
    }
}

/// Depth-bounded contractibility test for the nerve: a cone point settles
/// it outright; otherwise connectivity, vanishing of H̃_k(−; Z) for
/// 1 ≤ k < depth, and a Tietze-trivial fundamental group.
pub fn is_weakly_contractible(c: &Arc<FinCat>, depth: usize, guards: &Guards) -> Result<Certificate> {
    if c.num_objects() == 0 {
        return Ok(Certificate::new(Verdict::NotContractible("empty category".into()), depth, "empty"));
    }
    if let Some(t) = c.terminal_object() {
        return Ok(Certificate::new(Verdict::Contractible, depth, format!("terminal object {}", c.obj_label(t))));
    }
    if let Some(t) = c.initial_object() {
        return Ok(Certificate::new(Verdict::Contractible, depth, format!("initial object {}", c.obj_label(t))));
    }
    let (ncomp, _) = c.components();
    if ncomp > 1 {
        return Ok(Certificate::new(
            Verdict::NotContractible(format!("β₀ = {ncomp}")),
            depth,
            "components",
        ));
    }
    let sk = skeleton(c);
    if sk.cat.terminal_object().is_some() || sk.cat.initial_object().is_some() {
        return Ok(Certificate::new(Verdict::Contractible, depth, "cone point in skeleton"));
    }
    if depth >= 2 {
        let h = category_homology(c, depth, Coefficients::Integers, guards)?;
        for k in 1..h.betti.len() {
            if h.betti[k] != 0 || !h.torsion[k].is_empty() {
                return Ok(Certificate::new(
                    Verdict::NotContractible(format!("H_{k} = {}", h.group_string(k))),
                    depth,
                    "homology",
                ));
            }
        }
    }
    let p = pi1_presentation(&sk.cat, 0)?;
    let t = tietze_simplify(&p, guards.tietze_budget as u64);
    if t.is_trivial() {
        return Ok(Certificate::new(Verdict::Contractible, depth, format!("homology + π₁ ({} Tietze steps)", t.steps)));
    }
    let ab = t.presentation.abelianization();
    if !ab.is_trivial() {
        return Ok(Certificate::new(
            Verdict::NotContractible(format!("π₁ abelianizes to {ab}")),
            depth,
            "π₁",
        ));
    }
    let why = if t.exhausted { "Tietze budget exhausted" } else { "perfect π₁ presentation did not simplify" };
    Ok(Certificate::new(
        Verdict::Inconclusive(format!(
            "{why}: {} generators, {} relators left",
            t.presentation.generators.len(),
            t.presentation.relators.len()
        )),
        depth,
        "π₁",
    ))
}

/// Outcome of a fiberwise test: `holds` is `None` when some fiber was
/// inconclusive and none was refuted.
#[derive(Clone, Debug, Serialize)]
pub struct FunctorVerdict {
    pub holds: Option<bool>,
    pub depth: usize,
    pub fibers: Vec<(String, Certificate)>,
}

impl FunctorVerdict {
    fn from_fibers(depth: usize, fibers: Vec<(String, Certificate)>) -> Self {
        let holds = if fibers.iter().any(|f| f.1.verdict.is_refuted()) {
            Some(false)
        } else if fibers.iter().all(|f| f.1.verdict.is_contractible()) {
            Some(true)
        } else {
            None
        };
        FunctorVerdict { holds, depth, fibers }
    }

    pub fn holds(&self) -> bool {
        self.holds == Some(true)
    }

    pub fn first_failure(&self) -> Option<&(String, Certificate)> {
        self.fibers.iter().find(|f| !f.1.verdict.is_contractible())
    }
}

/// Every left fiber C_{/d} is weakly contractible up to `depth`.
pub fn is_lim_equivalence(f: &FinFunctor, depth: usize, guards: &Guards) -> Result<FunctorVerdict> {
    let mut out = Vec::new();
    for d in f.target().objects() {
        let fib = left_fiber(f, d);
        let cert = is_weakly_contractible(&fib.cat, depth, guards)?;
        let stop = cert.verdict.is_refuted();
        out.push((f.target().obj_label(d).to_string(), cert));
        if stop {
            break;
        }
    }
    Ok(FunctorVerdict::from_fibers(depth, out))
}

/// Every right fiber C_{d/} is weakly contractible up to `depth`.
pub fn is_colim_equivalence(f: &FinFunctor, depth: usize, guards: &Guards) -> Result<FunctorVerdict> {
    let mut out = Vec::new();
    for d in f.target().objects() {
        let fib = right_fiber(f, d);
        let cert = is_weakly_contractible(&fib.cat, depth, guards)?;
        let stop = cert.verdict.is_refuted();
        out.push((f.target().obj_label(d).to_string(), cert));
        if stop {
            break;
        }
    }
    Ok(FunctorVerdict::from_fibers(depth, out))
}

/// For every d, the inclusion C_d → C_{d/} is a lim-equivalence.
pub fn is_proper(f: &FinFunctor, depth: usize, guards: &Guards) -> Result<FunctorVerdict> {
    let mut out = Vec::new();
    'targets: for d in f.target().objects() {
        let s = strict_fiber(f, d);
        let r = right_fiber(f, d);
        let inc = strict_to_right(&s, &r)?;
        let v = is_lim_equivalence(&inc, depth, guards)?;
        for (label, cert) in v.fibers {
            let stop = cert.verdict.is_refuted();
            out.push((format!("{} / {label}", f.target().obj_label(d)), cert));
            if stop {
                break 'targets;
            }
        }
    }
    Ok(FunctorVerdict::from_fibers(depth, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{full_subcategory, group_category, poset_category, FiniteGroup};

    fn chain2() -> Arc<FinCat> {
        Arc::new(poset_category(&["0".into(), "1".into()], |a, b| a <= b))
    }

    #[test]
    fn cone_and_discrete() {
        let g = Guards::default();
        assert!(is_weakly_contractible(&chain2(), 3, &g).unwrap().verdict.is_contractible());
        let d = Arc::new(poset_category(&["a".into(), "b".into()], |a, b| a == b));
        assert!(is_weakly_contractible(&d, 3, &g).unwrap().verdict.is_refuted());
    }

    #[test]
    fn classifying_spaces_are_refuted() {
        let g = Guards::default();
        let c = Arc::new(group_category(&FiniteGroup::cyclic(2)));
        let v = is_weakly_contractible(&c, 3, &g).unwrap().verdict;
        assert_eq!(v, Verdict::NotContractible("H_1 = Z/2".into()));
    }

    #[test]
    fn circle_is_refuted_and_zigzag_is_not() {
        let g = Guards::default();
        let labels: Vec<String> = (0..6).map(|i| i.to_string()).collect();
        let circle = Arc::new(poset_category(&labels, |a, b| a == b || (a < 3 && b >= 3 && b - 3 != a)));
        assert!(is_weakly_contractible(&circle, 3, &g).unwrap().verdict.is_refuted());
        let zig = Arc::new(poset_category(&labels[..4], |a, b| a == b || (a % 2 == 0 && b % 2 == 1 && (b == a + 1 || a == b + 1))));
        let cert = is_weakly_contractible(&zig, 3, &g).unwrap();
        assert!(cert.verdict.is_contractible(), "{cert:?}");
        assert_eq!(cert.method.split(' ').next(), Some("homology"));
    }

    #[test]
    fn upper_inclusion_is_not_proper() {
        let g = Guards::default();
        let c = chain2();
        let (_, inc) = full_subcategory(&c, &[1]).unwrap();
        assert_eq!(is_proper(&inc, 3, &g).unwrap().holds, Some(false));
        let (_, low) = full_subcategory(&c, &[0]).unwrap();
        assert_eq!(is_proper(&low, 3, &g).unwrap().holds, Some(true));
    }
}

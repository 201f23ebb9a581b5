use std::sync::Arc;

use serde::Serialize;

use super::build::RbsCategory;
use crate::error::{Error, Result};
use crate::fincat::{group_category, FinFunctor, FiniteGroup};

#[derive(Clone, Debug, Serialize)]
pub struct SubgroupData {
    pub parabolic: Vec<Vec<u32>>,
    pub unipotent: Vec<Vec<u32>>,
    /// E(M), generated by all U_F.
    pub elementary: Vec<u32>,
    /// Elements of determinant 1.
    pub special: Vec<u32>,
}

impl SubgroupData {
    pub fn elementary_is_special(&self) -> bool {
        self.elementary == self.special
    }
}

/// Collects P_F, U_F and E(M), checking U_F ⊴ P_F, U_{[∅]} = 1 and
/// F <= G ⇒ U_G ⊆ U_F.
pub fn compute_e_group(rbs: &RbsCategory) -> Result<SubgroupData> {
    let s = &rbs.setting;
    let group = rbs.group();
    let nf = s.flags.len();
    if rbs.unipotent[rbs.empty_flag() as usize] != vec![group.identity()] {
        return Err(Error::Consistency("U_[∅] is not trivial".into()));
    }
    for f in 0..nf {
        let u = &rbs.unipotent[f];
        let p = &rbs.parabolic[f];
        let inside = |x: u32| u.binary_search(&x).is_ok();
        if !p.iter().all(|&g| u.iter().all(|&x| inside(group.mul(group.mul(g, x), group.inv(g))))) {
            return Err(Error::Consistency(format!("U is not normal in P at flag {f}")));
        }
        for g in 0..nf {
            if s.leq(f as u32, g as u32) && !rbs.unipotent[g].iter().all(|&x| inside(x)) {
                return Err(Error::Consistency(format!("U_{g} is not contained in U_{f}")));
            }
        }
    }
    let mut gens: Vec<u32> = rbs.unipotent.iter().flatten().copied().collect();
    gens.sort_unstable();
    gens.dedup();
    let elementary = group.closure(&gens);
    let special = s
        .gl
        .iter()
        .enumerate()
        .filter(|(_, g)| g.det(&s.ring) == 1)
        .map(|(i, _)| i as u32)
        .collect();
    Ok(SubgroupData {
        parabolic: rbs.parabolic.clone(),
        unipotent: rbs.unipotent.clone(),
        elementary,
        special,
    })
}

/// GL(M)/E(M) with the class map GL → GL/E.
pub fn pi1_target(rbs: &RbsCategory, data: &SubgroupData) -> Result<(FiniteGroup, Vec<u32>)> {
    rbs.group().quotient(&data.elementary)
}

/// RBS(M) → B(GL/E): every flag goes to the base point, a coset gU_F to the
/// class of g.
pub fn functor_to_quotient(rbs: &RbsCategory, quotient: &FiniteGroup, class: &[u32]) -> Result<FinFunctor> {
    let target = Arc::new(group_category(quotient));
    let mors = rbs.morphisms.iter().map(|m| class[m.rep as usize]).collect();
    FinFunctor::new(rbs.cat.clone(), target, vec![0; rbs.cat.num_objects()], mors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guards::Guards;
    use crate::rbs::build::build_rbs;
    use crate::ring::FiniteRing;

    fn index_of_e(spec: &str, n: usize) -> usize {
        let r = build_rbs(&FiniteRing::from_str_spec(spec).unwrap(), n, &Guards::default()).unwrap();
        let d = compute_e_group(&r).unwrap();
        assert!(d.elementary_is_special());
        let (q, class) = pi1_target(&r, &d).unwrap();
        let f = functor_to_quotient(&r, &q, &class).unwrap();
        assert!(f.is_surjective_on_morphisms());
        assert!(q.is_abelian());
        q.order()
    }

    #[test]
    fn quotient_orders() {
        assert_eq!(index_of_e("F2", 2), 1);
        assert_eq!(index_of_e("F3", 2), 2);
        assert_eq!(index_of_e("Z/4", 2), 2);
        assert_eq!(index_of_e("F5", 1), 4);
    }
}

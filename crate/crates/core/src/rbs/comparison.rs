use std::sync::Arc;

use super::build::{bgl_category, bgl_inclusion, RbsCategory};
use crate::error::{Error, Result};
use crate::fincat::{action_category, full_subcategory, is_isomorphism_of_categories, FinCat, FinFunctor};

/// p: GL\\P → RBS(M), the identity on flags and g ↦ gU_F on morphisms.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub action_cat: Arc<FinCat>,
    /// (g, src, tgt) per morphism of GL\\P.
    pub data: Vec<(u32, u32, u32)>,
    pub functor: FinFunctor,
}

pub fn comparison_functor(rbs: &RbsCategory) -> Result<Comparison> {
    let ac = action_category(&rbs.setting.action);
    let action_cat = Arc::new(ac.cat);
    let mors = ac
        .data
        .iter()
        .map(|&(g, x, y)| {
            rbs.morphism(x, y, g)
                .ok_or_else(|| Error::Consistency(format!("no coset morphism for ({g}, {x}, {y})")))
        })
        .collect::<Result<Vec<u32>>>()?;
    let objs = action_cat.objects().collect();
    let functor = FinFunctor::new(action_cat.clone(), rbs.cat.clone(), objs, mors)?;
    Ok(Comparison {
        action_cat,
        data: ac.data,
        functor,
    })
}

/// Restriction of p to the full subcategories on `[∅]`.
#[derive(Clone, Debug)]
pub struct OverEmpty {
    /// The full subcategory of GL\\P on `[∅]`, i.e. the preimage of BGL(M).
    pub preimage: Arc<FinCat>,
    /// preimage → BGL(M), g ↦ g.
    pub to_bgl: FinFunctor,
    pub is_isomorphism: bool,
    /// `bgl_inclusion ∘ to_bgl` agrees with p on the preimage.
    pub commutes: bool,
}

pub fn restriction_over_empty(rbs: &RbsCategory, cmp: &Comparison) -> Result<OverEmpty> {
    let e = rbs.empty_flag();
    let (preimage, inc) = full_subcategory(&cmp.action_cat, &[e])?;
    let bgl = Arc::new(bgl_category(&rbs.setting));
    let mors = preimage.morphisms().map(|m| cmp.data[inc.mor(m) as usize].0).collect();
    let to_bgl = FinFunctor::new(preimage.clone(), bgl, vec![0], mors)?;
    let is_isomorphism = is_isomorphism_of_categories(&to_bgl);
    let via_bgl = to_bgl.then(&bgl_inclusion(rbs)?)?;
    let direct = inc.then(&cmp.functor)?;
    let commutes = via_bgl.obj_map() == direct.obj_map() && via_bgl.mor_map() == direct.mor_map();
    Ok(OverEmpty {
        preimage,
        to_bgl,
        is_isomorphism,
        commutes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{is_proper, strict_fiber};
    use crate::guards::Guards;
    use crate::rbs::build::build_rbs;
    use crate::ring::FiniteRing;

    #[test]
    fn f2_squared() {
        let g = Guards::default();
        let r = build_rbs(&FiniteRing::field(2).unwrap(), 2, &g).unwrap();
        let c = comparison_functor(&r).unwrap();
        assert!(c.functor.is_surjective_on_morphisms());
        let o = restriction_over_empty(&r, &c).unwrap();
        assert!(o.is_isomorphism && o.commutes);
        assert_eq!(o.preimage.num_morphisms(), 6);
        let s = strict_fiber(&c.functor, r.empty_flag());
        assert_eq!((s.cat.num_objects(), s.cat.num_morphisms()), (1, 1));
        assert!(is_proper(&c.functor, 3, &g).unwrap().holds());
    }

    #[test]
    fn rank_one_is_isomorphism() {
        let r = build_rbs(&FiniteRing::field(5).unwrap(), 1, &Guards::default()).unwrap();
        let c = comparison_functor(&r).unwrap();
        assert!(is_isomorphism_of_categories(&c.functor));
    }
}

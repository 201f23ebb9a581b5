use std::collections::HashMap;
use std::sync::Arc;

use super::build::{build_rbs, RbsCategory};
use crate::error::{Error, Result};
use crate::fincat::{
    full_subcategory, is_equivalence, is_isomorphism_of_categories, product_all, FinCat, FinFunctor,
};
use crate::guards::Guards;
use crate::ring::{quotient_map, Flag, QuotientMap, Submodule};

/// The part of RBS(M) below a flag F = (M_1 ⊂ ... ⊂ M_{d-1}) and its
/// comparison with ∏ RBS(M_i/M_{i-1}).
#[derive(Clone, Debug)]
pub struct InductiveDecomposition {
    pub flag: u32,
    /// Full subcategory on the objects admitting a morphism to F.
    pub below: Arc<FinCat>,
    /// Full subcategory on the refinements G <= F.
    pub refinements: Arc<FinCat>,
    /// refinements ↪ below.
    pub inclusion: FinFunctor,
    pub inclusion_is_equivalence: bool,
    /// RBS of each graded piece.
    pub factors: Vec<RbsCategory>,
    pub product: Arc<FinCat>,
    /// refinements → product, G ↦ (G ∩ [M_{i-1}, M_i] / M_{i-1})_i.
    pub to_product: FinFunctor,
    pub is_isomorphism: bool,
}

fn project_submodule(rbs: &RbsCategory, q: &QuotientMap, h: &Submodule) -> Submodule {
    let ring = rbs.ring();
    let rows: Vec<Vec<u8>> = (0..h.basis().rows()).map(|r| q.project(ring, h.basis().row(r))).collect();
    Submodule::from_rows(ring, q.rank(), &rows)
}

pub fn inductive_decomposition(rbs: &RbsCategory, f: u32, guards: &Guards) -> Result<InductiveDecomposition> {
    let s = &rbs.setting;
    let ring = rbs.ring();
    let c = &rbs.cat;
    let flag = &s.flags[f as usize];

    let below_objs: Vec<u32> = c.objects().filter(|&x| !c.hom(x, f).is_empty()).collect();
    let refine_objs: Vec<u32> = c.objects().filter(|&x| s.flags[x as usize].refines(flag)).collect();
    let (below, below_inc) = full_subcategory(c, &below_objs)?;
    let (refinements, refine_inc) = full_subcategory(c, &refine_objs)?;
    let pos_below: HashMap<u32, u32> = below_objs.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
    let mor_below: HashMap<u32, u32> = below.morphisms().map(|m| (below_inc.mor(m), m)).collect();
    let inc_objs = refine_objs
        .iter()
        .map(|x| pos_below.get(x).copied().ok_or_else(|| Error::Consistency("a refinement has no map to F".into())))
        .collect::<Result<Vec<u32>>>()?;
    let inc_mors = refinements.morphisms().map(|m| mor_below[&refine_inc.mor(m)]).collect();
    let inclusion = FinFunctor::new(refinements.clone(), below.clone(), inc_objs, inc_mors)?;
    let inclusion_is_equivalence = is_equivalence(&inclusion);

    let chain = flag.full_chain();
    let quotients = chain
        .windows(2)
        .map(|w| quotient_map(ring, &w[0], &w[1]))
        .collect::<Result<Vec<QuotientMap>>>()?;
    let mut cache: HashMap<usize, RbsCategory> = HashMap::new();
    let mut factors = Vec::new();
    for q in &quotients {
        let k = q.rank();
        if !cache.contains_key(&k) {
            cache.insert(k, build_rbs(ring, k, guards)?);
        }
        factors.push(cache[&k].clone());
    }
    let product = Arc::new(product_all(&factors.iter().map(|r| &*r.cat).collect::<Vec<&FinCat>>()));

    // Graded pieces of a refinement G of F.
    let pieces = |g: &Flag| -> Result<Vec<u32>> {
        let mut out = Vec::with_capacity(quotients.len());
        for (i, q) in quotients.iter().enumerate() {
            let (lo, hi) = (&chain[i], &chain[i + 1]);
            let members: Vec<Submodule> = g
                .members()
                .iter()
                .filter(|h| *h != lo && *h != hi && lo.is_subset_of(ring, h) && h.is_subset_of(ring, hi))
                .map(|h| project_submodule(rbs, q, h))
                .collect();
            let piece = Flag::new(ring, q.rank(), members)?;
            let idx = factors[i]
                .setting
                .flag_index(&piece)
                .ok_or_else(|| Error::Consistency(format!("graded flag {} not found", piece.label())))?;
            out.push(idx);
        }
        Ok(out)
    };
    let obj_tuples = refine_objs
        .iter()
        .map(|&x| pieces(&s.flags[x as usize]))
        .collect::<Result<Vec<Vec<u32>>>>()?;
    let encode = |ids: &[u32], sizes: &dyn Fn(usize) -> usize| -> u32 {
        ids.iter().enumerate().fold(0u32, |acc, (i, &x)| acc * sizes(i) as u32 + x)
    };
    let obj_sizes = |i: usize| factors[i].cat.num_objects();
    let mor_sizes = |i: usize| factors[i].cat.num_morphisms();
    let obj_map: Vec<u32> = obj_tuples.iter().map(|t| encode(t, &obj_sizes)).collect();

    let mut mor_map = Vec::with_capacity(refinements.num_morphisms());
    for m in refinements.morphisms() {
        let cm = rbs.morphisms[refine_inc.mor(m) as usize];
        if s.act(cm.rep, f) != f {
            return Err(Error::Consistency("a morphism between refinements is not in P_F".into()));
        }
        let gt = s.gl[cm.rep as usize].transpose();
        let (src, tgt) = (&obj_tuples[refinements.src(m) as usize], &obj_tuples[refinements.tgt(m) as usize]);
        let mut ids = Vec::with_capacity(quotients.len());
        for (i, q) in quotients.iter().enumerate() {
            // Row action on M_i/M_{i-1} is C gᵀ P; the matrix itself is its transpose.
            let induced = q.complement.mul(&gt, ring).mul(&q.projection, ring).transpose();
            let fs = &factors[i].setting;
            let gi = fs
                .gl_index(&induced)
                .ok_or_else(|| Error::Consistency(format!("induced map {induced:?} is not invertible")))?;
            let id = factors[i]
                .morphism(src[i], tgt[i], gi)
                .ok_or_else(|| Error::Consistency("induced coset is not a morphism".into()))?;
            ids.push(id);
        }
        mor_map.push(encode(&ids, &mor_sizes));
    }
    let to_product = FinFunctor::new(refinements.clone(), product.clone(), obj_map, mor_map)?;
    let is_isomorphism = is_isomorphism_of_categories(&to_product);
    Ok(InductiveDecomposition {
        flag: f,
        below,
        refinements,
        inclusion,
        inclusion_is_equivalence,
        factors,
        product,
        to_product,
        is_isomorphism,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteRing;

    #[test]
    fn every_flag_of_small_planes() {
        let g = Guards::default();
        for q in [2, 3] {
            let r = build_rbs(&FiniteRing::field(q).unwrap(), 2, &g).unwrap();
            for f in r.cat.objects() {
                let d = inductive_decomposition(&r, f, &g).unwrap();
                assert!(d.inclusion_is_equivalence, "q = {q}, flag {f}");
                assert!(d.is_isomorphism, "q = {q}, flag {f}");
            }
        }
    }

    #[test]
    fn line_in_f3_plane() {
        let g = Guards::default();
        let r = build_rbs(&FiniteRing::field(3).unwrap(), 2, &g).unwrap();
        let d = inductive_decomposition(&r, 1, &g).unwrap();
        assert_eq!(d.refinements.num_objects(), 1);
        assert_eq!(d.refinements.num_morphisms(), 4);
        assert_eq!(d.below.num_objects(), 4);
    }

    #[test]
    fn empty_flag_is_everything() {
        let g = Guards::default();
        let r = build_rbs(&FiniteRing::field(2).unwrap(), 2, &g).unwrap();
        let d = inductive_decomposition(&r, 0, &g).unwrap();
        assert_eq!(d.refinements.num_morphisms(), r.cat.num_morphisms());
        assert!(d.is_isomorphism);
    }
}

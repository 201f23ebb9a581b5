use std::collections::HashMap;
use std::sync::Arc;

use super::ops::opposite;
use super::{CatBuilder, FinCat, FinFunctor};
use crate::error::Result;

/// Tw(C): objects are the morphisms of C; a morphism f → f′ is a pair
/// (a, b) with f′ = b ∘ f ∘ a.
#[derive(Clone, Debug)]
pub struct TwistedArrow {
    pub cat: Arc<FinCat>,
    /// `(a, b)` for each morphism.
    pub pairs: Vec<(u32, u32)>,
    /// Tw(C)^op → C, f ↦ src f.
    pub projection: FinFunctor,
}

pub fn twisted_arrow(c: &Arc<FinCat>) -> Result<TwistedArrow> {
    let mut into: Vec<Vec<u32>> = vec![Vec::new(); c.num_objects()];
    for m in c.morphisms() {
        into[c.tgt(m) as usize].push(m);
    }
    let mut b = CatBuilder::new();
    for f in c.morphisms() {
        b.add_object(c.mor_label(f));
    }
    let mut pairs = Vec::new();
    let mut srcs = Vec::new();
    let mut index: HashMap<(u32, u32, u32), u32> = HashMap::new();
    for f in c.morphisms() {
        for &a in &into[c.src(f) as usize] {
            let fa = c.compose(f, a);
            for &bm in c.out(c.tgt(f)) {
                let g = c.compose(bm, fa);
                let id = b.add_morphism(f, g, format!("({}, {})", c.mor_label(a), c.mor_label(bm)));
                index.insert((f, a, bm), id);
                pairs.push((a, bm));
                srcs.push(f);
            }
        }
    }
    for f in c.morphisms() {
        let id = index[&(f, c.identity(c.src(f)), c.identity(c.tgt(f)))];
        b.set_identity(f, id);
    }
    let cat = b.build_trusted(|p, q| {
        let (a2, b2) = pairs[p as usize];
        let (a1, b1) = pairs[q as usize];
        Ok(index[&(srcs[q as usize], c.compose(a1, a2), c.compose(b2, b1))])
    })?;
    let cat = Arc::new(cat);
    let op = Arc::new(opposite(&cat));
    let projection = FinFunctor::new(
        op,
        c.clone(),
        c.morphisms().map(|f| c.src(f)).collect(),
        pairs.iter().map(|p| p.0).collect(),
    )?;
    Ok(TwistedArrow { cat, pairs, projection })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::contract::is_colim_equivalence;
    use crate::fincat::ops::terminal_category;
    use crate::fincat::{group_category, poset_category, FiniteGroup};
    use crate::guards::Guards;

    #[test]
    fn terminal() {
        let t = twisted_arrow(&Arc::new(terminal_category())).unwrap();
        assert_eq!((t.cat.num_objects(), t.cat.num_morphisms()), (1, 1));
    }

    #[test]
    fn two_chain() {
        let c = Arc::new(poset_category(&["0".into(), "1".into()], |a, b| a <= b));
        let t = twisted_arrow(&c).unwrap();
        assert_eq!(t.cat.num_objects(), 3);
        t.cat.validate().unwrap();
        assert!(is_colim_equivalence(&t.projection, 3, &Guards::default()).unwrap().holds());
    }

    #[test]
    fn cyclic_two() {
        let c = Arc::new(group_category(&FiniteGroup::cyclic(2)));
        let t = twisted_arrow(&c).unwrap();
        assert_eq!(t.cat.num_objects(), 2);
        t.cat.validate().unwrap();
        assert!(is_colim_equivalence(&t.projection, 3, &Guards::default()).unwrap().holds());
    }
}

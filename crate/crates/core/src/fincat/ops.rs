use std::collections::HashMap;
use std::sync::Arc;

use super::{CatBuilder, FinCat, FinFunctor, UnionFind};
use crate::error::{Error, Result};

/// C^op with the same object and morphism ids.
pub fn opposite(c: &FinCat) -> FinCat {
    let mut b = CatBuilder::new();
    for x in c.objects() {
        b.add_object(c.obj_label(x));
    }
    for m in c.morphisms() {
        b.add_morphism(c.tgt(m), c.src(m), c.mor_label(m));
    }
    for x in c.objects() {
        b.set_identity(x, c.identity(x));
    }
    b.build_trusted(|f, g| Ok(c.compose(g, f))).expect("opposite of a valid category")
}

/// F^op : C^op -> D^op.
pub fn opposite_functor(f: &FinFunctor) -> FinFunctor {
    FinFunctor::new_trusted(
        Arc::new(opposite(f.source())),
        Arc::new(opposite(f.target())),
        f.obj_map().to_vec(),
        f.mor_map().to_vec(),
    )
    .expect("opposite functor")
}

/// C x D; object (x, y) has id `x * |ob D| + y`, morphism (f, g) has id
/// `f * |mor D| + g`.
pub fn product(c: &FinCat, d: &FinCat) -> FinCat {
    let (no, nm) = (d.num_objects() as u32, d.num_morphisms() as u32);
    let mut b = CatBuilder::new();
    for x in c.objects() {
        for y in d.objects() {
            b.add_object(format!("({},{})", c.obj_label(x), d.obj_label(y)));
        }
    }
    for f in c.morphisms() {
        for g in d.morphisms() {
            b.add_morphism(
                c.src(f) * no + d.src(g),
                c.tgt(f) * no + d.tgt(g),
                format!("({},{})", c.mor_label(f), d.mor_label(g)),
            );
        }
    }
    for x in c.objects() {
        for y in d.objects() {
            b.set_identity(x * no + y, c.identity(x) * nm + d.identity(y));
        }
    }
    b.build_trusted(|p, q| {
        let (f1, g1) = (p / nm, p % nm);
        let (f2, g2) = (q / nm, q % nm);
        Ok(c.compose(f1, f2) * nm + d.compose(g1, g2))
    })
    .expect("product of valid categories")
}

/// Product of a list of categories (terminal category for the empty list).
pub fn product_all(cats: &[&FinCat]) -> FinCat {
    let mut acc = terminal_category();
    for (i, c) in cats.iter().enumerate() {
        acc = if i == 0 { (*c).clone() } else { product(&acc, c) };
    }
    acc
}

pub fn terminal_category() -> FinCat {
    let mut b = CatBuilder::new();
    let x = b.add_object("*");
    b.add_identity(x);
    b.build(|f, _| Ok(f)).unwrap()
}

/// Full subcategory on `objs` (kept in the given order) together with the
/// inclusion functor.
pub fn full_subcategory(c: &Arc<FinCat>, objs: &[u32]) -> Result<(Arc<FinCat>, FinFunctor)> {
    let mut new_id = vec![u32::MAX; c.num_objects()];
    for (i, &x) in objs.iter().enumerate() {
        if x as usize >= c.num_objects() {
            return Err(Error::InvalidInput(format!("object {x} is not in the category")));
        }
        if new_id[x as usize] != u32::MAX {
            return Err(Error::InvalidInput(format!("object {x} listed twice")));
        }
        new_id[x as usize] = i as u32;
    }
    let mut b = CatBuilder::new();
    for &x in objs {
        b.add_object(c.obj_label(x));
    }
    let mut mors = Vec::new();
    let mut mor_new = HashMap::new();
    for &x in objs {
        for &m in c.out(x) {
            let t = new_id[c.tgt(m) as usize];
            if t != u32::MAX {
                let id = b.add_morphism(new_id[x as usize], t, c.mor_label(m));
                mor_new.insert(m, id);
                mors.push(m);
            }
        }
    }
    for &x in objs {
        b.set_identity(new_id[x as usize], mor_new[&c.identity(x)]);
    }
    let sub = Arc::new(b.build_trusted(|f, g| Ok(mor_new[&c.compose(mors[f as usize], mors[g as usize])]))?);
    let inc = FinFunctor::new_trusted(sub.clone(), c.clone(), objs.to_vec(), mors)?;
    Ok((sub, inc))
}

/// A skeleton: the full subcategory on one representative per isomorphism
/// class (the least object id of the class).
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub cat: Arc<FinCat>,
    pub inclusion: FinFunctor,
    /// Representative (as an object of the skeleton) of each original object.
    pub class_of: Vec<u32>,
}

pub fn skeleton(c: &Arc<FinCat>) -> Skeleton {
    let mut uf = UnionFind::new(c.num_objects());
    for f in c.morphisms() {
        let (x, y) = (c.src(f), c.tgt(f));
        if x != y && uf.find(x as usize) != uf.find(y as usize) && c.is_isomorphism(f) {
            uf.union(x as usize, y as usize);
        }
    }
    let reps: Vec<u32> = c.objects().filter(|&x| uf.find(x as usize) == x as usize).collect();
    let pos: HashMap<u32, u32> = reps.iter().enumerate().map(|(i, &r)| (r, i as u32)).collect();
    let class_of = c.objects().map(|x| pos[&(uf.find(x as usize) as u32)]).collect();
    let (cat, inclusion) = full_subcategory(c, &reps).expect("representatives are valid objects");
    Skeleton {
        cat,
        inclusion,
        class_of,
    }
}

/// Bijective on every hom-set.
pub fn is_fully_faithful(f: &FinFunctor) -> bool {
    let (c, d) = (f.source(), f.target());
    for x in c.objects() {
        let mut by_target: HashMap<u32, Vec<u32>> = HashMap::new();
        for &m in c.out(x) {
            by_target.entry(c.tgt(m)).or_default().push(f.mor(m));
        }
        for y in c.objects() {
            let mut images = by_target.remove(&y).unwrap_or_default();
            images.sort_unstable();
            images.dedup();
            let expected = d.hom(f.obj(x), f.obj(y)).len();
            let domain = c.hom(x, y).len();
            if images.len() != domain || domain != expected {
                return false;
            }
        }
    }
    true
}

/// Every target object is isomorphic to an image object.
pub fn is_essentially_surjective(f: &FinFunctor) -> bool {
    let d = f.target();
    let mut hit = vec![false; d.num_objects()];
    for &y in f.obj_map() {
        hit[y as usize] = true;
    }
    let mut uf = UnionFind::new(d.num_objects());
    for m in d.morphisms() {
        if d.src(m) != d.tgt(m) && d.is_isomorphism(m) {
            uf.union(d.src(m) as usize, d.tgt(m) as usize);
        }
    }
    let mut class_hit = vec![false; d.num_objects()];
    for y in 0..d.num_objects() {
        if hit[y] {
            let r = uf.find(y);
            class_hit[r] = true;
        }
    }
    (0..d.num_objects()).all(|y| {
        let r = uf.find(y);
        class_hit[r]
    })
}

pub fn is_equivalence(f: &FinFunctor) -> bool {
    is_fully_faithful(f) && is_essentially_surjective(f)
}

/// Bijective on objects and on morphisms (functoriality is a standing invariant).
pub fn is_isomorphism_of_categories(f: &FinFunctor) -> bool {
    let (c, d) = (f.source(), f.target());
    if c.num_objects() != d.num_objects() || c.num_morphisms() != d.num_morphisms() {
        return false;
    }
    let mut seen_o = vec![false; d.num_objects()];
    for &y in f.obj_map() {
        if std::mem::replace(&mut seen_o[y as usize], true) {
            return false;
        }
    }
    let mut seen_m = vec![false; d.num_morphisms()];
    for &m in f.mor_map() {
        if std::mem::replace(&mut seen_m[m as usize], true) {
            return false;
        }
    }
    f.validate().is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{group_category, poset_category, FiniteGroup};

    fn chain2() -> FinCat {
        poset_category(&["0".into(), "1".into()], |a, b| a <= b)
    }

    #[test]
    fn opposite_twice_is_identity() {
        let c = group_category(&FiniteGroup::cyclic(3));
        let cc = opposite(&opposite(&c));
        assert_eq!(cc.to_raw(), c.to_raw());
    }

    #[test]
    fn product_with_terminal() {
        let c = chain2();
        let p = product(&c, &terminal_category());
        assert_eq!((p.num_objects(), p.num_morphisms()), (2, 3));
        p.validate().unwrap();
        let q = product(&c, &c);
        q.validate().unwrap();
        assert_eq!(q.num_morphisms(), 9);
    }

    #[test]
    fn full_subcategory_checks_ids() {
        let c = Arc::new(chain2());
        let (s, inc) = full_subcategory(&c, &[1]).unwrap();
        assert_eq!(s.num_morphisms(), 1);
        assert!(is_fully_faithful(&inc));
        assert!(!is_essentially_surjective(&inc));
        assert!(full_subcategory(&c, &[7]).is_err());
    }

    #[test]
    fn skeleton_of_indiscrete_groupoid_is_a_point() {
        let c = Arc::new(poset_category(&["a".into(), "b".into(), "c".into()], |_, _| true));
        let s = skeleton(&c);
        assert_eq!((s.cat.num_objects(), s.cat.num_morphisms()), (1, 1));
        assert!(is_equivalence(&s.inclusion));
    }
}

use std::collections::HashMap;
use std::sync::Arc;

use super::{CatBuilder, FinCat, FinFunctor};
use crate::error::Result;

/// A comma-type fiber of a functor F: C → D over an object d. Objects carry
/// `(c, f)` with `f` the structure morphism in D (for strict fibers `f` is
/// the identity of d); morphisms carry the underlying morphism of C.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub cat: Arc<FinCat>,
    pub objects: Vec<(u32, u32)>,
    pub underlying: Vec<u32>,
}

impl Fiber {
    /// Forgetful functor to the source category.
    pub fn projection(&self, source: &Arc<FinCat>) -> Result<FinFunctor> {
        FinFunctor::new_trusted(
            self.cat.clone(),
            source.clone(),
            self.objects.iter().map(|o| o.0).collect(),
            self.underlying.clone(),
        )
    }
}

fn assemble(
    c: &FinCat,
    objects: Vec<(u32, u32)>,
    edges: Vec<(u32, u32, u32)>,
    d: &FinCat,
) -> Fiber {
    let mut b = CatBuilder::new();
    for &(x, f) in &objects {
        b.add_object(format!("({}, {})", c.obj_label(x), d.mor_label(f)));
    }
    let mut index: HashMap<(u32, u32, u32), u32> = HashMap::new();
    let mut underlying = Vec::with_capacity(edges.len());
    for &(s, t, u) in &edges {
        let id = b.add_morphism(s, t, c.mor_label(u));
        index.insert((s, t, u), id);
        underlying.push(u);
    }
    for (i, &(x, _)) in objects.iter().enumerate() {
        let i = i as u32;
        b.set_identity(i, index[&(i, i, c.identity(x))]);
    }
    let cat = b
        .build_trusted(|p, q| {
            let (_, t, u) = edges[p as usize];
            let (s, _, v) = edges[q as usize];
            Ok(index[&(s, t, c.compose(u, v))])
        })
        .expect("fiber of a valid functor");
    Fiber {
        cat: Arc::new(cat),
        objects,
        underlying,
    }
}

/// C_{/d}: objects (c, f: F(c) → d); morphisms u: c → c′ with f′ ∘ F(u) = f.
pub fn left_fiber(func: &FinFunctor, d: u32) -> Fiber {
    let (c, dc) = (func.source(), func.target());
    let mut objects = Vec::new();
    for x in c.objects() {
        for f in dc.hom(func.obj(x), d) {
            objects.push((x, f));
        }
    }
    let pos: HashMap<(u32, u32), u32> = objects.iter().enumerate().map(|(i, &o)| (o, i as u32)).collect();
    let mut edges = Vec::new();
    for (i, &(x, f)) in objects.iter().enumerate() {
        for &u in c.out(x) {
            let y = c.tgt(u);
            let fu = func.mor(u);
            for g in dc.hom(func.obj(y), d) {
                if dc.compose(g, fu) == f {
                    edges.push((i as u32, pos[&(y, g)], u));
                }
            }
        }
    }
    assemble(c, objects, edges, dc)
}

/// C_{d/}: objects (c, f: d → F(c)); morphisms u: c → c′ with F(u) ∘ f = f′.
pub fn right_fiber(func: &FinFunctor, d: u32) -> Fiber {
    let (c, dc) = (func.source(), func.target());
    let mut objects = Vec::new();
    for x in c.objects() {
        for f in dc.hom(d, func.obj(x)) {
            objects.push((x, f));
        }
    }
    let pos: HashMap<(u32, u32), u32> = objects.iter().enumerate().map(|(i, &o)| (o, i as u32)).collect();
    let mut edges = Vec::new();
    for (i, &(x, f)) in objects.iter().enumerate() {
        for &u in c.out(x) {
            let g = dc.compose(func.mor(u), f);
            edges.push((i as u32, pos[&(c.tgt(u), g)], u));
        }
    }
    assemble(c, objects, edges, dc)
}

/// C_d: objects with F(c) = d, morphisms with F(u) = id_d.
pub fn strict_fiber(func: &FinFunctor, d: u32) -> Fiber {
    let (c, dc) = (func.source(), func.target());
    let id = dc.identity(d);
    let objects: Vec<(u32, u32)> = c.objects().filter(|&x| func.obj(x) == d).map(|x| (x, id)).collect();
    let pos: HashMap<u32, u32> = objects.iter().enumerate().map(|(i, &(x, _))| (x, i as u32)).collect();
    let mut edges = Vec::new();
    for (i, &(x, _)) in objects.iter().enumerate() {
        for &u in c.out(x) {
            if func.mor(u) == id {
                edges.push((i as u32, pos[&c.tgt(u)], u));
            }
        }
    }
    assemble(c, objects, edges, dc)
}

/// The inclusion C_d → C_{d/}, c ↦ (c, id_d), for fibers built by
/// [`strict_fiber`] and [`right_fiber`] over the same d.
pub fn strict_to_right(strict: &Fiber, right: &Fiber) -> Result<FinFunctor> {
    let pos: HashMap<(u32, u32), u32> = right.objects.iter().enumerate().map(|(i, &o)| (o, i as u32)).collect();
    let obj_map: Vec<u32> = strict.objects.iter().map(|o| pos[o]).collect();
    let mut mor_index: HashMap<(u32, u32), u32> = HashMap::new();
    for m in right.cat.morphisms() {
        mor_index.insert((right.cat.src(m), right.underlying[m as usize]), m);
    }
    let mor_map = strict
        .cat
        .morphisms()
        .map(|m| mor_index[&(obj_map[strict.cat.src(m) as usize], strict.underlying[m as usize])])
        .collect();
    FinFunctor::new(strict.cat.clone(), right.cat.clone(), obj_map, mor_map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::ops::terminal_category;
    use crate::fincat::poset_category;

    fn chain2() -> Arc<FinCat> {
        Arc::new(poset_category(&["0".into(), "1".into()], |a, b| a <= b))
    }

    #[test]
    fn identity_left_fiber_is_slice() {
        let c = chain2();
        let id = FinFunctor::identity(c.clone());
        let f = left_fiber(&id, 1);
        assert_eq!(f.cat.num_objects(), 2);
        assert!(f.cat.terminal_object().is_some());
        f.cat.validate().unwrap();
    }

    #[test]
    fn point_hitting_top() {
        let t = Arc::new(terminal_category());
        let c = chain2();
        let f = FinFunctor::new(t, c.clone(), vec![1], vec![c.identity(1)]).unwrap();
        assert_eq!(left_fiber(&f, 0).cat.num_objects(), 0);
        assert_eq!(right_fiber(&f, 0).cat.num_objects(), 1);
        assert_eq!(strict_fiber(&f, 0).cat.num_objects(), 0);
        let s = strict_fiber(&f, 1);
        let r = right_fiber(&f, 1);
        strict_to_right(&s, &r).unwrap();
    }
}

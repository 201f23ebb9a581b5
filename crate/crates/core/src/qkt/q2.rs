use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::monoidal::{obj_label, MonMor, MonoidalCategory};
use crate::error::{Error, Result};
use crate::fincat::{CatBuilder, FinCat, UnionFind};

/// A 1-morphism (a, b, φ: a⊛m⊛b → m′) of Q₂(M); all three are ids in M.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Triple {
    pub a: u32,
    pub b: u32,
    pub phi: u32,
}

/// The hom-category Hom₂(m, m′) of Q₂(M).
#[derive(Clone, Debug)]
pub struct Q2Hom {
    pub m: u32,
    pub m_prime: u32,
    pub objects: Vec<Triple>,
    /// 2-cell k is (src, tgt, α, β).
    pub cells: Vec<(u32, u32, u32, u32)>,
    pub cat: Arc<FinCat>,
    /// Component of each object.
    pub component: Vec<usize>,
    /// A terminal object of each component.
    pub terminal: Vec<u32>,
    index: HashMap<Triple, u32>,
}

impl Q2Hom {
    pub fn object(&self, t: &Triple) -> Option<u32> {
        self.index.get(t).copied()
    }

    pub fn num_components(&self) -> usize {
        self.terminal.len()
    }

    /// The terminal representative of the component of `x` and the unique
    /// 2-cell into it.
    pub fn terminal_decomposition(&self, x: u32) -> (u32, u32) {
        let t = self.terminal[self.component[x as usize]];
        let cell = self.cat.hom(x, t)[0];
        (t, cell)
    }
}

fn fail<T>(msg: String) -> Result<T> {
    Err(Error::Consistency(msg))
}

pub fn q2_hom(me: &MonoidalCategory, m: u32, m_prime: u32) -> Result<Q2Hom> {
    let c = &me.cat;
    let (tm, tm2) = (me.total(m), me.total(m_prime));
    let mut objects = Vec::new();
    if tm <= tm2 {
        for a in c.objects() {
            for b in c.objects() {
                if me.total(a) + tm + me.total(b) != tm2 {
                    continue;
                }
                let Some(amb) = me.concat_obj(a, m).and_then(|am| me.concat_obj(am, b)) else { continue };
                for phi in c.hom(amb, m_prime) {
                    objects.push(Triple { a, b, phi });
                }
            }
        }
    }
    let index: HashMap<Triple, u32> = objects.iter().enumerate().map(|(i, t)| (*t, i as u32)).collect();
    let id_m = c.identity(m);
    let mut cells = Vec::new();
    for (s, x) in objects.iter().enumerate() {
        for (t, y) in objects.iter().enumerate() {
            for alpha in c.hom(x.a, y.a) {
                for beta in c.hom(x.b, y.b) {
                    let whisker = me
                        .concat_mor(alpha, id_m)
                        .and_then(|am| me.concat_mor(am, beta))
                        .ok_or_else(|| Error::Consistency("α⊛id⊛β leaves the cap".into()))?;
                    if c.compose(y.phi, whisker) == x.phi {
                        cells.push((s as u32, t as u32, alpha, beta));
                    }
                }
            }
        }
    }
    let cell_index: HashMap<(u32, u32, u32, u32), u32> =
        cells.iter().enumerate().map(|(i, k)| (*k, i as u32)).collect();
    let mut bld = CatBuilder::new();
    for t in &objects {
        bld.add_object(format!("({}, {}, {})", obj_label(&me.objects[t.a as usize]), obj_label(&me.objects[t.b as usize]), c.mor_label(t.phi)));
    }
    for &(s, t, alpha, beta) in &cells {
        bld.add_morphism(s, t, format!("({}, {})", c.mor_label(alpha), c.mor_label(beta)));
    }
    for (i, t) in objects.iter().enumerate() {
        bld.set_identity(i as u32, cell_index[&(i as u32, i as u32, c.identity(t.a), c.identity(t.b))]);
    }
    let cat = bld.build(|f, g| {
        let (_, t, a2, b2) = cells[f as usize];
        let (s, _, a1, b1) = cells[g as usize];
        cell_index
            .get(&(s, t, c.compose(a2, a1), c.compose(b2, b1)))
            .copied()
            .ok_or_else(|| Error::Consistency("2-cells do not compose".into()))
    })?;
    let mut uf = UnionFind::new(objects.len());
    for &(s, t, _, _) in &cells {
        uf.union(s as usize, t as usize);
    }
    let (ncomp, component) = uf.labels();
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); ncomp];
    for (x, &k) in component.iter().enumerate() {
        members[k].push(x as u32);
    }
    let mut terminal = Vec::with_capacity(ncomp);
    for (k, ms) in members.iter().enumerate() {
        let terminals: Vec<u32> = ms.iter().copied().filter(|&t| ms.iter().all(|&x| cat.hom(x, t).len() == 1)).collect();
        let shaped = terminals.iter().copied().find(|t| has_terminal_shape(me, &objects[*t as usize]));
        let Some(t) = shaped.or(terminals.first().copied()) else {
            return fail(format!(
                "component {k} of Hom₂({}, {}) has no terminal object",
                obj_label(&me.objects[m as usize]),
                obj_label(&me.objects[m_prime as usize])
            ));
        };
        terminal.push(t);
    }
    Ok(Q2Hom {
        m,
        m_prime,
        objects,
        cells,
        cat: Arc::new(cat),
        component,
        terminal,
        index,
    })
}

/// Whether (A, B, Φ) has the form ((n_j)_{J₁}⊛a, b⊛(n_j)_{J₃}, id⊛f⊛id)
/// with a and b of length at most one.
pub fn has_terminal_shape(me: &MonoidalCategory, t: &Triple) -> bool {
    let phi: &MonMor = &me.morphisms[t.phi as usize];
    let (a, b) = (&me.objects[t.a as usize], &me.objects[t.b as usize]);
    let n = &phi.tgt;
    let prefix_ok = |k1: usize| {
        a.len() >= k1 && a.len() - k1 <= 1 && phi.restrict_range(0, k1) == MonMor::identity(&n[..k1])
    };
    let suffix_ok = |k3: usize| {
        b.len() >= k3
            && b.len() - k3 <= 1
            && phi.restrict_range(n.len() - k3, n.len()) == MonMor::identity(&n[n.len() - k3..])
    };
    (0..=n.len()).any(|k1| prefix_ok(k1) && (0..=n.len() - k1).any(suffix_ok))
}

/// Q₁(M): morphisms are the components of the hom-categories of Q₂(M).
#[derive(Clone, Debug)]
pub struct Q1Category {
    pub me: Arc<MonoidalCategory>,
    pub cat: Arc<FinCat>,
    pub homs: HashMap<(u32, u32), Q2Hom>,
    /// (m, m′, component) of each morphism.
    pub classes: Vec<(u32, u32, usize)>,
    class_index: HashMap<(u32, u32, usize), u32>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Q2Certificate {
    pub hom_categories: usize,
    pub one_morphisms: usize,
    pub two_cells: usize,
    pub components: usize,
    pub terminal_shapes_checked: usize,
}

impl Q1Category {
    /// The class of the 1-morphism `t`: m → m′.
    pub fn class_of(&self, m: u32, m_prime: u32, t: &Triple) -> Option<u32> {
        let h = self.homs.get(&(m, m_prime))?;
        let x = h.object(t)?;
        self.class_index.get(&(m, m_prime, h.component[x as usize])).copied()
    }

    /// Terminal representative of a morphism of Q₁.
    pub fn representative(&self, f: u32) -> Triple {
        let (m, m2, k) = self.classes[f as usize];
        let h = &self.homs[&(m, m2)];
        h.objects[h.terminal[k] as usize]
    }

    /// (a, b, φ) ∘ (c, d, ψ) = (a⊛c, d⊛b, φ ∘ (id_a ⊛ ψ ⊛ id_b)).
    pub fn compose_triples(&self, outer: &Triple, inner: &Triple) -> Option<Triple> {
        let me = &self.me;
        let c = &me.cat;
        let a = me.concat_obj(outer.a, inner.a)?;
        let b = me.concat_obj(inner.b, outer.b)?;
        let w = me.concat_mor(c.identity(outer.a), inner.phi)?;
        let w = me.concat_mor(w, c.identity(outer.b))?;
        Some(Triple {
            a,
            b,
            phi: c.compose(outer.phi, w),
        })
    }

    pub fn identity_triple(&self, m: u32) -> Triple {
        let e = self.me.empty();
        Triple {
            a: e,
            b: e,
            phi: self.me.cat.identity(m),
        }
    }

    pub fn certificate(&self) -> Q2Certificate {
        let mut cert = Q2Certificate::default();
        for h in self.homs.values() {
            cert.hom_categories += 1;
            cert.one_morphisms += h.objects.len();
            cert.two_cells += h.cells.len();
            cert.components += h.num_components();
            cert.terminal_shapes_checked += h.num_components();
        }
        cert
    }
}

pub fn q1_category(me: Arc<MonoidalCategory>) -> Result<Q1Category> {
    let c = me.cat.clone();
    let mut homs = HashMap::new();
    let mut classes = Vec::new();
    for m in c.objects() {
        for m2 in c.objects() {
            let h = q2_hom(&me, m, m2)?;
            for &t in &h.terminal {
                if !has_terminal_shape(&me, &h.objects[t as usize]) {
                    return fail(format!(
                        "terminal object {} of Hom₂({}, {}) is not of the decomposed form",
                        h.cat.obj_label(t),
                        c.obj_label(m),
                        c.obj_label(m2)
                    ));
                }
            }
            for k in 0..h.num_components() {
                classes.push((m, m2, k));
            }
            homs.insert((m, m2), h);
        }
    }
    let class_index: HashMap<(u32, u32, usize), u32> =
        classes.iter().enumerate().map(|(i, k)| (*k, i as u32)).collect();
    let mut q1 = Q1Category {
        me: me.clone(),
        cat: Arc::new(CatBuilder::new().build(|_, _| unreachable!("empty"))?),
        homs,
        classes,
        class_index,
    };
    let mut b = CatBuilder::new();
    for m in c.objects() {
        b.add_object(c.obj_label(m));
    }
    for &(m, m2, k) in &q1.classes {
        let h = &q1.homs[&(m, m2)];
        b.add_morphism(m, m2, format!("[{}]", h.cat.obj_label(h.terminal[k])));
    }
    for m in c.objects() {
        let id = q1
            .class_of(m, m, &q1.identity_triple(m))
            .ok_or_else(|| Error::Consistency("identity triple missing".into()))?;
        b.set_identity(m, id);
    }
    let cat = b.build(|f, g| {
        let (m2, m3, _) = q1.classes[f as usize];
        let (m, _, _) = q1.classes[g as usize];
        q1.compose_triples(&q1.representative(f), &q1.representative(g))
            .and_then(|t| q1.class_of(m, m3, &t))
            .ok_or_else(|| Error::Consistency(format!("composite through {} leaves the cap", c.obj_label(m2))))
    })?;
    q1.cat = Arc::new(cat);
    Ok(q1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guards::Guards;
    use crate::qkt::monoidal::build_monoidal;
    use crate::ring::FiniteRing;

    fn me(n: usize, cap: usize) -> Arc<MonoidalCategory> {
        Arc::new(build_monoidal(&FiniteRing::field(2).unwrap(), n, cap, &Guards::default()).unwrap())
    }

    #[test]
    fn line_to_line() {
        let me = me(2, 2);
        let one = me.obj(&[1]).unwrap();
        let h = q2_hom(&me, one, one).unwrap();
        assert_eq!(h.objects.len(), 1);
        assert_eq!(h.num_components(), 1);
        let (t, cell) = h.terminal_decomposition(0);
        assert_eq!(t, 0);
        assert!(h.cat.is_identity(cell));
    }

    #[test]
    fn line_into_two_lines() {
        let me = me(2, 2);
        let (one, two) = (me.obj(&[1]).unwrap(), me.obj(&[1, 1]).unwrap());
        let h = q2_hom(&me, one, two).unwrap();
        // (1) sits in either slot; the other is absorbed by a or b.
        assert_eq!(h.num_components(), 2);
        for &t in &h.terminal {
            assert!(has_terminal_shape(&me, &h.objects[t as usize]));
        }
    }

    #[test]
    fn q1_is_a_category() {
        let me = me(2, 3);
        let q1 = q1_category(me.clone()).unwrap();
        let cert = q1.certificate();
        assert_eq!(cert.hom_categories, me.objects.len() * me.objects.len());
        let e = me.empty();
        assert_eq!(q1.cat.hom(e, e).len(), 1);
        // Hom₁(∅, (1)) has the two classes (1)⊛∅ and ∅⊛(1).
        assert_eq!(q1.cat.hom(e, me.obj(&[1]).unwrap()).len(), 2);
    }
}

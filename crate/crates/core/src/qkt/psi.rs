use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use super::linalg::PartialEpi;
use super::monoidal::{obj_label, GradedFlag, MonMor, MonoidalCategory};
use super::q2::{Q1Category, Triple};
use super::quillen::{QuillenQ, Span};
use crate::error::{Error, Result};
use crate::fincat::{is_fully_faithful, is_weakly_contractible, left_fiber, Fiber, FinFunctor};
use crate::guards::Guards;
use crate::ring::{enumerate_gl, quotient_map, Mat, Submodule};

/// How the choices a ↣ z and y ↠ b are made: `Canonical` sends the
/// canonical bases to the standard ones; `Twisted` post-composes both with
/// the last element of GL in enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChoicePolicy {
    Canonical,
    Twisted,
}

#[derive(Clone, Debug)]
pub struct PsiFunctor {
    pub q: Arc<QuillenQ>,
    pub q1: Arc<Q1Category>,
    pub functor: FinFunctor,
    /// Representatives chosen by the canonical policy.
    pub triples: Vec<Triple>,
    pub policies_agree: bool,
    pub representatives_terminal: bool,
    pub fully_faithful: bool,
}

pub fn psi_object(me: &MonoidalCategory, x: usize) -> Option<u32> {
    if x == 0 {
        Some(me.empty())
    } else {
        me.obj(&[x])
    }
}

fn twist(q: &QuillenQ, k: usize, policy: ChoicePolicy, guards: &Guards) -> Result<Mat> {
    Ok(match policy {
        ChoicePolicy::Canonical => Mat::identity(k),
        ChoicePolicy::Twisted => enumerate_gl(&q.ring, k, guards)?.pop().unwrap_or_else(|| Mat::identity(k)),
    })
}

/// (Ψ(a), Ψ(b), φ) for the span x ↞ z ↣ y: φ is the flag
/// 0 ⊂ a ⊂ z ⊂ y with graded pieces a, x, b, zero pieces dropped.
pub fn psi_triple(q: &QuillenQ, me: &MonoidalCategory, s: &Span, policy: ChoicePolicy, guards: &Guards) -> Result<Triple> {
    let ring = &q.ring;
    let missing = || Error::Consistency(format!("Ψ leaves the cap on a span {} → {}", s.x, s.y));
    let w = &s.epi.space;
    let d = w.num_gens();
    let (a, b) = (d - s.x, s.y - d);
    let mut pieces = Vec::new();
    if a > 0 {
        let ker = s.epi.kernel(ring);
        pieces.push(PartialEpi {
            space: ker,
            values: twist(q, a, policy, guards)?,
        });
    }
    if s.x > 0 {
        pieces.push(s.epi.clone());
    }
    if b > 0 {
        let qm = quotient_map(ring, w, &Submodule::whole(s.y))?;
        let images = qm.projection.mul(&twist(q, b, policy, guards)?, ring);
        pieces.push(PartialEpi::new(ring, &Mat::identity(s.y), &images));
    }
    let phi = if s.y == 0 {
        MonMor::identity(&[])
    } else {
        let flag = GradedFlag { n: s.y, pieces };
        MonMor {
            src: flag.graded_dims(),
            tgt: vec![s.y],
            theta: vec![0; flag.pieces.len()],
            flags: vec![flag],
        }
    };
    Ok(Triple {
        a: psi_object(me, a).ok_or_else(missing)?,
        b: psi_object(me, b).ok_or_else(missing)?,
        phi: me.mor(&phi).ok_or_else(missing)?,
    })
}

pub fn psi_functor(q: Arc<QuillenQ>, q1: Arc<Q1Category>, guards: &Guards) -> Result<PsiFunctor> {
    let me = &q1.me;
    let missing = |what: &str| Error::Consistency(format!("Ψ: {what}"));
    let obj_map = (0..=q.max_dim)
        .map(|x| psi_object(me, x).ok_or_else(|| missing("object outside M_E")))
        .collect::<Result<Vec<u32>>>()?;
    let mut mor_map = Vec::with_capacity(q.spans.len());
    let mut triples = Vec::with_capacity(q.spans.len());
    let mut policies_agree = true;
    let mut representatives_terminal = true;
    for s in &q.spans {
        let (px, py) = (obj_map[s.x], obj_map[s.y]);
        let t = psi_triple(&q, me, s, ChoicePolicy::Canonical, guards)?;
        let t2 = psi_triple(&q, me, s, ChoicePolicy::Twisted, guards)?;
        let class = q1.class_of(px, py, &t).ok_or_else(|| missing("triple not in Hom₂"))?;
        policies_agree &= q1.class_of(px, py, &t2) == Some(class);
        let h = &q1.homs[&(px, py)];
        let x = h.object(&t).ok_or_else(|| missing("triple not in Hom₂"))?;
        let comp = h.component[x as usize];
        representatives_terminal &=
            (0..h.objects.len() as u32).filter(|&y| h.component[y as usize] == comp).all(|y| h.cat.hom(y, x).len() == 1);
        mor_map.push(class);
        triples.push(t);
    }
    let functor = FinFunctor::new(q.cat.clone(), q1.cat.clone(), obj_map, mor_map)?;
    let fully_faithful = is_fully_faithful(&functor);
    Ok(PsiFunctor {
        q,
        q1,
        functor,
        triples,
        policies_agree,
        representatives_terminal,
        fully_faithful,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CommaCertificate {
    pub target: String,
    pub objects: usize,
    pub morphisms: usize,
    /// Object count of each C_{i₀}.
    pub pieces: Vec<usize>,
    pub covers: bool,
    pub terminal_objects: bool,
    pub intersections: bool,
    pub verdict: String,
    pub contractible: bool,
    pub depth: usize,
}

impl CommaCertificate {
    pub fn all_hold(&self) -> bool {
        self.covers && self.terminal_objects && self.intersections && self.contractible
    }
}

/// Builds Ψ↓m and checks the cover by the C_{i₀}, their terminal objects,
/// the pairwise intersections and weak contractibility up to `depth`.
pub fn comma_contractibility(psi: &PsiFunctor, m: u32, depth: usize, guards: &Guards) -> Result<(Fiber, CommaCertificate)> {
    let q1 = &psi.q1;
    let me = &q1.me;
    let q = &psi.q;
    let c1 = &q1.cat;
    let comma = left_fiber(&psi.functor, m);
    let pos: HashMap<(u32, u32), u32> = comma.objects.iter().enumerate().map(|(i, &o)| (o, i as u32)).collect();
    let list = me.objects[m as usize].clone();
    let missing = |what: &str| Error::Consistency(format!("Ψ↓{}: {what}", obj_label(&list)));
    let split = |k: usize| -> Result<u32> {
        // [m_{<k}, m_{≥k}, id] : ∅ → m
        let t = Triple {
            a: me.obj(&list[..k]).ok_or_else(|| missing("prefix"))?,
            b: me.obj(&list[k..]).ok_or_else(|| missing("suffix"))?,
            phi: me.cat.identity(m),
        };
        q1.class_of(me.empty(), m, &t).ok_or_else(|| missing("split class"))
    };
    let mut pieces: Vec<BTreeSet<u32>> = Vec::new();
    let mut terminal_objects = true;
    for i0 in 0..list.len() {
        let mi = list[i0];
        let single = me.obj(&[mi]).ok_or_else(|| missing("single part"))?;
        let t = Triple {
            a: me.obj(&list[..i0]).ok_or_else(|| missing("prefix"))?,
            b: me.obj(&list[i0 + 1..]).ok_or_else(|| missing("suffix"))?,
            phi: me.cat.identity(m),
        };
        let t_class = q1.class_of(single, m, &t).ok_or_else(|| missing("t_{i₀}"))?;
        let mut objs = BTreeSet::new();
        for x in 0..=q.max_dim as u32 {
            for s in q.cat.hom(x, mi as u32) {
                let f = c1.compose(t_class, psi.functor.mor(s));
                objs.insert(*pos.get(&(x, f)).ok_or_else(|| missing("C_{i₀} object not in the comma category"))?);
            }
        }
        let top = pos[&(mi as u32, t_class)];
        terminal_objects &= objs.iter().all(|&x| comma.cat.hom(x, top).len() == 1);
        pieces.push(objs);
    }
    let covered: BTreeSet<u32> = pieces.iter().flatten().copied().collect();
    let covers = if list.is_empty() {
        let id = pos.get(&(0, c1.identity(m))).copied();
        terminal_objects = id.is_some() && comma.cat.terminal_object().is_some() && {
            let t = id.unwrap();
            comma.cat.objects().all(|x| comma.cat.hom(x, t).len() == 1)
        };
        true
    } else {
        covered.len() == comma.cat.num_objects()
    };
    let mut intersections = true;
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let meet: Vec<u32> = pieces[i].intersection(&pieces[j]).copied().collect();
            let expected = if j == i + 1 { vec![pos[&(0, split(j)?)]] } else { Vec::new() };
            intersections &= meet == expected;
        }
    }
    let cert = is_weakly_contractible(&comma.cat, depth, guards)?;
    let out = CommaCertificate {
        target: obj_label(&list),
        objects: comma.cat.num_objects(),
        morphisms: comma.cat.num_morphisms(),
        pieces: pieces.iter().map(BTreeSet::len).collect(),
        covers,
        terminal_objects,
        intersections,
        contractible: cert.verdict.is_contractible(),
        verdict: format!("{:?} ({})", cert.verdict, cert.method),
        depth,
    };
    Ok((comma, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qkt::filt::build_filt_category;
    use crate::qkt::monoidal::build_monoidal;
    use crate::qkt::q2::q1_category;
    use crate::qkt::quillen::quillen_q;

    fn psi(n: usize, cap: usize) -> PsiFunctor {
        let g = Guards::default();
        let e = build_filt_category(2, n, &g).unwrap();
        let q = Arc::new(quillen_q(&e, &g).unwrap());
        let me = Arc::new(build_monoidal(&e.ring, n, cap, &g).unwrap());
        let q1 = Arc::new(q1_category(me).unwrap());
        psi_functor(q, q1, &g).unwrap()
    }

    #[test]
    fn psi_on_lines() {
        let p = psi(1, 2);
        let me = &p.q1.me;
        assert_eq!(p.functor.obj(0), me.empty());
        assert_eq!(p.functor.obj(1), me.obj(&[1]).unwrap());
        assert!(p.fully_faithful && p.policies_agree && p.representatives_terminal);
        for x in 0..2 {
            let id = p.q.cat.identity(x);
            assert_eq!(p.functor.mor(id), p.q1.cat.identity(p.functor.obj(x)));
        }
    }

    #[test]
    fn comma_over_small_targets() {
        let p = psi(1, 2);
        let me = p.q1.me.clone();
        let g = Guards::default();
        for target in [vec![], vec![1], vec![1, 1]] {
            let (_, cert) = comma_contractibility(&p, me.obj(&target).unwrap(), 3, &g).unwrap();
            assert!(cert.all_hold(), "{cert:?}");
        }
        let (_, cert) = comma_contractibility(&p, me.obj(&[1, 1]).unwrap(), 3, &g).unwrap();
        assert_eq!(cert.pieces.len(), 2);
    }
}

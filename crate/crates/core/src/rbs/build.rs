use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{check_regularity, group_category, CatBuilder, FinCat, FinFunctor, FiniteGroup, GroupAction, Poset};
use crate::guards::Guards;
use crate::ring::{enumerate_flags, enumerate_gl, FiniteRing, Flag, Mat};

/// Splittable flags of R^n with GL_n(R) acting on them.
#[derive(Clone, Debug)]
pub struct FlagAction {
    pub ring: FiniteRing,
    pub n: usize,
    /// Empty flag first.
    pub flags: Vec<Flag>,
    /// GL_n(R) in lexicographic order; group element i is `gl[i]`.
    pub gl: Vec<Mat>,
    pub action: GroupAction,
    flag_index: HashMap<Flag, u32>,
    gl_index: HashMap<Mat, u32>,
}

impl FlagAction {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.action.group
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.action.poset
    }

    pub fn flag_index(&self, f: &Flag) -> Option<u32> {
        self.flag_index.get(f).copied()
    }

    pub fn gl_index(&self, g: &Mat) -> Option<u32> {
        self.gl_index.get(g).copied()
    }

    #[inline]
    pub fn act(&self, g: u32, f: u32) -> u32 {
        self.action.act(g, f as usize) as u32
    }

    #[inline]
    pub fn leq(&self, a: u32, b: u32) -> bool {
        self.action.poset.leq(a as usize, b as usize)
    }
}

/// The refinement poset on splittable flags: `F <= G` iff F refines G, so
/// `[∅]` is the maximum.
pub fn flag_poset(ring: &FiniteRing, n: usize, guards: &Guards) -> Result<(Vec<Flag>, Poset)> {
    let flags = enumerate_flags(ring, n, guards)?;
    let labels = flags.iter().map(Flag::label).collect();
    let poset = Poset::new(labels, |a, b| flags[a].refines(&flags[b]))?;
    Ok((flags, poset))
}

/// GL_n(R) acting on the flag poset. The regularity condition
/// `F <= gF ⇒ gF = F` is verified.
pub fn gl_action(ring: &FiniteRing, n: usize, guards: &Guards) -> Result<FlagAction> {
    let (flags, poset) = flag_poset(ring, n, guards)?;
    let gl = enumerate_gl(ring, n, guards)?;
    guards.check("max_group_order", gl.len() as u64)?;
    if gl.windows(2).any(|w| w[0].data() >= w[1].data()) {
        return Err(Error::Consistency("GL enumeration is not in lexicographic order".into()));
    }
    let group = FiniteGroup::from_matrices(ring, &gl)?;
    let flag_index: HashMap<Flag, u32> = flags.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect();
    let gl_index: HashMap<Mat, u32> = gl.iter().enumerate().map(|(i, g)| (g.clone(), i as u32)).collect();
    let mut perm = Vec::with_capacity(gl.len());
    for g in &gl {
        let row = flags
            .iter()
            .map(|f| {
                flag_index
                    .get(&f.act(ring, g))
                    .copied()
                    .ok_or_else(|| Error::Consistency(format!("{g:?} maps {} outside the flag list", f.label())))
            })
            .collect::<Result<Vec<u32>>>()?;
        perm.push(row);
    }
    let action = GroupAction::new(Arc::new(group), Arc::new(poset), perm)?;
    check_regularity(&action)?;
    Ok(FlagAction {
        ring: ring.clone(),
        n,
        flags,
        gl,
        action,
        flag_index,
        gl_index,
    })
}

/// Morphism data: the coset `rep · U_src` from `src` to `tgt`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CosetMorphism {
    pub src: u32,
    pub tgt: u32,
    pub rep: u32,
}

/// RBS(R^n): objects are splittable flags, Hom(F, F′) is
/// `{g : gF <= F′} / U_F`.
#[derive(Clone, Debug)]
pub struct RbsCategory {
    pub setting: Arc<FlagAction>,
    pub cat: Arc<FinCat>,
    /// P_F per flag, sorted group elements.
    pub parabolic: Vec<Vec<u32>>,
    /// U_F per flag, sorted group elements.
    pub unipotent: Vec<Vec<u32>>,
    pub morphisms: Vec<CosetMorphism>,
    /// `canon[F][g]` is the least element of g·U_F.
    canon: Vec<Vec<u32>>,
    index: HashMap<(u32, u32, u32), u32>,
}

/// Elements of P_F acting trivially on every M_i/M_{i-1}, i.e.
/// `(g - 1) M_i ⊆ M_{i-1}` for the chain `0 = M_0 ⊂ ... ⊂ M_d = R^n`.
fn unipotent_radical(s: &FlagAction, f: usize, parabolic: &[u32]) -> Vec<u32> {
    let ring = &s.ring;
    let chain = s.flags[f].full_chain();
    let id = Mat::identity(s.n);
    parabolic
        .iter()
        .copied()
        .filter(|&g| {
            let dt = s.gl[g as usize].sub(&id, ring).transpose();
            chain.windows(2).all(|w| {
                let b = w[1].basis();
                (0..b.rows()).all(|r| w[0].contains_vec(ring, &Mat::vec_mul(b.row(r), &dt, ring)))
            })
        })
        .collect()
}

pub fn build_rbs(ring: &FiniteRing, n: usize, guards: &Guards) -> Result<RbsCategory> {
    let setting = Arc::new(gl_action(ring, n, guards)?);
    build_from_action(setting, guards)
}

pub fn build_from_action(setting: Arc<FlagAction>, guards: &Guards) -> Result<RbsCategory> {
    let s = &*setting;
    let group = s.group().clone();
    let (nf, ng) = (s.flags.len(), group.order());
    let mut parabolic = Vec::with_capacity(nf);
    let mut unipotent = Vec::with_capacity(nf);
    let mut canon = Vec::with_capacity(nf);
    for f in 0..nf {
        let p: Vec<u32> = (0..ng as u32).filter(|&g| s.act(g, f as u32) == f as u32).collect();
        let u = unipotent_radical(s, f, &p);
        let c: Vec<u32> = (0..ng as u32)
            .map(|g| u.iter().map(|&x| group.mul(g, x)).min().expect("U_F contains 1"))
            .collect();
        parabolic.push(p);
        unipotent.push(u);
        canon.push(c);
    }

    let mut morphisms = Vec::new();
    for f in 0..nf as u32 {
        let mut reps: Vec<u32> = canon[f as usize].clone();
        reps.sort_unstable();
        reps.dedup();
        let mut by_target: Vec<Vec<u32>> = vec![Vec::new(); nf];
        for &r in &reps {
            let gf = s.act(r, f);
            for t in 0..nf as u32 {
                if s.leq(gf, t) {
                    by_target[t as usize].push(r);
                }
            }
        }
        for (t, rs) in by_target.into_iter().enumerate() {
            for rep in rs {
                morphisms.push(CosetMorphism { src: f, tgt: t as u32, rep });
            }
        }
        guards.check("max_morphisms", morphisms.len() as u64)?;
    }
    let index: HashMap<(u32, u32, u32), u32> =
        morphisms.iter().enumerate().map(|(i, m)| ((m.src, m.tgt, m.rep), i as u32)).collect();

    let mut b = CatBuilder::new();
    for f in &s.flags {
        b.add_object(f.label());
    }
    for m in &morphisms {
        b.add_morphism(m.src, m.tgt, format!("{}U", group.label(m.rep)));
    }
    for f in 0..nf as u32 {
        b.set_identity(f, index[&(f, f, canon[f as usize][group.identity() as usize])]);
    }
    let cat = b.build(|p, q| {
        let (mp, mq) = (morphisms[p as usize], morphisms[q as usize]);
        let rep = canon[mq.src as usize][group.mul(mp.rep, mq.rep) as usize];
        index
            .get(&(mq.src, mp.tgt, rep))
            .copied()
            .ok_or_else(|| Error::Consistency("composite coset is not a morphism".into()))
    })?;
    let rbs = RbsCategory {
        setting,
        cat: Arc::new(cat),
        parabolic,
        unipotent,
        morphisms,
        canon,
        index,
    };
    rbs.check_hom_counts()?;
    rbs.check_composition()?;
    Ok(rbs)
}

impl RbsCategory {
    pub fn ring(&self) -> &FiniteRing {
        &self.setting.ring
    }

    pub fn rank(&self) -> usize {
        self.setting.n
    }

    pub fn flags(&self) -> &[Flag] {
        &self.setting.flags
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.setting.group()
    }

    /// Object id of `[∅]`.
    pub fn empty_flag(&self) -> u32 {
        0
    }

    pub fn canonical_rep(&self, f: u32, g: u32) -> u32 {
        self.canon[f as usize][g as usize]
    }

    /// The morphism `g U_src : src → tgt`, if `g·src <= tgt`.
    pub fn morphism(&self, src: u32, tgt: u32, g: u32) -> Option<u32> {
        self.index.get(&(src, tgt, self.canonical_rep(src, g))).copied()
    }

    pub fn automorphism_count(&self, f: u32) -> usize {
        self.cat.hom(f, f).len()
    }

    /// |Hom(F, F′)| · |U_F| = #{g : gF <= F′} for all pairs.
    pub fn check_hom_counts(&self) -> Result<()> {
        let s = &self.setting;
        let nf = s.flags.len();
        for f in 0..nf as u32 {
            let mut counts = vec![0usize; nf];
            for g in 0..s.gl.len() as u32 {
                let gf = s.act(g, f);
                for (t, c) in counts.iter_mut().enumerate() {
                    if s.leq(gf, t as u32) {
                        *c += 1;
                    }
                }
            }
            let u = self.unipotent[f as usize].len();
            for (t, &c) in counts.iter().enumerate() {
                let h = self.cat.hom(f, t as u32).len();
                if h * u != c {
                    return Err(Error::Consistency(format!(
                        "|Hom({f},{t})| = {h}, |U| = {u}, but {c} elements map {f} below {t}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// For every composable pair and every u ∈ U_{F′}, the product
    /// `rep_f · u · rep_g` lands in the composite coset.
    pub fn check_composition(&self) -> Result<()> {
        let c = &self.cat;
        let group = self.group();
        for g in c.morphisms() {
            let mg = self.morphisms[g as usize];
            for &f in c.out(mg.tgt) {
                let mf = self.morphisms[f as usize];
                let want = self.morphisms[c.compose(f, g) as usize].rep;
                for &u in &self.unipotent[mg.tgt as usize] {
                    let prod = group.mul(group.mul(mf.rep, u), mg.rep);
                    if self.canonical_rep(mg.src, prod) != want {
                        return Err(Error::Consistency(format!(
                            "composition depends on the representative: {f} ∘ {g} with u = {u}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn export(&self) -> RbsExport {
        let s = &self.setting;
        let c = &self.cat;
        RbsExport {
            ring: s.ring.spec().to_string(),
            n: s.n,
            objects: s
                .flags
                .iter()
                .enumerate()
                .map(|(i, f)| ExportObject {
                    label: f.label(),
                    members: f.to_int_rows(),
                    unipotent_order: self.unipotent[i].len(),
                    parabolic_order: self.parabolic[i].len(),
                })
                .collect(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| ExportMorphism {
                    src: m.src,
                    tgt: m.tgt,
                    representative: s.gl[m.rep as usize].to_int_rows(),
                })
                .collect(),
            identities: c.objects().map(|x| c.identity(x)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportObject {
    pub label: String,
    pub members: Vec<Vec<Vec<u32>>>,
    pub parabolic_order: usize,
    pub unipotent_order: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportMorphism {
    pub src: u32,
    pub tgt: u32,
    pub representative: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RbsExport {
    pub ring: String,
    pub n: usize,
    pub objects: Vec<ExportObject>,
    pub morphisms: Vec<ExportMorphism>,
    pub identities: Vec<u32>,
}

/// BGL_n(R) as a one-object category; morphism ids are GL indices.
pub fn bgl_category(setting: &FlagAction) -> FinCat {
    group_category(setting.group())
}

/// BGL(M) → RBS(M) at `[∅]`, where U is trivial.
pub fn bgl_inclusion(rbs: &RbsCategory) -> Result<FinFunctor> {
    let bgl = Arc::new(bgl_category(&rbs.setting));
    let e = rbs.empty_flag();
    let mors = bgl
        .morphisms()
        .map(|g| rbs.morphism(e, e, g).ok_or_else(|| Error::Consistency("GL element missing at [∅]".into())))
        .collect::<Result<Vec<u32>>>()?;
    FinFunctor::new(bgl, rbs.cat.clone(), vec![e], mors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::is_fully_faithful;

    fn rbs(spec: &str, n: usize) -> RbsCategory {
        build_rbs(&FiniteRing::from_str_spec(spec).unwrap(), n, &Guards::default()).unwrap()
    }

    #[test]
    fn rank_one_is_bgl1() {
        let r = rbs("F3", 1);
        assert_eq!((r.cat.num_objects(), r.cat.num_morphisms()), (1, 2));
    }

    #[test]
    fn f2_squared() {
        let r = rbs("F2", 2);
        assert_eq!(r.cat.num_objects(), 4);
        assert_eq!(r.automorphism_count(0), 6);
        for l in 1..4 {
            assert_eq!(r.cat.hom(l, 0).len(), 3);
            assert_eq!(r.automorphism_count(l), 1);
            for m in 1..4 {
                if m != l {
                    assert_eq!(r.cat.hom(l, m).len(), 1);
                }
            }
        }
        assert_eq!(r.cat.num_morphisms(), 24);
        assert!(r.cat.is_connected());
    }

    #[test]
    fn z4_squared() {
        let r = rbs("Z/4", 2);
        assert_eq!(r.cat.num_objects(), 7);
        assert_eq!(r.automorphism_count(0), 96);
        assert_eq!(r.unipotent[0], vec![r.group().identity()]);
    }

    #[test]
    fn automorphisms_are_levi_quotients() {
        let r = rbs("F3", 2);
        for f in r.cat.objects() {
            let (p, u) = (r.parabolic[f as usize].len(), r.unipotent[f as usize].len());
            assert_eq!(r.automorphism_count(f) * u, p);
        }
    }

    #[test]
    fn poset_shape() {
        let g = Guards::default();
        let (flags, p) = flag_poset(&FiniteRing::field(2).unwrap(), 3, &g).unwrap();
        assert_eq!(flags.len(), 36);
        assert_eq!(p.maximum(), Some(0));
    }

    #[test]
    fn bgl_embeds() {
        let r = rbs("F2", 2);
        let inc = bgl_inclusion(&r).unwrap();
        assert_eq!(inc.source().num_morphisms(), 6);
        assert!(is_fully_faithful(&inc));
        let z = rbs("F2", 0);
        assert_eq!((z.cat.num_objects(), z.cat.num_morphisms()), (1, 1));
    }

    #[test]
    fn export_round_trip() {
        let r = rbs("F2", 2);
        let json = serde_json::to_string(&r.export()).unwrap();
        assert!(json.contains("\"representative\""));
    }
}

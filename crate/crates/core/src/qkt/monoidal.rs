use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::linalg::PartialEpi;
use crate::error::{Error, Result};
use crate::fincat::{CatBuilder, FinCat};
use crate::guards::Guards;
use crate::ring::{enumerate_gl, FiniteRing, Mat};

/// A flag in F^n with identified associated graded: piece s is the
/// surjection V_s ↠ F^{m_s} whose kernel is V_{s-1}; the last V is F^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GradedFlag {
    pub n: usize,
    pub pieces: Vec<PartialEpi>,
}

impl GradedFlag {
    pub fn identity(n: usize) -> Self {
        GradedFlag {
            n,
            pieces: vec![PartialEpi::identity(n)],
        }
    }

    /// The flag spanned by consecutive row blocks of the invertible `h`,
    /// with each block sent to the standard basis.
    pub fn from_adapted_basis(ring: &FiniteRing, h: &Mat, blocks: &[usize]) -> Self {
        let n = h.cols();
        let mut pieces = Vec::with_capacity(blocks.len());
        let mut end = 0;
        for &m in blocks {
            let start = end;
            end += m;
            let rows = Mat::from_rows(n, &h.row_vecs()[..end]);
            let mut images = Mat::zeros(end, m);
            for k in 0..m {
                images.set(start + k, k, 1);
            }
            pieces.push(PartialEpi::new(ring, &rows, &images));
        }
        GradedFlag { n, pieces }
    }

    pub fn graded_dims(&self) -> Vec<usize> {
        self.pieces.iter().map(PartialEpi::target_dim).collect()
    }

    /// Kernel of each piece is the previous space and the top space is F^n.
    pub fn is_valid(&self, ring: &FiniteRing) -> bool {
        let mut prev = crate::ring::Submodule::zero(self.n);
        for p in &self.pieces {
            if p.target_dim() == 0 || !p.is_surjective(ring) || p.kernel(ring) != prev {
                return false;
            }
            prev = p.space.clone();
        }
        prev == crate::ring::Submodule::whole(self.n)
    }

    /// Merging: `self` has pieces π_j and `inner[j]` is a flag in the j-th
    /// graded piece; the result refines `self` by the preimages.
    pub fn merge(&self, ring: &FiniteRing, inner: &[&GradedFlag]) -> GradedFlag {
        let mut pieces = Vec::new();
        for (pi, y) in self.pieces.iter().zip(inner) {
            for rho in &y.pieces {
                pieces.push(pi.pull(ring, rho));
            }
        }
        GradedFlag { n: self.n, pieces }
    }
}

/// A morphism (m_i)_{i∈I} → (n_j)_{j∈J} of M_E: θ (stored as θ(i)) and one
/// graded flag per j.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MonMor {
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub theta: Vec<usize>,
    pub flags: Vec<GradedFlag>,
}

impl MonMor {
    pub fn identity(m: &[usize]) -> Self {
        MonMor {
            src: m.to_vec(),
            tgt: m.to_vec(),
            theta: (0..m.len()).collect(),
            flags: m.iter().map(|&d| GradedFlag::identity(d)).collect(),
        }
    }

    pub fn concat(&self, other: &MonMor) -> MonMor {
        let off = self.tgt.len();
        MonMor {
            src: [self.src.clone(), other.src.clone()].concat(),
            tgt: [self.tgt.clone(), other.tgt.clone()].concat(),
            theta: self.theta.iter().copied().chain(other.theta.iter().map(|&j| j + off)).collect(),
            flags: [self.flags.clone(), other.flags.clone()].concat(),
        }
    }

    /// `self ∘ g`, merging flags over each target slot.
    pub fn compose(&self, ring: &FiniteRing, g: &MonMor) -> MonMor {
        let theta = g.theta.iter().map(|&j| self.theta[j]).collect();
        let flags = self
            .flags
            .iter()
            .enumerate()
            .map(|(l, x)| {
                let inner: Vec<&GradedFlag> =
                    (0..g.tgt.len()).filter(|&j| self.theta[j] == l).map(|j| &g.flags[j]).collect();
                x.merge(ring, &inner)
            })
            .collect();
        MonMor {
            src: g.src.clone(),
            tgt: self.tgt.clone(),
            theta,
            flags,
        }
    }

    /// The restriction (m_i)_{θ⁻¹(j)} → (n_j).
    pub fn restrict(&self, j: usize) -> MonMor {
        let src: Vec<usize> = (0..self.src.len()).filter(|&i| self.theta[i] == j).map(|i| self.src[i]).collect();
        MonMor {
            theta: vec![0; src.len()],
            src,
            tgt: vec![self.tgt[j]],
            flags: vec![self.flags[j].clone()],
        }
    }

    /// Restriction to the target slots `lo..hi`.
    pub fn restrict_range(&self, lo: usize, hi: usize) -> MonMor {
        let mut out = MonMor::identity(&[]);
        for j in lo..hi {
            out = out.concat(&self.restrict(j));
        }
        out
    }
}

/// M_E for E = Vect(F_q)_{<=N}, truncated to lists of total dimension at
/// most `cap`. The truncation is a union of components since morphisms
/// preserve total dimension.
#[derive(Clone, Debug)]
pub struct MonoidalCategory {
    pub ring: FiniteRing,
    pub max_dim: usize,
    pub cap: usize,
    pub objects: Vec<Vec<usize>>,
    pub morphisms: Vec<MonMor>,
    pub cat: Arc<FinCat>,
    obj_index: HashMap<Vec<usize>, u32>,
    mor_index: HashMap<MonMor, u32>,
}

fn lists(max_part: usize, total: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=max_part.min(total) {
        for rest in lists(max_part, total - first) {
            let mut l = vec![first];
            l.extend(rest);
            out.push(l);
        }
    }
    out
}

pub fn obj_label(m: &[usize]) -> String {
    if m.is_empty() {
        "∅".into()
    } else {
        format!("({})", m.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Blocks of `src` summing to each entry of `tgt`, if they exist.
fn partition(src: &[usize], tgt: &[usize]) -> Option<Vec<usize>> {
    let mut theta = Vec::with_capacity(src.len());
    let mut j = 0;
    let mut acc = 0;
    for &m in src {
        if j >= tgt.len() {
            return None;
        }
        acc += m;
        theta.push(j);
        if acc == tgt[j] {
            j += 1;
            acc = 0;
        } else if acc > tgt[j] {
            return None;
        }
    }
    (j == tgt.len() && acc == 0).then_some(theta)
}

pub fn build_monoidal(ring: &FiniteRing, max_dim: usize, cap: usize, guards: &Guards) -> Result<MonoidalCategory> {
    guards.check("max_total_dim", cap as u64)?;
    let objects: Vec<Vec<usize>> = (0..=cap).flat_map(|t| lists(max_dim, t)).collect();
    let obj_index: HashMap<Vec<usize>, u32> = objects.iter().enumerate().map(|(i, o)| (o.clone(), i as u32)).collect();
    let gl: Vec<Vec<Mat>> = (0..=max_dim).map(|k| enumerate_gl(ring, k, guards)).collect::<Result<_>>()?;
    let mut flag_cache: HashMap<Vec<usize>, Vec<GradedFlag>> = HashMap::new();
    let mut flags_for = |blocks: &[usize]| -> Vec<GradedFlag> {
        flag_cache
            .entry(blocks.to_vec())
            .or_insert_with(|| {
                let n: usize = blocks.iter().sum();
                let mut seen = HashMap::new();
                let mut out = Vec::new();
                for h in &gl[n] {
                    let f = GradedFlag::from_adapted_basis(ring, h, blocks);
                    if seen.insert(f.clone(), ()).is_none() {
                        out.push(f);
                    }
                }
                out
            })
            .clone()
    };
    let mut morphisms = Vec::new();
    for s in &objects {
        for t in &objects {
            let Some(theta) = partition(s, t) else { continue };
            let mut partial: Vec<Vec<GradedFlag>> = vec![Vec::new()];
            for j in 0..t.len() {
                let blocks: Vec<usize> = (0..s.len()).filter(|&i| theta[i] == j).map(|i| s[i]).collect();
                let options = flags_for(&blocks);
                let mut next = Vec::with_capacity(partial.len() * options.len());
                for p in &partial {
                    for f in &options {
                        let mut q = p.clone();
                        q.push(f.clone());
                        next.push(q);
                    }
                }
                partial = next;
            }
            for flags in partial {
                morphisms.push(MonMor {
                    src: s.clone(),
                    tgt: t.clone(),
                    theta: theta.clone(),
                    flags,
                });
            }
            guards.check("max_morphisms", morphisms.len() as u64)?;
        }
    }
    let mor_index: HashMap<MonMor, u32> = morphisms.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
    let mut b = CatBuilder::new();
    for o in &objects {
        b.add_object(obj_label(o));
    }
    let mut counter: HashMap<(u32, u32), usize> = HashMap::new();
    for m in &morphisms {
        let (s, t) = (obj_index[&m.src], obj_index[&m.tgt]);
        let k = counter.entry((s, t)).or_insert(0);
        b.add_morphism(s, t, format!("{}→{}#{}", obj_label(&m.src), obj_label(&m.tgt), k));
        *k += 1;
    }
    for o in &objects {
        b.set_identity(obj_index[o], mor_index[&MonMor::identity(o)]);
    }
    let cat = b.build(|f, g| {
        let c = morphisms[f as usize].compose(ring, &morphisms[g as usize]);
        mor_index
            .get(&c)
            .copied()
            .ok_or_else(|| Error::Consistency("merged flag is not in normal form".into()))
    })?;
    Ok(MonoidalCategory {
        ring: ring.clone(),
        max_dim,
        cap,
        objects,
        morphisms,
        cat: Arc::new(cat),
        obj_index,
        mor_index,
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct MonoidalCertificate {
    pub unit_and_associativity: u64,
    pub interchange: u64,
    pub monomorphism: u64,
    pub complete_decomposition: u64,
}

impl MonoidalCategory {
    pub fn obj(&self, m: &[usize]) -> Option<u32> {
        self.obj_index.get(m).copied()
    }

    pub fn mor(&self, m: &MonMor) -> Option<u32> {
        self.mor_index.get(m).copied()
    }

    pub fn empty(&self) -> u32 {
        0
    }

    pub fn total(&self, x: u32) -> usize {
        self.objects[x as usize].iter().sum()
    }

    pub fn concat_obj(&self, a: u32, b: u32) -> Option<u32> {
        self.obj(&[self.objects[a as usize].clone(), self.objects[b as usize].clone()].concat())
    }

    pub fn concat_mor(&self, f: u32, g: u32) -> Option<u32> {
        self.mor(&self.morphisms[f as usize].concat(&self.morphisms[g as usize]))
    }

    /// Unit and associativity of ⊛, the interchange law, cancellation
    /// (every morphism is a monomorphism) and complete decomposition, all
    /// exhaustively within the cap.
    pub fn check(&self) -> Result<MonoidalCertificate> {
        let c = &self.cat;
        let mut cert = MonoidalCertificate::default();
        let fail = |what: &str| Err(Error::Consistency(format!("M_E: {what}")));
        let n = c.num_morphisms();
        let table: Vec<Vec<Option<u32>>> = c
            .morphisms()
            .map(|f| c.morphisms().map(|g| self.concat_mor(f, g)).collect())
            .collect();
        let cat_of = |f: u32, g: u32| table[f as usize][g as usize];
        let id_empty = c.identity(self.empty());
        for f in c.morphisms() {
            cert.unit_and_associativity += 1;
            if cat_of(id_empty, f) != Some(f) || cat_of(f, id_empty) != Some(f) {
                return fail("∅ is not a strict unit");
            }
        }
        for f in 0..n {
            for g in 0..n {
                let Some(fg) = table[f][g] else { continue };
                for h in 0..n {
                    let Some(gh) = table[g][h] else { continue };
                    cert.unit_and_associativity += 1;
                    if table[fg as usize][h] != table[f][gh as usize] {
                        return fail("⊛ is not associative");
                    }
                }
            }
        }
        for f in c.morphisms() {
            for g in c.morphisms() {
                let Some(fg) = cat_of(f, g) else { continue };
                for &f2 in c.out(c.tgt(f)) {
                    for &g2 in c.out(c.tgt(g)) {
                        cert.interchange += 1;
                        let lhs = cat_of(c.compose(f2, f), c.compose(g2, g));
                        let rhs = cat_of(f2, g2).map(|a| c.compose(a, fg));
                        if lhs != rhs {
                            return fail("⊛ is not a functor");
                        }
                    }
                }
            }
        }
        let mut into: Vec<Vec<u32>> = vec![Vec::new(); c.num_objects()];
        for g in c.morphisms() {
            into[c.tgt(g) as usize].push(g);
        }
        for f in c.morphisms() {
            let mut seen = HashMap::new();
            for &g in &into[c.src(f) as usize] {
                cert.monomorphism += 1;
                if let Some(h) = seen.insert((c.src(g), c.compose(f, g)), g) {
                    if h != g {
                        return fail("a morphism is not a monomorphism");
                    }
                }
            }
        }
        for m in &self.morphisms {
            cert.complete_decomposition += 1;
            if m.restrict_range(0, m.tgt.len()) != *m {
                return fail("complete decomposition fails");
            }
            if m.flags.iter().any(|f| !f.is_valid(&self.ring)) {
                return fail("invalid graded flag");
            }
        }
        Ok(cert)
    }
}

/// Dimensions of the graded pieces of a flag.
pub fn graded_dims(flag: &crate::ring::Flag) -> Vec<usize> {
    flag.full_chain().windows(2).map(|w| w[1].num_gens() - w[0].num_gens()).collect()
}

/// Hom-set sizes of RBS(F_q^n) against those of M_E between the associated
/// gradeds; returns (pairs compared, pairs that agree).
pub fn compare_with_rbs(rbs: &crate::rbs::RbsCategory, me: &MonoidalCategory) -> Result<(u64, u64)> {
    let dims: Vec<u32> = rbs
        .flags()
        .iter()
        .map(|f| {
            me.obj(&graded_dims(f))
                .ok_or_else(|| Error::Consistency(format!("associated graded of {} is outside the cap", f.label())))
        })
        .collect::<Result<_>>()?;
    let (mut total, mut agree) = (0, 0);
    for f in rbs.cat.objects() {
        for g in rbs.cat.objects() {
            total += 1;
            if rbs.cat.hom(f, g).len() == me.cat.hom(dims[f as usize], dims[g as usize]).len() {
                agree += 1;
            }
        }
    }
    Ok((total, agree))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(q: u32, n: usize, cap: usize) -> MonoidalCategory {
        build_monoidal(&FiniteRing::field(q).unwrap(), n, cap, &Guards::default()).unwrap()
    }

    #[test]
    fn two_lines_into_a_plane() {
        let me = m(2, 2, 2);
        let (s, t) = (me.obj(&[1, 1]).unwrap(), me.obj(&[2]).unwrap());
        assert_eq!(me.cat.hom(s, t).len(), 3);
        assert_eq!(me.cat.hom(t, s).len(), 0);
        assert_eq!(me.cat.hom(s, s).len(), 1);
        assert_eq!(me.cat.hom(t, t).len(), 6);
    }

    #[test]
    fn hom_sizes_match_rbs() {
        let g = Guards::default();
        for (q, n) in [(2, 2), (3, 2), (2, 3)] {
            let r = FiniteRing::field(q).unwrap();
            let rbs = crate::rbs::build_rbs(&r, n, &g).unwrap();
            let me = build_monoidal(&r, n, n, &g).unwrap();
            let (total, agree) = compare_with_rbs(&rbs, &me).unwrap();
            assert_eq!(total, agree, "q = {q}, n = {n}");
        }
    }

    #[test]
    fn monoidal_laws() {
        let me = m(2, 2, 3);
        let cert = me.check().unwrap();
        assert!(cert.monomorphism > 0 && cert.interchange > 0);
    }

    #[test]
    fn merging_matches_block_matrices() {
        // A flag with graded (a_1, ..., a_k) is h·U for h ∈ GL_n; merging is
        // h · diag(g_j).
        let r = FiniteRing::field(2).unwrap();
        let me = m(2, 3, 3);
        let gl3 = enumerate_gl(&r, 3, &Guards::default()).unwrap();
        let gl2 = enumerate_gl(&r, 2, &Guards::default()).unwrap();
        for h in gl3.iter().step_by(7) {
            for g in &gl2 {
                let outer = MonMor {
                    src: vec![2, 1],
                    tgt: vec![3],
                    theta: vec![0, 0],
                    flags: vec![GradedFlag::from_adapted_basis(&r, h, &[2, 1])],
                };
                let inner = MonMor {
                    src: vec![1, 1, 1],
                    tgt: vec![2, 1],
                    theta: vec![0, 0, 1],
                    flags: vec![GradedFlag::from_adapted_basis(&r, g, &[1, 1]), GradedFlag::identity(1)],
                };
                let mut d = Mat::identity(3);
                for i in 0..2 {
                    for j in 0..2 {
                        d.set(i, j, g.get(i, j));
                    }
                }
                let direct = GradedFlag::from_adapted_basis(&r, &d.mul(h, &r), &[1, 1, 1]);
                let merged = outer.compose(&r, &inner);
                assert_eq!(merged.flags[0], direct);
                assert!(me.mor(&merged).is_some());
            }
        }
    }
}

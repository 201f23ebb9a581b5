use std::sync::Arc;

use serde::Serialize;

use super::linalg::{rank, solve};
use crate::error::{Error, Result};
use crate::fincat::{CatBuilder, FinCat};
use crate::guards::Guards;
use crate::ring::{all_vectors, enumerate_gl, FiniteRing, Mat};

/// Skeletal Vect(F_q)_{<=N}: objects 0..=N, a morphism x → y is a y × x
/// matrix acting on column vectors.
#[derive(Clone, Debug)]
pub struct FiltCategory {
    pub ring: FiniteRing,
    pub q: u32,
    pub max_dim: usize,
    pub cat: Arc<FinCat>,
    /// Matrix of each morphism.
    pub maps: Vec<Mat>,
    pub axioms: AxiomCertificate,
}

/// Number of instances examined per axiom; `holds` is the conjunction.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomCertificate {
    pub checked: [u64; 6],
    pub holds: [bool; 6],
}

impl AxiomCertificate {
    pub fn all_hold(&self) -> bool {
        self.holds.iter().all(|&h| h)
    }
}

fn all_matrices(ring: &FiniteRing, rows: usize, cols: usize) -> Vec<Mat> {
    if rows == 0 || cols == 0 {
        return vec![Mat::zeros(rows, cols)];
    }
    all_vectors(ring, rows * cols).into_iter().map(|v| Mat::new(rows, cols, v)).collect()
}

impl FiltCategory {
    pub fn is_mono(&self, m: &Mat) -> bool {
        rank(&self.ring, m) == m.cols()
    }

    pub fn is_epi(&self, m: &Mat) -> bool {
        rank(&self.ring, m) == m.rows()
    }

    /// `a ↣ b ↠ c` is short exact: i injective, p surjective, p ∘ i = 0 and
    /// dim b = dim a + dim c.
    pub fn is_short_exact(&self, i: &Mat, p: &Mat) -> bool {
        i.rows() == p.cols()
            && self.is_mono(i)
            && self.is_epi(p)
            && p.mul(i, &self.ring).is_zero()
            && p.cols() == i.cols() + p.rows()
    }

    fn mats(&self, x: usize, y: usize) -> impl Iterator<Item = &Mat> {
        let c = &self.cat;
        c.hom(x as u32, y as u32).into_iter().map(move |m| &self.maps[m as usize])
    }
}

pub fn build_filt_category(q: u32, max_dim: usize, guards: &Guards) -> Result<FiltCategory> {
    let ring = FiniteRing::field(q)?;
    let mut total = 0u64;
    for x in 0..=max_dim {
        for y in 0..=max_dim {
            total += (q as u64).saturating_pow((x * y) as u32);
        }
    }
    guards.check("max_morphisms", total)?;
    let mut b = CatBuilder::new();
    for x in 0..=max_dim {
        b.add_object(x.to_string());
    }
    let mut maps = Vec::new();
    let mut index = std::collections::HashMap::new();
    for x in 0..=max_dim {
        for y in 0..=max_dim {
            for m in all_matrices(&ring, y, x) {
                let id = b.add_morphism(x as u32, y as u32, format!("{m:?}"));
                index.insert((x, y, m.clone()), id);
                maps.push(m);
            }
        }
    }
    for x in 0..=max_dim {
        b.set_identity(x as u32, index[&(x, x, Mat::identity(x))]);
    }
    let srcs: Vec<usize> = maps.iter().map(Mat::cols).collect();
    let cat = b.build(|f, g| {
        let (mf, mg) = (&maps[f as usize], &maps[g as usize]);
        Ok(index[&(srcs[g as usize], mf.rows(), mf.mul(mg, &ring))])
    })?;
    let mut e = FiltCategory {
        ring,
        q,
        max_dim,
        cat: Arc::new(cat),
        maps,
        axioms: AxiomCertificate {
            checked: [0; 6],
            holds: [true; 6],
        },
    };
    e.axioms = check_axioms(&e, guards)?;
    Ok(e)
}

/// Exhaustive check of the six axioms of a category with filtrations.
fn check_axioms(e: &FiltCategory, guards: &Guards) -> Result<AxiomCertificate> {
    let ring = &e.ring;
    let n = e.max_dim;
    let mut checked = [0u64; 6];
    let mut holds = [true; 6];
    let gl: Vec<Vec<Mat>> = (0..=n).map(|k| enumerate_gl(ring, k, guards)).collect::<Result<_>>()?;
    let mut ses: Vec<(Mat, Mat)> = Vec::new();
    for a in 0..=n {
        for bdim in a..=n {
            let c = bdim - a;
            for i in e.mats(a, bdim) {
                for p in e.mats(bdim, c) {
                    if e.is_short_exact(i, p) {
                        ses.push((i.clone(), p.clone()));
                    }
                }
            }
        }
    }
    // 1: closed under isomorphisms of the middle term and the ends.
    for (i, p) in &ses {
        let (a, b, c) = (i.cols(), i.rows(), p.rows());
        for g in &gl[b] {
            let ginv = g.inverse(ring).expect("invertible");
            for ga in &gl[a] {
                for gc in &gl[c] {
                    let i2 = g.mul(i, ring).mul(ga, ring);
                    let p2 = gc.mul(p, ring).mul(&ginv, ring);
                    checked[0] += 1;
                    holds[0] &= e.is_short_exact(&i2, &p2);
                }
            }
        }
    }
    // 2: 0 → a = a and a = a → 0.
    for a in 0..=n {
        checked[1] += 2;
        holds[1] &= e.is_short_exact(&Mat::zeros(a, 0), &Mat::identity(a));
        holds[1] &= e.is_short_exact(&Mat::identity(a), &Mat::zeros(0, a));
    }
    // 3: composites of admissible monos / epis.
    for x in 0..=n {
        for y in x..=n {
            for z in y..=n {
                for f in e.mats(x, y).filter(|m| e.is_mono(m)) {
                    for g in e.mats(y, z).filter(|m| e.is_mono(m)) {
                        checked[2] += 1;
                        holds[2] &= e.is_mono(&g.mul(f, ring));
                    }
                }
                for f in e.mats(z, y).filter(|m| e.is_epi(m)) {
                    for g in e.mats(y, x).filter(|m| e.is_epi(m)) {
                        checked[2] += 1;
                        holds[2] &= e.is_epi(&g.mul(f, ring));
                    }
                }
            }
        }
    }
    // 4: in every sequence, im i = ker p.
    for (i, p) in &ses {
        checked[3] += 1;
        let ker_dim = p.cols() - rank(ring, p);
        holds[3] &= ker_dim == i.cols() && p.mul(i, ring).is_zero();
    }
    // 5: pullback of p: b ↠ c along j: c′ ↣ c is an admissible epi b′ ↠ c′
    // with b′ = p⁻¹(j(c′)) of dimension dim ker p + dim c′.
    for (_, p) in &ses {
        let (b, c) = (p.cols(), p.rows());
        for c2 in 0..=c {
            for j in e.mats(c2, c).filter(|m| e.is_mono(m)) {
                checked[4] += 1;
                let dim = (b - c) + c2;
                let lifts = (0..c2).all(|k| {
                    let col: Vec<u8> = (0..c).map(|r| j.get(r, k)).collect();
                    solve(ring, p, &col).is_some()
                });
                holds[4] &= lifts && dim <= n;
            }
        }
    }
    // 6: pushout of i: a ↣ b along q: a ↠ a′ is an admissible mono
    // a′ ↣ (b ⊕ a′)/a of dimension dim b + dim a′ - dim a.
    for (i, _) in &ses {
        let (a, b) = (i.cols(), i.rows());
        for a2 in 0..=a {
            for qm in e.mats(a, a2).filter(|m| e.is_epi(m)) {
                checked[5] += 1;
                // Relations (i x, -q x) span an a-dimensional subspace of b ⊕ a′.
                let mut rel = Mat::zeros(b + a2, a);
                for k in 0..a {
                    for r in 0..b {
                        rel.set(r, k, i.get(r, k));
                    }
                    for r in 0..a2 {
                        rel.set(b + r, k, ring.neg(qm.get(r, k)));
                    }
                }
                let injective_on_a2 = rank(ring, &rel) == a;
                holds[5] &= injective_on_a2 && b + a2 - a <= n;
            }
        }
    }
    if !holds.iter().all(|&h| h) {
        return Err(Error::Consistency(format!("axioms of a category with filtrations fail: {holds:?}")));
    }
    Ok(AxiomCertificate { checked, holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vect_f2_one() {
        let e = build_filt_category(2, 1, &Guards::default()).unwrap();
        assert_eq!(e.cat.num_morphisms(), 5);
        assert_eq!(e.cat.hom(1, 1).len(), 2);
        assert!(e.axioms.all_hold());
    }

    #[test]
    fn vect_f2_two() {
        let e = build_filt_category(2, 2, &Guards::default()).unwrap();
        let counts: Vec<usize> = (0..3u32)
            .flat_map(|x| (0..3u32).map(move |y| (x, y)))
            .map(|(x, y)| e.cat.hom(x, y).len())
            .collect();
        assert_eq!(counts, vec![1, 1, 1, 1, 2, 4, 1, 4, 16]);
        assert!(e.axioms.checked.iter().all(|&c| c > 0));
    }
}

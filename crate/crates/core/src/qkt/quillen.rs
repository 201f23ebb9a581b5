use std::collections::HashMap;
use std::sync::Arc;

use super::filt::FiltCategory;
use super::linalg::{rank, PartialEpi};
use crate::error::{Error, Result};
use crate::fincat::{CatBuilder, FinCat};
use crate::guards::Guards;
use crate::ring::{all_vectors, enumerate_submodules, FiniteRing, Mat};

/// A morphism x → y of Q(E), the class of x ↞ z ↣ y, stored as the image
/// W of z in F^y together with the induced surjection W ↠ F^x.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    pub x: usize,
    pub y: usize,
    pub epi: PartialEpi,
}

#[derive(Clone, Debug)]
pub struct QuillenQ {
    pub ring: FiniteRing,
    pub max_dim: usize,
    pub cat: Arc<FinCat>,
    pub spans: Vec<Span>,
    index: HashMap<Span, u32>,
}

impl QuillenQ {
    pub fn span_id(&self, s: &Span) -> Option<u32> {
        self.index.get(s).copied()
    }

    /// Class of the span with epi `e: z → x` (x × z) and mono `m: z → y`
    /// (y × z), both acting on column vectors.
    pub fn canonical_span(&self, e: &Mat, m: &Mat) -> Option<u32> {
        if rank(&self.ring, m) != m.cols() || rank(&self.ring, e) != e.rows() {
            return None;
        }
        let epi = PartialEpi::new(&self.ring, &m.transpose(), &e.transpose());
        self.span_id(&Span {
            x: e.rows(),
            y: m.rows(),
            epi,
        })
    }

    /// `g ∘ f` by pullback.
    pub fn compose_spans(&self, g: &Span, f: &Span) -> Span {
        Span {
            x: f.x,
            y: g.y,
            epi: g.epi.pull(&self.ring, &f.epi),
        }
    }
}

fn all_values(ring: &FiniteRing, rows: usize, cols: usize) -> Vec<Mat> {
    if rows == 0 || cols == 0 {
        return vec![Mat::zeros(rows, cols)];
    }
    all_vectors(ring, rows * cols).into_iter().map(|v| Mat::new(rows, cols, v)).collect()
}

pub fn quillen_q(e: &FiltCategory, guards: &Guards) -> Result<QuillenQ> {
    let ring = e.ring.clone();
    let n = e.max_dim;
    let mut spans = Vec::new();
    for x in 0..=n {
        for y in 0..=n {
            for w in enumerate_submodules(&ring, y, guards)? {
                let d = w.num_gens();
                if d < x {
                    continue;
                }
                for values in all_values(&ring, d, x) {
                    if rank(&ring, &values) == x {
                        spans.push(Span {
                            x,
                            y,
                            epi: PartialEpi {
                                space: w.clone(),
                                values,
                            },
                        });
                    }
                }
            }
            guards.check("max_morphisms", spans.len() as u64)?;
        }
    }
    let index: HashMap<Span, u32> = spans.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
    let mut b = CatBuilder::new();
    for x in 0..=n {
        b.add_object(x.to_string());
    }
    for s in &spans {
        b.add_morphism(s.x as u32, s.y as u32, format!("{:?}|{:?}", s.epi.space.basis(), s.epi.values));
    }
    for x in 0..=n {
        let id = Span {
            x,
            y: x,
            epi: PartialEpi::identity(x),
        };
        b.set_identity(x as u32, index[&id]);
    }
    let cat = b.build(|g, f| {
        let (sg, sf) = (&spans[g as usize], &spans[f as usize]);
        let c = Span {
            x: sf.x,
            y: sg.y,
            epi: sg.epi.pull(&ring, &sf.epi),
        };
        index
            .get(&c)
            .copied()
            .ok_or_else(|| Error::Consistency("pullback span is not canonical".into()))
    })?;
    Ok(QuillenQ {
        ring,
        max_dim: n,
        cat: Arc::new(cat),
        spans,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qkt::filt::build_filt_category;
    use crate::ring::enumerate_gl;

    fn q(qq: u32, n: usize) -> QuillenQ {
        let g = Guards::default();
        quillen_q(&build_filt_category(qq, n, &g).unwrap(), &g).unwrap()
    }

    #[test]
    fn hom_counts_dim_one() {
        let c = q(2, 1);
        let counts: Vec<usize> = [(0, 0), (0, 1), (1, 0), (1, 1)].iter().map(|&(x, y)| c.cat.hom(x, y).len()).collect();
        assert_eq!(counts, vec![1, 2, 0, 1]);
        let c3 = q(3, 1);
        assert_eq!(c3.cat.hom(1, 1).len(), 2);
    }

    #[test]
    fn spans_are_classes_under_middle_automorphisms() {
        let c = q(2, 2);
        let r = &c.ring;
        let gl2 = enumerate_gl(r, 2, &Guards::default()).unwrap();
        // x = 1, z = 2, y = 2: every reparametrisation of z gives the same class.
        let e = Mat::new(1, 2, vec![1, 0]);
        let m = Mat::identity(2);
        let base = c.canonical_span(&e, &m).unwrap();
        for g in &gl2 {
            assert_eq!(c.canonical_span(&e.mul(g, r), &m.mul(g, r)), Some(base));
        }
    }
}

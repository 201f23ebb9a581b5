use serde::{Deserialize, Serialize};

use super::{FiniteRing, Mat};
use crate::error::{Error, Result};

/// Howell normal form of the row span of `m` (RREF over a field).
///
/// Rows are in echelon form, every pivot equals `pi^v`, entries above a
/// pivot are reduced modulo that pivot, and after each pivot the
/// annihilator multiple `pi^(L-v) * row` is fed back so that the rows
/// starting at any column span the whole sub-span vanishing before it.
pub fn howell_form(ring: &FiniteRing, m: &Mat) -> Mat {
    let n = m.cols();
    let len = ring.length();
    let mut active: Vec<Vec<u8>> = m.row_vecs().into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    let mut out: Vec<(usize, u32, Vec<u8>)> = Vec::new();
    for c in 0..n {
        let best = active
            .iter()
            .enumerate()
            .filter(|(_, r)| r[c] != 0)
            .min_by_key(|(i, r)| (ring.val(r[c]), *i))
            .map(|(i, _)| i);
        let Some(bi) = best else { continue };
        let mut piv = active.remove(bi);
        let v = ring.val(piv[c]);
        let s = ring.inv(ring.unit_part(piv[c])).unwrap();
        for x in piv.iter_mut() {
            *x = ring.mul(*x, s);
        }
        for row in active.iter_mut() {
            if row[c] != 0 {
                let (q, _) = ring.divmod_pi_pow(row[c], v);
                axpy(ring, row, ring.neg(q), &piv);
            }
        }
        if v > 0 {
            let t = ring.pi_pow(len - v);
            let pushed: Vec<u8> = piv.iter().map(|&x| ring.mul(x, t)).collect();
            active.push(pushed);
        }
        active.retain(|r| r.iter().any(|&x| x != 0));
        out.push((c, v, piv));
    }
    debug_assert!(active.is_empty());
    for r in 0..out.len() {
        let (c, v) = (out[r].0, out[r].1);
        for i in 0..r {
            let (q, _) = ring.divmod_pi_pow(out[i].2[c], v);
            if q != 0 {
                let pr = out[r].2.clone();
                axpy(ring, &mut out[i].2, ring.neg(q), &pr);
            }
        }
    }
    let rows: Vec<Vec<u8>> = out.into_iter().map(|(_, _, r)| r).collect();
    Mat::from_rows(n, &rows)
}

/// `y += a * x`
fn axpy(ring: &FiniteRing, y: &mut [u8], a: u8, x: &[u8]) {
    if a == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = ring.add(*yi, ring.mul(a, xi));
    }
}

fn leading(row: &[u8]) -> Option<usize> {
    row.iter().position(|&x| x != 0)
}

/// Rank of the reduction modulo the maximal ideal.
pub fn residue_rank(ring: &FiniteRing, rows: &[Vec<u8>]) -> usize {
    if ring.is_field() {
        let n = rows.first().map_or(0, |r| r.len());
        return howell_form(ring, &Mat::from_rows(n, rows)).rows();
    }
    let p = ring.characteristic() as u64;
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| ring.residue(x) as u64).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, pr);
        let inv = modpow(m[rank][c], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p * p - f * m[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// A submodule of R^n held by its canonical generating matrix; equality is
/// equality of canonical matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Submodule {
    n: usize,
    basis: Mat,
}

impl Submodule {
    pub fn span(ring: &FiniteRing, gens: &Mat) -> Self {
        Submodule {
            n: gens.cols(),
            basis: howell_form(ring, gens),
        }
    }

    pub fn from_rows(ring: &FiniteRing, n: usize, rows: &[Vec<u8>]) -> Self {
        Submodule::span(ring, &Mat::from_rows(n, rows))
    }

    pub fn zero(n: usize) -> Self {
        Submodule {
            n,
            basis: Mat::zeros(0, n),
        }
    }

    pub fn whole(n: usize) -> Self {
        Submodule {
            n,
            basis: Mat::identity(n),
        }
    }

    /// Wraps an already canonical matrix; checked.
    pub fn from_canonical(ring: &FiniteRing, basis: Mat) -> Result<Self> {
        let c = howell_form(ring, &basis);
        if c != basis {
            return Err(Error::InvalidInput(format!("{basis:?} is not in canonical form")));
        }
        Ok(Submodule { n: basis.cols(), basis })
    }

    pub fn ambient_rank(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn num_gens(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.rows() == 0
    }

    /// `(column, valuation)` for each canonical row.
    pub fn pivots(&self, ring: &FiniteRing) -> Vec<(usize, u32)> {
        (0..self.basis.rows())
            .map(|i| {
                let c = leading(self.basis.row(i)).expect("canonical rows are nonzero");
                (c, ring.val(self.basis.get(i, c)))
            })
            .collect()
    }

    /// Minimal number of generators (residue rank); the free rank when splittable.
    pub fn rank(&self, ring: &FiniteRing) -> usize {
        residue_rank(ring, &self.basis.row_vecs())
    }

    /// Number of elements.
    pub fn cardinality(&self, ring: &FiniteRing) -> u64 {
        self.pivots(ring)
            .iter()
            .map(|&(_, v)| (ring.residue_size() as u64).pow(ring.length() - v))
            .product()
    }

    /// Reduces `v` against the canonical rows; returns the remainder.
    pub fn reduce(&self, ring: &FiniteRing, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.n);
        let mut w = v.to_vec();
        for i in 0..self.basis.rows() {
            let row = self.basis.row(i);
            let c = leading(row).unwrap();
            let piv_v = ring.val(row[c]);
            if w[c] == 0 || ring.val(w[c]) < piv_v {
                continue;
            }
            let (q, _) = ring.divmod_pi_pow(w[c], piv_v);
            axpy(ring, &mut w, ring.neg(q), row);
        }
        w
    }

    pub fn contains_vec(&self, ring: &FiniteRing, v: &[u8]) -> bool {
        self.reduce(ring, v).iter().all(|&x| x == 0)
    }

    pub fn is_subset_of(&self, ring: &FiniteRing, other: &Submodule) -> bool {
        (0..self.basis.rows()).all(|i| other.contains_vec(ring, self.basis.row(i)))
    }

    pub fn sum(&self, ring: &FiniteRing, other: &Submodule) -> Submodule {
        Submodule::span(ring, &self.basis.vstack(&other.basis))
    }

    pub fn add_vec(&self, ring: &FiniteRing, v: &[u8]) -> Submodule {
        Submodule::span(ring, &self.basis.vstack(&Mat::new(1, self.n, v.to_vec())))
    }

    /// Image under g acting on column vectors: rows `b` map to `b g^T`.
    pub fn act(&self, ring: &FiniteRing, g: &Mat) -> Submodule {
        Submodule::span(ring, &self.basis.mul(&g.transpose(), ring))
    }

    /// Same as [`act`](Self::act) with `g^T` precomputed.
    pub fn act_t(&self, ring: &FiniteRing, gt: &Mat) -> Submodule {
        Submodule::span(ring, &self.basis.mul(gt, ring))
    }

    /// Direct summand test. Lifting residue-independent generators gives a
    /// free summand of rank r inside S, so S is a summand iff |S| = q^(L r).
    pub fn is_splittable(&self, ring: &FiniteRing) -> bool {
        if ring.is_field() {
            return true;
        }
        let r = self.rank(ring) as u32;
        self.cardinality(ring) == (ring.residue_size() as u64).pow(ring.length() * r)
    }

    /// All elements, for small modules.
    pub fn elements(&self, ring: &FiniteRing) -> Vec<Vec<u8>> {
        let mut out = vec![vec![0u8; self.n]];
        let mut seen: std::collections::HashSet<Vec<u8>> = out.iter().cloned().collect();
        let mut i = 0;
        while i < out.len() {
            for r in 0..self.basis.rows() {
                for a in 1..ring.size() as u8 {
                    let mut w = out[i].clone();
                    axpy(ring, &mut w, a, self.basis.row(r));
                    if seen.insert(w.clone()) {
                        out.push(w);
                    }
                }
            }
            i += 1;
        }
        out.sort();
        out
    }
}

/// `is_splittable` as a free function.
pub fn is_splittable(ring: &FiniteRing, s: &Submodule) -> bool {
    s.is_splittable(ring)
}

/// Greedy completion: scans `candidates` in order and keeps those that raise
/// the residue rank of `base + kept`.
pub fn extend_residue_basis(ring: &FiniteRing, base: &[Vec<u8>], candidates: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let mut acc: Vec<Vec<u8>> = base.to_vec();
    let mut rank = residue_rank(ring, &acc);
    let mut kept = Vec::new();
    for c in candidates {
        acc.push(c.clone());
        let r = residue_rank(ring, &acc);
        if r > rank {
            rank = r;
            kept.push(c.clone());
        } else {
            acc.pop();
        }
    }
    kept
}

/// Quotient T/S for splittable S ⊆ T: `complement` has rows spanning a
/// complement of S in T (the first canonical rows of T that extend S), and
/// `projection` is an n x k matrix with `complement * projection = I` and
/// `S * projection = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientMap {
    pub complement: Mat,
    pub projection: Mat,
}

impl QuotientMap {
    pub fn rank(&self) -> usize {
        self.complement.rows()
    }

    /// Coordinates of `v` in the quotient.
    pub fn project(&self, ring: &FiniteRing, v: &[u8]) -> Vec<u8> {
        Mat::vec_mul(v, &self.projection, ring)
    }
}

pub fn quotient_map(ring: &FiniteRing, s: &Submodule, t: &Submodule) -> Result<QuotientMap> {
    if !s.is_subset_of(ring, t) {
        return Err(Error::InvalidInput("quotient_map needs S ⊆ T".into()));
    }
    if !s.is_splittable(ring) || !t.is_splittable(ring) {
        return Err(Error::InvalidInput("quotient_map needs splittable S and T".into()));
    }
    let n = t.ambient_rank();
    let s_rows = s.basis().row_vecs();
    let comp = extend_residue_basis(ring, &s_rows, &t.basis().row_vecs());
    let mut partial = s_rows.clone();
    partial.extend(comp.iter().cloned());
    let id_rows = Mat::identity(n).row_vecs();
    let rest = extend_residue_basis(ring, &partial, &id_rows);
    let mut full = partial;
    full.extend(rest);
    let b = Mat::from_rows(n, &full);
    let binv = b.inverse(ring).ok_or_else(|| Error::Consistency("adapted basis is not invertible".into()))?;
    let cols: Vec<usize> = (s_rows.len()..s_rows.len() + comp.len()).collect();
    Ok(QuotientMap {
        complement: Mat::from_rows(n, &comp),
        projection: binv.select_cols(&cols),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> FiniteRing {
        FiniteRing::from_str_spec(s).unwrap()
    }

    #[test]
    fn howell_over_z4() {
        let r = ring("Z/4");
        let s = Submodule::from_rows(&r, 2, &[vec![2, 0]]);
        assert_eq!(s.basis(), &Mat::new(1, 2, vec![2, 0]));
        assert!(!s.is_splittable(&r));
        let t = Submodule::from_rows(&r, 2, &[vec![1, 2]]);
        assert!(t.is_splittable(&r));
        assert_eq!(t.cardinality(&r), 4);
        // (2,1) spans {0,(2,1),(0,2),(2,3)}; Howell adds the row (0,2).
        let u = Submodule::from_rows(&r, 2, &[vec![2, 1]]);
        assert_eq!(u.basis(), &Mat::new(2, 2, vec![2, 1, 0, 2]));
        assert_eq!(u.elements(&r).len(), 4);
        assert!(u.contains_vec(&r, &[0, 2]));
    }

    #[test]
    fn howell_property_row_added() {
        let r = ring("Z/4");
        // span of (2,2) and (0,...) : 2*(1,1)... check (2, 0) from 2*(1,2)
        let s = Submodule::from_rows(&r, 2, &[vec![1, 2]]);
        assert!(s.contains_vec(&r, &[2, 0]));
        let t = Submodule::from_rows(&r, 2, &[vec![2, 2], vec![0, 2]]);
        assert_eq!(t.elements(&r).len(), 4);
        assert!(t.contains_vec(&r, &[2, 0]));
    }

    #[test]
    fn quotient_examples() {
        let f2 = ring("F2");
        let q = quotient_map(&f2, &Submodule::zero(2), &Submodule::whole(2)).unwrap();
        assert_eq!(q.projection, Mat::identity(2));
        let l = Submodule::from_rows(&f2, 2, &[vec![1, 0]]);
        let q = quotient_map(&f2, &l, &Submodule::whole(2)).unwrap();
        assert_eq!(q.rank(), 1);
        assert_eq!(q.project(&f2, &[1, 0]), vec![0]);
        let f3 = ring("F3");
        let l = Submodule::from_rows(&f3, 2, &[vec![1, 1]]);
        let q = quotient_map(&f3, &l, &Submodule::whole(2)).unwrap();
        assert_eq!(q.complement.mul(&q.projection, &f3), Mat::identity(1));
        assert_eq!(l.basis().mul(&q.projection, &f3), Mat::zeros(1, 1));
        assert!(quotient_map(&f3, &Submodule::whole(2), &l).is_err());
    }

    #[test]
    fn residue_rank_z9() {
        let r = ring("Z/9");
        assert_eq!(residue_rank(&r, &[vec![3, 0], vec![0, 1]]), 1);
        assert_eq!(residue_rank(&r, &[vec![1, 3], vec![4, 3]]), 1);
        assert_eq!(residue_rank(&r, &[vec![1, 3], vec![4, 4]]), 2);
    }
}

use serde::Serialize;

use crate::ring::{FiniteRing, Mat, Submodule};

/// Reduced row echelon form over a field; returns the pivot columns.
pub fn rref(ring: &FiniteRing, a: &mut Mat) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| a.get(i, c) != 0) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = ring.inv(a.get(r, c)).expect("nonzero element of a field");
        a.scale_row(r, inv, ring);
        for i in 0..a.rows() {
            let x = a.get(i, c);
            if i != r && x != 0 {
                a.add_row_multiple(i, r, ring.neg(x), ring);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(ring: &FiniteRing, a: &Mat) -> usize {
    rref(ring, &mut a.clone()).len()
}

/// One solution of `A x = y` (free variables zero), if any.
pub fn solve(ring: &FiniteRing, a: &Mat, y: &[u8]) -> Option<Vec<u8>> {
    let (n, r) = (a.rows(), a.cols());
    let mut aug = Mat::zeros(n, r + 1);
    for i in 0..n {
        for j in 0..r {
            aug.set(i, j, a.get(i, j));
        }
        aug.set(i, r, y[i]);
    }
    let pivots = rref(ring, &mut aug);
    if pivots.last() == Some(&r) {
        return None;
    }
    let mut x = vec![0u8; r];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(row, r);
    }
    Some(x)
}

/// Basis of `{x : A x = 0}`.
pub fn nullspace(ring: &FiniteRing, a: &Mat) -> Vec<Vec<u8>> {
    let mut m = a.clone();
    let pivots = rref(ring, &mut m);
    let free: Vec<usize> = (0..a.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u8; a.cols()];
            x[f] = 1;
            for (row, &c) in pivots.iter().enumerate() {
                x[c] = ring.neg(m.get(row, f));
            }
            x
        })
        .collect()
}

/// Coefficients `c` with `c · B = v`.
pub fn solve_left(ring: &FiniteRing, b: &Mat, v: &[u8]) -> Option<Vec<u8>> {
    solve(ring, &b.transpose(), v)
}

/// Basis of `{c : c · P = 0}`.
pub fn left_kernel(ring: &FiniteRing, p: &Mat) -> Vec<Vec<u8>> {
    nullspace(ring, &p.transpose())
}

fn row_combination(ring: &FiniteRing, c: &[u8], m: &Mat) -> Vec<u8> {
    Mat::vec_mul(c, m, ring)
}

/// A surjection ψ from a subspace W ⊆ F^n onto F^k, stored by its values on
/// the canonical basis of W. Spans x ↞ z ↣ y and the pieces of graded
/// flags are both of this form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PartialEpi {
    pub space: Submodule,
    /// `dim W × k`.
    pub values: Mat,
}

impl PartialEpi {
    /// From independent spanning rows of W and the images of those rows.
    pub fn new(ring: &FiniteRing, rows: &Mat, images: &Mat) -> Self {
        let space = Submodule::span(ring, rows);
        let basis = space.basis();
        let mut values = Mat::zeros(basis.rows(), images.cols());
        for r in 0..basis.rows() {
            let c = solve_left(ring, rows, basis.row(r)).expect("canonical row lies in the span");
            let v = row_combination(ring, &c, images);
            for (j, x) in v.into_iter().enumerate() {
                values.set(r, j, x);
            }
        }
        PartialEpi { space, values }
    }

    pub fn identity(n: usize) -> Self {
        PartialEpi {
            space: Submodule::whole(n),
            values: Mat::identity(n),
        }
    }

    pub fn ambient(&self) -> usize {
        self.space.ambient_rank()
    }

    pub fn dim(&self) -> usize {
        self.space.num_gens()
    }

    pub fn target_dim(&self) -> usize {
        self.values.cols()
    }

    pub fn is_surjective(&self, ring: &FiniteRing) -> bool {
        rank(ring, &self.values) == self.target_dim()
    }

    /// ψ(v) for v ∈ W.
    pub fn apply(&self, ring: &FiniteRing, v: &[u8]) -> Option<Vec<u8>> {
        let c = solve_left(ring, self.space.basis(), v)?;
        Some(row_combination(ring, &c, &self.values))
    }

    pub fn kernel(&self, ring: &FiniteRing) -> Submodule {
        let rows: Vec<Vec<u8>> = left_kernel(ring, &self.values)
            .iter()
            .map(|c| row_combination(ring, c, self.space.basis()))
            .collect();
        Submodule::from_rows(ring, self.ambient(), &rows)
    }

    /// ψ⁻¹(S) for a subspace S of F^k.
    pub fn preimage(&self, ring: &FiniteRing, s: &Submodule) -> Submodule {
        let mut rows = self.kernel(ring).basis().row_vecs();
        for r in 0..s.num_gens() {
            let c = solve_left(ring, &self.values, s.basis().row(r)).expect("ψ is surjective");
            rows.push(row_combination(ring, &c, self.space.basis()));
        }
        Submodule::from_rows(ring, self.ambient(), &rows)
    }

    /// For ψ: W ↠ F^k and ρ: Y ↠ F^a with Y ⊆ F^k, the surjection
    /// ρ ∘ ψ: ψ⁻¹(Y) ↠ F^a.
    pub fn pull(&self, ring: &FiniteRing, inner: &PartialEpi) -> PartialEpi {
        let space = self.preimage(ring, &inner.space);
        let basis = space.basis();
        let mut values = Mat::zeros(basis.rows(), inner.target_dim());
        for r in 0..basis.rows() {
            let u = self.apply(ring, basis.row(r)).expect("preimage lies in W");
            let v = inner.apply(ring, &u).expect("image lies in Y");
            for (j, x) in v.into_iter().enumerate() {
                values.set(r, j, x);
            }
        }
        PartialEpi { space, values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FiniteRing {
        FiniteRing::field(2).unwrap()
    }

    #[test]
    fn solve_and_kernel() {
        let r = FiniteRing::field(3).unwrap();
        let a = Mat::new(2, 3, vec![1, 2, 0, 0, 1, 1]);
        let x = solve(&r, &a, &[1, 2]).unwrap();
        assert_eq!(Mat::vec_mul(&x, &a.transpose(), &r), vec![1, 2]);
        let k = nullspace(&r, &a);
        assert_eq!(k.len(), 1);
        assert_eq!(Mat::vec_mul(&k[0], &a.transpose(), &r), vec![0, 0]);
        assert!(solve(&r, &Mat::new(2, 1, vec![1, 1]), &[1, 0]).is_none());
    }

    #[test]
    fn pull_composes() {
        let r = f2();
        // ψ: F^2 ↠ F^1, (x, y) ↦ x + y.
        let psi = PartialEpi::new(&r, &Mat::identity(2), &Mat::new(2, 1, vec![1, 1]));
        assert_eq!(psi.kernel(&r).basis(), &Mat::new(1, 2, vec![1, 1]));
        let id = PartialEpi::identity(1);
        let c = psi.pull(&r, &id);
        assert_eq!(c, psi);
        let zero = PartialEpi::new(&r, &Mat::zeros(0, 1), &Mat::zeros(0, 0));
        let k = psi.pull(&r, &zero);
        assert_eq!(k.space, psi.kernel(&r));
        assert_eq!(k.target_dim(), 0);
    }
}

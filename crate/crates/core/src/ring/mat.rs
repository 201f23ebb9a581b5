use std::fmt;

use serde::{Deserialize, Serialize};

use super::FiniteRing;

/// Dense row-major matrix of ring elements. The derived order compares
/// shape first and then entries lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Mat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::new(rows, cols, vec![0; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<u8>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Mat::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u8) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat, ring: &FiniteRing) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = ring.add(out.data[idx], ring.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat, ring: &FiniteRing) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| ring.add(a, b)).collect();
        Mat::new(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Mat, ring: &FiniteRing) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| ring.sub(a, b)).collect();
        Mat::new(self.rows, self.cols, data)
    }

    /// Row vector times matrix.
    pub fn vec_mul(v: &[u8], m: &Mat, ring: &FiniteRing) -> Vec<u8> {
        assert_eq!(v.len(), m.rows);
        let mut out = vec![0u8; m.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = ring.add(*o, ring.mul(a, m.get(k, j)));
            }
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat::new(self.rows + other.rows, self.cols, data)
    }

    /// Columns `cols` of `self`, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.data[i * cols.len() + jj] = self.get(i, j);
            }
        }
        out
    }

    /// Block diagonal sum.
    pub fn block_diag(blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Determinant by the Leibniz formula; meant for n <= 6.
    pub fn det(&self, ring: &FiniteRing) -> u8 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0u8;
        loop {
            let mut term = 1u8;
            for (i, &j) in perm.iter().enumerate() {
                term = ring.mul(term, self.get(i, j));
                if term == 0 {
                    break;
                }
            }
            if term != 0 {
                if inversions(&perm) % 2 == 1 {
                    term = ring.neg(term);
                }
                total = ring.add(total, term);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        total
    }

    /// Inverse over a local ring via Gauss-Jordan with unit pivots.
    pub fn inverse(&self, ring: &FiniteRing) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for c in 0..n {
            let piv = (c..n).find(|&r| ring.is_unit(a.get(r, c)))?;
            a.swap_rows(c, piv);
            inv.swap_rows(c, piv);
            let s = ring.inv(a.get(c, c)).unwrap();
            a.scale_row(c, s, ring);
            inv.scale_row(c, s, ring);
            for r in 0..n {
                if r != c {
                    let f = a.get(r, c);
                    if f != 0 {
                        a.add_row_multiple(r, c, ring.neg(f), ring);
                        inv.add_row_multiple(r, c, ring.neg(f), ring);
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self, ring: &FiniteRing) -> bool {
        self.rows == self.cols && ring.is_unit(self.det(ring))
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    pub fn scale_row(&mut self, i: usize, s: u8, ring: &FiniteRing) {
        for c in 0..self.cols {
            let idx = i * self.cols + c;
            self.data[idx] = ring.mul(self.data[idx], s);
        }
    }

    /// row_i += s * row_j
    pub fn add_row_multiple(&mut self, i: usize, j: usize, s: u8, ring: &FiniteRing) {
        for c in 0..self.cols {
            let x = ring.mul(s, self.data[j * self.cols + c]);
            let idx = i * self.cols + c;
            self.data[idx] = ring.add(self.data[idx], x);
        }
    }

    /// Rows as integer arrays, the JSON representation.
    pub fn to_int_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|&x| x as u32).collect()).collect()
    }
}

fn inversions(perm: &[usize]) -> usize {
    let mut c = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                c += 1;
            }
        }
    }
    c
}

pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", r.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det_agree() {
        let r = FiniteRing::from_str_spec("Z/4").unwrap();
        let m = Mat::new(2, 2, vec![1, 2, 3, 3]);
        assert_eq!(m.det(&r), r.sub(3, 6 % 4));
        let inv = m.inverse(&r).unwrap();
        assert_eq!(m.mul(&inv, &r), Mat::identity(2));
        let sing = Mat::new(2, 2, vec![2, 0, 0, 1]);
        assert!(sing.inverse(&r).is_none());
        assert!(!sing.is_invertible(&r));
    }

    #[test]
    fn det_of_3x3_over_f3() {
        let r = FiniteRing::field(3).unwrap();
        let m = Mat::new(3, 3, vec![1, 2, 0, 0, 1, 1, 2, 0, 1]);
        // 1*(1-0) - 2*(0-2) + 0 = 5 = 2 mod 3
        assert_eq!(m.det(&r), 2);
    }

    #[test]
    fn zero_by_zero() {
        let r = FiniteRing::field(2).unwrap();
        let m = Mat::identity(0);
        assert_eq!(m.det(&r), 1);
        assert_eq!(m.inverse(&r), Some(Mat::identity(0)));
    }
}

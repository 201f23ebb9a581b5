use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type DenseMat = Vec<Vec<BigInt>>;

/// Smith normal form `U·A·V = D` with `U`, `V` unimodular and the diagonal
/// of `D` a nonnegative divisibility chain. The postconditions are checked
/// before returning.
pub fn smith_normal_form(a: &[Vec<BigInt>]) -> Result<(DenseMat, DenseMat, DenseMat)> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("ragged matrix".into()));
    }
    let mut d: DenseMat = a.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);
    reduce(&mut d, Some(&mut u), Some(&mut v), None);
    check_postconditions(a, &u, &d, &v)?;
    Ok((u, d, v))
}

/// Diagonal entries of the Smith form, without transforms.
pub fn smith_diagonal(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    smith_diagonal_profiled(a).0
}

/// [`smith_diagonal`] together with the largest entry bit-length seen
/// after any pivot step.
pub fn smith_diagonal_profiled(a: &[Vec<BigInt>]) -> (Vec<BigInt>, u64) {
    let mut d: DenseMat = a.to_vec();
    let mut bits = max_bits(&d);
    reduce(&mut d, None, None, Some(&mut bits));
    let k = d.len().min(d.first().map_or(0, |r| r.len()));
    let diag: Vec<BigInt> = (0..k).map(|i| d[i][i].clone()).collect();
    debug_assert!(is_divisibility_chain(&diag));
    (diag, bits)
}

fn max_bits(d: &DenseMat) -> u64 {
    d.iter().flatten().map(|x| x.bits()).max().unwrap_or(0)
}

pub fn identity(n: usize) -> DenseMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> DenseMat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: DenseMat = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn is_divisibility_chain(diag: &[BigInt]) -> bool {
    diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            (&w[1] % &w[0]).is_zero()
        }
    }) && diag.iter().all(|x| !x.is_negative())
}

fn check_postconditions(a: &[Vec<BigInt>], u: &DenseMat, d: &DenseMat, v: &DenseMat) -> Result<()> {
    if mat_mul(&mat_mul(u, a), v) != *d {
        return Err(Error::Consistency("SNF: U·A·V ≠ D".into()));
    }
    for (i, row) in d.iter().enumerate() {
        if row.iter().enumerate().any(|(j, x)| i != j && !x.is_zero()) {
            return Err(Error::Consistency("SNF: D is not diagonal".into()));
        }
    }
    if !determinant(u).abs().is_one() || !determinant(v).abs().is_one() {
        return Err(Error::Consistency("SNF: transform is not unimodular".into()));
    }
    let k = d.len().min(d.first().map_or(0, |r| r.len()));
    let diag: Vec<BigInt> = (0..k).map(|i| d[i][i].clone()).collect();
    if !is_divisibility_chain(&diag) {
        return Err(Error::Consistency("SNF: diagonal is not a divisibility chain".into()));
    }
    Ok(())
}

// Row ops on d are mirrored on u (left), column ops on v (right).
fn reduce(d: &mut DenseMat, mut u: Option<&mut DenseMat>, mut v: Option<&mut DenseMat>, mut bits: Option<&mut u64>) {
    let m = d.len();
    let n = d.first().map_or(0, |r| r.len());
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_entry(d, t) else { break };
        swap_rows(d, u.as_deref_mut(), t, pi);
        swap_cols(d, v.as_deref_mut(), t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                add_row(d, u.as_deref_mut(), i, t, &-q);
                if !d[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                add_col(d, v.as_deref_mut(), j, t, &-q);
                if !d[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pi, pj) = min_entry_cross(d, t);
                swap_rows(d, u.as_deref_mut(), t, pi);
                swap_cols(d, v.as_deref_mut(), t, pj);
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&d[i][j] % &d[t][t]).is_zero()));
            match bad {
                Some(i) => add_row(d, u.as_deref_mut(), t, i, &BigInt::one()),
                None => break,
            }
        }
        if d[t][t].is_negative() {
            negate_row(d, u.as_deref_mut(), t);
        }
        if let Some(b) = bits.as_deref_mut() {
            *b = (*b).max(max_bits(d));
        }
        t += 1;
    }
}

fn min_entry(d: &DenseMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in d.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < d[bi][bj].abs()) {
                best = Some((i, j));
                if x.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Smallest nonzero entry in row t or column t (at least one exists).
fn min_entry_cross(d: &DenseMat, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut bv: Option<BigInt> = None;
    let mut consider = |i: usize, j: usize, x: &BigInt| {
        if !x.is_zero() && bv.as_ref().map_or(true, |b| x.abs() < *b) {
            bv = Some(x.abs());
            best = (i, j);
        }
    };
    for (i, row) in d.iter().enumerate().skip(t) {
        consider(i, t, &row[t]);
    }
    for (j, x) in d[t].iter().enumerate().skip(t) {
        consider(t, j, x);
    }
    best
}

fn swap_rows(d: &mut DenseMat, u: Option<&mut DenseMat>, a: usize, b: usize) {
    if a != b {
        d.swap(a, b);
        if let Some(u) = u {
            u.swap(a, b);
        }
    }
}

fn swap_cols(d: &mut DenseMat, v: Option<&mut DenseMat>, a: usize, b: usize) {
    if a != b {
        for row in d.iter_mut() {
            row.swap(a, b);
        }
        if let Some(v) = v {
            for row in v.iter_mut() {
                row.swap(a, b);
            }
        }
    }
}

/// row_i += q·row_k
fn add_row(d: &mut DenseMat, u: Option<&mut DenseMat>, i: usize, k: usize, q: &BigInt) {
    fn go(x: &mut DenseMat, i: usize, k: usize, q: &BigInt) {
        let src = x[k].clone();
        for (a, b) in x[i].iter_mut().zip(src.iter()) {
            if !b.is_zero() {
                *a += q * b;
            }
        }
    }
    go(d, i, k, q);
    if let Some(u) = u {
        go(u, i, k, q);
    }
}

/// col_j += q·col_k
fn add_col(d: &mut DenseMat, v: Option<&mut DenseMat>, j: usize, k: usize, q: &BigInt) {
    fn go(x: &mut DenseMat, j: usize, k: usize, q: &BigInt) {
        for row in x.iter_mut() {
            if !row[k].is_zero() {
                let t = q * &row[k];
                row[j] += t;
            }
        }
    }
    go(d, j, k, q);
    if let Some(v) = v {
        go(v, j, k, q);
    }
}

fn negate_row(d: &mut DenseMat, u: Option<&mut DenseMat>, t: usize) {
    for x in d[t].iter_mut() {
        *x = -std::mem::take(x);
    }
    if let Some(u) = u {
        for x in u[t].iter_mut() {
            *x = -std::mem::take(x);
        }
    }
}

pub fn to_big(rows: &[Vec<i64>]) -> DenseMat {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(d: &DenseMat) -> Vec<BigInt> {
        (0..d.len().min(d[0].len())).map(|i| d[i][i].clone()).collect()
    }

    #[test]
    fn two_by_two() {
        let (_, d, _) = smith_normal_form(&to_big(&[vec![2, 4], vec![6, 8]])).unwrap();
        assert_eq!(diag_of(&d), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn identity_and_zero() {
        let (_, d, _) = smith_normal_form(&identity(3)).unwrap();
        assert_eq!(d, identity(3));
        let z = to_big(&[vec![0, 0, 0], vec![0, 0, 0]]);
        let (_, d, _) = smith_normal_form(&z).unwrap();
        assert_eq!(d, z);
    }

    #[test]
    fn divisibility_fixup() {
        let (_, d, _) = smith_normal_form(&to_big(&[vec![2, 0], vec![0, 3]])).unwrap();
        assert_eq!(diag_of(&d), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(smith_diagonal(&to_big(&[vec![2, 0], vec![0, 3]])), diag_of(&d));
    }

    #[test]
    fn bareiss() {
        assert_eq!(determinant(&to_big(&[vec![2, 1], vec![7, 4]])), BigInt::from(1));
        assert_eq!(determinant(&to_big(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]])), BigInt::from(-2));
    }
}

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::chain::{ChainComplex, SparseMatrix};
use super::snf::smith_diagonal;
use super::{Coef, Fp, Int};
use crate::error::{Error, Result};
use crate::ring::is_prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    Prime(u32),
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Coefficients {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Z" || t == "z" {
            return Ok(Coefficients::Integers);
        }
        let digits = t.trim_start_matches(['F', 'f']).trim_start_matches('_');
        match digits.parse::<u32>() {
            Ok(p) if digits.len() < t.len() && is_prime(p) => Ok(Coefficients::Prime(p)),
            _ => Err(Error::InvalidInput(format!("coefficients must be Z or F<prime>, got {s:?}"))),
        }
    }
}

impl Serialize for Coefficients {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    pub coeff: Coefficients,
    /// Betti numbers in degrees 0..=max_trusted_degree.
    pub betti: Vec<usize>,
    /// Invariant factors > 1 of the torsion per degree (integer case only).
    pub torsion: Vec<Vec<Int>>,
    pub max_trusted_degree: usize,
}

impl HomologyResult {
    pub fn reduced_betti(&self) -> Vec<usize> {
        let mut b = self.betti.clone();
        if let Some(b0) = b.first_mut() {
            *b0 = b0.saturating_sub(1);
        }
        b
    }

    /// True when H̃_k vanishes for every trusted k.
    pub fn is_acyclic(&self) -> bool {
        self.reduced_betti().iter().all(|&b| b == 0) && self.torsion.iter().all(|t| t.is_empty())
    }

    /// Human-readable group in degree k, e.g. `Z^2 ⊕ Z/2`.
    pub fn group_string(&self, k: usize) -> String {
        let base = match self.coeff {
            Coefficients::Integers => "Z".to_string(),
            Coefficients::Prime(p) => format!("F{p}"),
        };
        let mut parts = Vec::new();
        match self.betti[k] {
            0 => {}
            1 => parts.push(base),
            b => parts.push(format!("{base}^{b}")),
        }
        for t in &self.torsion[k] {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

/// Rank and nontrivial invariant factors of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithSummary {
    pub rank: usize,
    pub factors: Vec<BigInt>,
}

pub fn integer_smith_summary(m: &SparseMatrix) -> SmithSummary {
    let cols: Vec<Vec<(u32, Int)>> = m.cols.clone();
    let (rank, rest) = eliminate_units(m.nrows, cols);
    if rest.is_empty() {
        return SmithSummary { rank, factors: vec![] };
    }
    let mut rows: Vec<u32> = rest.iter().flat_map(|c| c.iter().map(|e| e.0)).collect();
    rows.sort_unstable();
    rows.dedup();
    let mut dense = vec![vec![BigInt::zero(); rest.len()]; rows.len()];
    for (j, col) in rest.iter().enumerate() {
        for (r, v) in col {
            let i = rows.binary_search(r).unwrap();
            dense[i][j] = v.to_big();
        }
    }
    let diag = smith_diagonal(&dense);
    let mut factors = Vec::new();
    let mut extra = 0;
    for d in diag {
        if d.is_zero() {
            continue;
        }
        extra += 1;
        if !d.abs().is_one() {
            factors.push(d.abs());
        }
    }
    SmithSummary {
        rank: rank + extra,
        factors,
    }
}

pub fn rank_mod_p(m: &SparseMatrix, p: u32) -> usize {
    let cols: Vec<Vec<(u32, Fp)>> = m
        .cols
        .iter()
        .map(|c| {
            c.iter()
                .map(|(r, v)| (*r, Fp::new(v.rem_euclid_u32(p), p)))
                .filter(|e| e.1.v != 0)
                .collect()
        })
        .collect();
    let (rank, rest) = eliminate_units(m.nrows, cols);
    debug_assert!(rest.is_empty());
    rank
}

/// Gaussian elimination restricted to unit pivots, sparse, with a Markowitz
/// style choice (shortest column, then lightest row). Returns the number of
/// pivots and the remaining nonzero columns, which contain no unit entry.
pub fn eliminate_units<C: Coef>(nrows: usize, mut cols: Vec<Vec<(u32, C)>>) -> (usize, Vec<Vec<(u32, C)>>) {
    let ncols = cols.len();
    let mut row_cols: Vec<Vec<u32>> = vec![Vec::new(); nrows];
    let mut heap = BinaryHeap::new();
    for (j, col) in cols.iter().enumerate() {
        for (r, _) in col {
            row_cols[*r as usize].push(j as u32);
        }
        if !col.is_empty() {
            heap.push(Reverse((col.len(), j as u32)));
        }
    }
    let mut alive = vec![true; ncols];
    let mut rank = 0;
    let mut merged: Vec<(u32, C)> = Vec::new();
    while let Some(Reverse((len, j))) = heap.pop() {
        let j = j as usize;
        if !alive[j] || cols[j].len() != len || len == 0 {
            continue;
        }
        let pivot = cols[j]
            .iter()
            .enumerate()
            .filter(|(_, e)| e.1.is_unit())
            .min_by_key(|(_, e)| row_cols[e.0 as usize].len())
            .map(|(k, _)| k);
        let Some(k) = pivot else { continue };
        let (r, pv) = cols[j][k].clone();
        let inv = pv.unit_inv();
        alive[j] = false;
        rank += 1;
        let pcol = std::mem::take(&mut cols[j]);
        let others = std::mem::take(&mut row_cols[r as usize]);
        for &c in &others {
            let c = c as usize;
            if !alive[c] {
                continue;
            }
            let Ok(pos) = cols[c].binary_search_by_key(&r, |e| e.0) else { continue };
            let factor = cols[c][pos].1.mul(&inv).neg();
            merged.clear();
            let target = &cols[c];
            let (mut a, mut b) = (0, 0);
            while a < target.len() || b < pcol.len() {
                let ra = target.get(a).map_or(u32::MAX, |e| e.0);
                let rb = pcol.get(b).map_or(u32::MAX, |e| e.0);
                if ra < rb {
                    merged.push(target[a].clone());
                    a += 1;
                } else if rb < ra {
                    let v = pcol[b].1.mul(&factor);
                    if !v.is_zero() {
                        row_cols[rb as usize].push(c as u32);
                        merged.push((rb, v));
                    }
                    b += 1;
                } else {
                    let v = target[a].1.add(&pcol[b].1.mul(&factor));
                    if !v.is_zero() {
                        merged.push((ra, v));
                    }
                    a += 1;
                    b += 1;
                }
            }
            std::mem::swap(&mut cols[c], &mut merged);
            if !cols[c].is_empty() {
                heap.push(Reverse((cols[c].len(), c as u32)));
            }
        }
    }
    let rest = cols
        .into_iter()
        .enumerate()
        .filter(|(j, c)| alive[*j] && !c.is_empty())
        .map(|(_, c)| c)
        .collect();
    (rank, rest)
}

/// Homology of a chain complex in degrees 0..D−1 (D = top degree).
pub fn homology(x: &ChainComplex, coeff: Coefficients) -> HomologyResult {
    let d = x.depth();
    assert!(d >= 1, "homology needs at least degrees 0 and 1");
    let ranks_and_factors: Vec<(usize, Vec<BigInt>)> = std::thread::scope(|s| {
        let handles: Vec<_> = (1..=d)
            .map(|k| {
                let m = &x.boundaries[k];
                s.spawn(move || match coeff {
                    Coefficients::Integers => {
                        let sm = integer_smith_summary(m);
                        (sm.rank, sm.factors)
                    }
                    Coefficients::Prime(p) => (rank_mod_p(m, p), vec![]),
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("rank worker")).collect()
    });
    let rank = |k: usize| if k == 0 { 0 } else { ranks_and_factors[k - 1].0 };
    let mut betti = Vec::with_capacity(d);
    let mut torsion = Vec::with_capacity(d);
    for k in 0..d {
        betti.push(x.dims[k] - rank(k) - rank(k + 1));
        let mut t: Vec<Int> = ranks_and_factors[k].1.iter().cloned().map(Int::from_big).collect();
        t.sort_by(|a, b| a.to_big().cmp(&b.to_big()));
        torsion.push(t);
    }
    HomologyResult {
        coeff,
        betti,
        torsion,
        max_trusted_degree: d - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::chain::SimplicialComplex;

    fn rp2() -> SimplicialComplex {
        SimplicialComplex::from_simplices(&[
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![0, 1, 5],
            vec![1, 2, 4],
            vec![2, 3, 5],
            vec![1, 3, 4],
            vec![2, 4, 5],
            vec![1, 3, 5],
        ])
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!("Z".parse::<Coefficients>().unwrap(), Coefficients::Integers);
        assert_eq!("F3".parse::<Coefficients>().unwrap(), Coefficients::Prime(3));
        assert!("F4".parse::<Coefficients>().is_err());
        assert!("7".parse::<Coefficients>().is_err());
    }

    #[test]
    fn circle() {
        let s = SimplicialComplex::from_simplices(&[vec![0, 1], vec![1, 2], vec![0, 2]]);
        let h = homology(&s.chain_complex(), Coefficients::Integers);
        assert_eq!(h.betti, vec![1, 1]);
        assert!(h.torsion.iter().all(|t| t.is_empty()));
    }

    #[test]
    fn projective_plane() {
        let cx = rp2().chain_complex();
        assert_eq!(cx.euler_characteristic(), 1);
        let hz = homology(&cx, Coefficients::Integers);
        assert_eq!(hz.betti, vec![1, 0, 0]);
        assert_eq!(hz.torsion[1], vec![Int::Small(2)]);
        assert_eq!(hz.group_string(1), "Z/2");
        let h2 = homology(&cx, Coefficients::Prime(2));
        assert_eq!(h2.betti, vec![1, 1, 1]);
        let h3 = homology(&cx, Coefficients::Prime(3));
        assert_eq!(h3.betti, vec![1, 0, 0]);
    }

    #[test]
    fn non_unit_leftover_goes_dense() {
        let m = SparseMatrix::from_columns(2, vec![vec![(0, Int::Small(2)), (1, Int::Small(4))], vec![(0, Int::Small(6)), (1, Int::Small(8))]]);
        let s = integer_smith_summary(&m);
        assert_eq!(s.rank, 2);
        assert_eq!(s.factors, vec![BigInt::from(2), BigInt::from(4)]);
    }
}

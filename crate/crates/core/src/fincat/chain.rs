use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::{FinCat, Int};
use crate::error::{Error, Result};
use crate::guards::Guards;

/// Column-sparse integer matrix; column j is the boundary of basis cell j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub cols: Vec<Vec<(u32, Int)>>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            cols: vec![Vec::new(); ncols],
        }
    }

    /// Sorts each column by row and merges duplicate entries.
    pub fn from_columns(nrows: usize, cols: Vec<Vec<(u32, Int)>>) -> Self {
        let ncols = cols.len();
        let cols = cols.into_iter().map(normalize_col).collect();
        SparseMatrix { nrows, ncols, cols }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<Int>> {
        let mut d = vec![vec![Int::ZERO; self.ncols]; self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                d[*i as usize][j] = v.clone();
            }
        }
        d
    }

    /// Triplets `(row, col, value)`.
    pub fn triplets(&self) -> Vec<(u32, u32, Int)> {
        let mut out = Vec::with_capacity(self.nnz());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                out.push((*i, j as u32, v.clone()));
            }
        }
        out
    }
}

pub(crate) fn normalize_col(mut col: Vec<(u32, Int)>) -> Vec<(u32, Int)> {
    col.sort_by_key(|e| e.0);
    let mut out: Vec<(u32, Int)> = Vec::with_capacity(col.len());
    for (r, v) in col {
        match out.last_mut() {
            Some((lr, lv)) if *lr == r => *lv = lv.add(&v),
            _ => out.push((r, v)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

/// Free chain complex C_0 .. C_D. `boundaries[k]` is ∂_k : C_k -> C_{k-1}
/// (`boundaries[0]` is the zero map to C_{-1} = 0).
#[derive(Clone, Debug, Serialize)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, mut higher: Vec<SparseMatrix>) -> Result<Self> {
        if higher.len() + 1 != dims.len() {
            return Err(Error::InvalidInput("need one boundary map per positive degree".into()));
        }
        let mut boundaries = vec![SparseMatrix::zero(0, dims[0])];
        boundaries.append(&mut higher);
        for (k, b) in boundaries.iter().enumerate().skip(1) {
            if b.nrows != dims[k - 1] || b.ncols != dims[k] {
                return Err(Error::InvalidInput(format!("∂_{k} has the wrong shape")));
            }
        }
        let cx = ChainComplex { dims, boundaries };
        cx.verify()?;
        Ok(cx)
    }

    /// Top degree D.
    pub fn depth(&self) -> usize {
        self.dims.len() - 1
    }

    /// Checks ∂_{k-1} ∘ ∂_k = 0 for all k.
    pub fn verify(&self) -> Result<()> {
        for k in 2..self.dims.len() {
            let lower = &self.boundaries[k - 1];
            for (j, col) in self.boundaries[k].cols.iter().enumerate() {
                let mut acc: HashMap<u32, Int> = HashMap::new();
                for (i, v) in col {
                    for (r, w) in &lower.cols[*i as usize] {
                        let e = acc.entry(*r).or_insert(Int::ZERO);
                        *e = e.add(&v.mul(w));
                    }
                }
                if acc.values().any(|v| !v.is_zero()) {
                    return Err(Error::Consistency(format!("∂∂ ≠ 0 on cell {j} of degree {k}")));
                }
            }
        }
        Ok(())
    }

    /// Drops degrees above `d`.
    pub fn truncate(&self, d: usize) -> ChainComplex {
        let d = d.min(self.depth());
        ChainComplex {
            dims: self.dims[..=d].to_vec(),
            boundaries: self.boundaries[..=d].to_vec(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// Normalized nerve chains of `c` in degrees 0..=depth; k-cells are the
/// composable strings of k non-identity morphisms, listed lexicographically.
#[derive(Debug)]
pub struct Nerve {
    pub complex: ChainComplex,
    /// Flattened cells per degree (stride k; degree 0 lists objects).
    pub cells: Vec<Vec<u32>>,
}

pub fn nerve_chain_complex(c: &FinCat, depth: usize, guards: &Guards) -> Result<Nerve> {
    let mut cells: Vec<Vec<u32>> = vec![c.objects().collect()];
    let nonid: Vec<u32> = c.morphisms().filter(|&m| !c.is_identity(m)).collect();
    for k in 1..=depth {
        let mut next = Vec::new();
        let mut count = 0u64;
        if k == 1 {
            next.extend_from_slice(&nonid);
            count = nonid.len() as u64;
        } else {
            let prev = &cells[k - 1];
            for cell in prev.chunks(k - 1) {
                let last = *cell.last().unwrap();
                for &m in c.out(c.tgt(last)) {
                    if !c.is_identity(m) {
                        count += 1;
                        if count > guards.max_simplices_per_degree {
                            return Err(Error::guard("max_simplices_per_degree", count, guards.max_simplices_per_degree));
                        }
                        next.extend_from_slice(cell);
                        next.push(m);
                    }
                }
            }
        }
        guards.check("max_simplices_per_degree", count)?;
        cells.push(next);
    }
    let dims: Vec<usize> = cells
        .iter()
        .enumerate()
        .map(|(k, v)| if k == 0 { v.len() } else { v.len() / k })
        .collect();
    let mut higher = Vec::new();
    for k in 1..=depth {
        let mut cols = Vec::with_capacity(dims[k]);
        for cell in cells[k].chunks(k) {
            let mut col = Vec::with_capacity(k + 1);
            if k == 1 {
                col.push((c.tgt(cell[0]), Int::ONE));
                col.push((c.src(cell[0]), Int::Small(-1)));
            } else {
                let lower = &cells[k - 1];
                let mut face = Vec::with_capacity(k - 1);
                for i in 0..=k {
                    face.clear();
                    if i == 0 {
                        face.extend_from_slice(&cell[1..]);
                    } else if i == k {
                        face.extend_from_slice(&cell[..k - 1]);
                    } else {
                        let comp = c.compose(cell[i], cell[i - 1]);
                        if c.is_identity(comp) {
                            continue;
                        }
                        face.extend_from_slice(&cell[..i - 1]);
                        face.push(comp);
                        face.extend_from_slice(&cell[i + 1..]);
                    }
                    let idx = find_cell(lower, k - 1, &face).expect("faces of nerve cells are nerve cells");
                    col.push((idx as u32, if i % 2 == 0 { Int::ONE } else { Int::Small(-1) }));
                }
            }
            cols.push(col);
        }
        higher.push(SparseMatrix::from_columns(dims[k - 1], cols));
    }
    Ok(Nerve {
        complex: ChainComplex::new(dims, higher)?,
        cells,
    })
}

/// Binary search in a lexicographically sorted flat cell list.
fn find_cell(flat: &[u32], k: usize, key: &[u32]) -> Option<usize> {
    let n = flat.len() / k;
    let (mut lo, mut hi) = (0, n);
    while lo < hi {
        let mid = (lo + hi) / 2;
        match flat[mid * k..(mid + 1) * k].cmp(key) {
            std::cmp::Ordering::Less => lo = mid + 1,
            std::cmp::Ordering::Greater => hi = mid,
            std::cmp::Ordering::Equal => return Some(mid),
        }
    }
    None
}

/// A finite abstract simplicial complex, all faces included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    /// Faces grouped by dimension, each sorted.
    pub faces: Vec<Vec<Vec<u32>>>,
}

impl SimplicialComplex {
    /// Closes the given simplices under taking nonempty faces.
    pub fn from_simplices(simplices: &[Vec<u32>]) -> Self {
        let mut all: BTreeSet<Vec<u32>> = BTreeSet::new();
        for s in simplices {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            let n = s.len();
            for mask in 1u64..(1u64 << n) {
                let f: Vec<u32> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                all.insert(f);
            }
        }
        let dim = all.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut faces = vec![Vec::new(); dim];
        for f in all {
            faces[f.len() - 1].push(f);
        }
        SimplicialComplex { faces }
    }

    pub fn dimension(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(|v| v.len()).collect()
    }

    /// Oriented simplicial chains in degrees 0..=dim+1 (the top degree is
    /// zero so every real degree is certified).
    pub fn chain_complex(&self) -> ChainComplex {
        let mut dims: Vec<usize> = self.f_vector();
        dims.push(0);
        if dims.len() == 1 {
            dims.push(0);
        }
        let index: Vec<HashMap<&[u32], u32>> = self
            .faces
            .iter()
            .map(|fs| fs.iter().enumerate().map(|(i, f)| (f.as_slice(), i as u32)).collect())
            .collect();
        let mut higher = Vec::new();
        for k in 1..dims.len() {
            let cols = if k < self.faces.len() {
                self.faces[k]
                    .iter()
                    .map(|s| {
                        (0..s.len())
                            .map(|i| {
                                let face: Vec<u32> = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                                let sign = if i % 2 == 0 { Int::ONE } else { Int::Small(-1) };
                                (index[k - 1][face.as_slice()], sign)
                            })
                            .collect()
                    })
                    .collect()
            } else {
                vec![Vec::new(); dims[k]]
            };
            higher.push(SparseMatrix::from_columns(dims[k - 1], cols));
        }
        ChainComplex::new(dims, higher).expect("simplicial boundary squares to zero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{group_category, ops::terminal_category, FiniteGroup};

    #[test]
    fn terminal_nerve() {
        let n = nerve_chain_complex(&terminal_category(), 4, &Guards::default()).unwrap();
        assert_eq!(n.complex.dims, vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn bz2_nerve_one_cell_per_degree() {
        let c = group_category(&FiniteGroup::cyclic(2));
        let n = nerve_chain_complex(&c, 3, &Guards::default()).unwrap();
        assert_eq!(n.complex.dims, vec![1, 1, 1, 1]);
    }

    #[test]
    fn bs3_counts_are_powers_of_five() {
        let c = group_category(&FiniteGroup::symmetric(3));
        let n = nerve_chain_complex(&c, 4, &Guards::default()).unwrap();
        assert_eq!(n.complex.dims, vec![1, 5, 25, 125, 625]);
    }

    #[test]
    fn guard_reports_degree() {
        let c = group_category(&FiniteGroup::symmetric(3));
        let g = Guards {
            max_simplices_per_degree: 100,
            ..Guards::default()
        };
        assert!(nerve_chain_complex(&c, 4, &g).unwrap_err().is_guard());
    }

    #[test]
    fn circle_complex() {
        let s = SimplicialComplex::from_simplices(&[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(s.f_vector(), vec![3, 3]);
        assert_eq!(s.chain_complex().euler_characteristic(), 0);
    }
}

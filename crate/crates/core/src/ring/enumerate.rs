use std::collections::{BTreeSet, HashMap};

use super::{Flag, FiniteRing, Mat, Submodule};
use crate::error::Result;
use crate::guards::Guards;

/// All vectors of R^n in lexicographic order.
pub fn all_vectors(ring: &FiniteRing, n: usize) -> Vec<Vec<u8>> {
    let q = ring.size();
    let total = q.pow(n as u32);
    (0..total)
        .map(|mut x| {
            let mut v = vec![0u8; n];
            for i in (0..n).rev() {
                v[i] = (x % q) as u8;
                x /= q;
            }
            v
        })
        .collect()
}

/// Every submodule of R^n, sorted by (rank, canonical matrix).
pub fn enumerate_submodules(ring: &FiniteRing, n: usize, guards: &Guards) -> Result<Vec<Submodule>> {
    guards.check("max_module_size", (ring.size() as u64).saturating_pow(n as u32))?;
    let vecs = all_vectors(ring, n);
    let mut seen: BTreeSet<Submodule> = BTreeSet::new();
    let mut queue = vec![Submodule::zero(n)];
    seen.insert(Submodule::zero(n));
    while let Some(s) = queue.pop() {
        for v in &vecs {
            if s.contains_vec(ring, v) {
                continue;
            }
            let t = s.add_vec(ring, v);
            if seen.insert(t.clone()) {
                queue.push(t);
            }
        }
    }
    let mut out: Vec<Submodule> = seen.into_iter().collect();
    out.sort_by_cached_key(|a| (a.rank(ring), a.basis().clone()));
    Ok(out)
}

/// Splittable submodules of R^n including 0 and R^n.
pub fn enumerate_splittable_submodules(ring: &FiniteRing, n: usize, guards: &Guards) -> Result<Vec<Submodule>> {
    Ok(enumerate_submodules(ring, n, guards)?
        .into_iter()
        .filter(|s| s.is_splittable(ring))
        .collect())
}

/// All splittable flags, empty flag first, then by length and member order.
pub fn enumerate_flags(ring: &FiniteRing, n: usize, guards: &Guards) -> Result<Vec<Flag>> {
    let subs: Vec<Submodule> = enumerate_splittable_submodules(ring, n, guards)?
        .into_iter()
        .filter(|s| !s.is_zero() && *s != Submodule::whole(n))
        .collect();
    Ok(flags_from_members(ring, n, &subs))
}

pub(crate) fn flags_from_members(ring: &FiniteRing, n: usize, subs: &[Submodule]) -> Vec<Flag> {
    let k = subs.len();
    let ranks: Vec<usize> = subs.iter().map(|s| s.rank(ring)).collect();
    let above: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| j != i && ranks[j] > ranks[i] && subs[i].is_subset_of(ring, &subs[j]))
                .collect()
        })
        .collect();
    let mut chains: Vec<Vec<usize>> = vec![Vec::new()];
    let mut stack: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
    while let Some(c) = stack.pop() {
        for &j in &above[*c.last().unwrap()] {
            let mut d = c.clone();
            d.push(j);
            stack.push(d);
        }
        chains.push(c);
    }
    chains.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    chains
        .into_iter()
        .map(|c| Flag::from_members_unchecked(n, c.into_iter().map(|i| subs[i].clone()).collect()))
        .collect()
}

/// Invertible n x n matrices in lexicographic order of their entries.
pub fn enumerate_gl(ring: &FiniteRing, n: usize, guards: &Guards) -> Result<Vec<Mat>> {
    let q = ring.size() as u64;
    let candidates = q.checked_pow((n * n) as u32).unwrap_or(u64::MAX);
    guards.check("max_gl_candidates", candidates)?;
    if n == 0 {
        return Ok(vec![Mat::identity(0)]);
    }
    // Rows are chosen independently over the residue field, so build
    // matrices row by row and prune on residue rank.
    let rows = all_vectors(ring, n);
    let mut partial: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &partial {
            for (ri, _) in rows.iter().enumerate() {
                let mut cand: Vec<Vec<u8>> = p.iter().map(|&i| rows[i].clone()).collect();
                cand.push(rows[ri].clone());
                if super::submodule::residue_rank(ring, &cand) == cand.len() {
                    let mut np = p.clone();
                    np.push(ri);
                    next.push(np);
                }
            }
        }
        partial = next;
    }
    Ok(partial
        .into_iter()
        .map(|p| {
            let data = p.iter().flat_map(|&i| rows[i].iter().copied()).collect();
            Mat::new(n, n, data)
        })
        .collect())
}

/// Gaussian binomial [n choose k]_q, by the q-Pascal recursion.
pub fn gaussian_binomial(q: u64, n: u32, k: u32) -> u64 {
    fn rec(q: u64, n: u32, k: u32, memo: &mut HashMap<(u32, u32), u64>) -> u64 {
        if k == 0 || k == n {
            return 1;
        }
        if k > n {
            return 0;
        }
        if let Some(&v) = memo.get(&(n, k)) {
            return v;
        }
        let v = rec(q, n - 1, k - 1, memo) + q.pow(k) * rec(q, n - 1, k, memo);
        memo.insert((n, k), v);
        v
    }
    rec(q, n, k, &mut HashMap::new())
}

pub fn gl_order(q: u64, n: u32) -> u64 {
    (0..n).map(|i| q.pow(n) - q.pow(i)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> FiniteRing {
        FiniteRing::from_str_spec(s).unwrap()
    }

    #[test]
    fn gl_counts() {
        let g = Guards::default();
        assert_eq!(enumerate_gl(&ring("F2"), 2, &g).unwrap().len(), 6);
        assert_eq!(enumerate_gl(&ring("F3"), 2, &g).unwrap().len(), 48);
        assert_eq!(enumerate_gl(&ring("Z/4"), 2, &g).unwrap().len(), 96);
        assert_eq!(enumerate_gl(&ring("F2"), 3, &g).unwrap().len(), 168);
        assert_eq!(enumerate_gl(&ring("F2"), 0, &g).unwrap().len(), 1);
    }

    #[test]
    fn gl_is_sorted_and_invertible() {
        let r = ring("Z/4");
        let gl = enumerate_gl(&r, 2, &Guards::default()).unwrap();
        assert!(gl.windows(2).all(|w| w[0] < w[1]));
        assert!(gl.iter().all(|m| m.is_invertible(&r)));
    }

    #[test]
    fn gl_guard() {
        let g = Guards {
            max_gl_candidates: 50,
            ..Guards::default()
        };
        assert!(enumerate_gl(&ring("F3"), 2, &g).unwrap_err().is_guard());
    }

    #[test]
    fn submodule_counts() {
        let g = Guards::default();
        assert_eq!(enumerate_splittable_submodules(&ring("F2"), 2, &g).unwrap().len(), 5);
        assert_eq!(enumerate_splittable_submodules(&ring("F3"), 2, &g).unwrap().len(), 6);
        assert_eq!(enumerate_splittable_submodules(&ring("Z/4"), 2, &g).unwrap().len(), 8);
    }

    #[test]
    fn flag_counts() {
        let g = Guards::default();
        assert_eq!(enumerate_flags(&ring("F2"), 2, &g).unwrap().len(), 4);
        assert_eq!(enumerate_flags(&ring("F2"), 3, &g).unwrap().len(), 36);
        assert_eq!(enumerate_flags(&ring("F5"), 1, &g).unwrap().len(), 1);
        assert_eq!(enumerate_flags(&ring("Z/4"), 2, &g).unwrap().len(), 7);
        assert_eq!(enumerate_flags(&ring("F3"), 0, &g).unwrap().len(), 1);
        let f = enumerate_flags(&ring("F2"), 3, &g).unwrap();
        assert!(f[0].is_empty_flag());
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 3, 1), 7);
        assert_eq!(gaussian_binomial(3, 4, 2), 130);
        assert_eq!(gl_order(3, 2), 48);
    }
}

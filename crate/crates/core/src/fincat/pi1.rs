use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::chain::SparseMatrix;
use super::homology::integer_smith_summary;
use super::{FinCat, Int};
use crate::error::{Error, Result};

/// Letters are `±(i + 1)` for generator `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<i32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl AbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Cyclic of order n (n = 0 for Z).
    pub fn is_cyclic_of_order(&self, n: u64) -> bool {
        match n {
            0 => self.free_rank == 1 && self.torsion.is_empty(),
            1 => self.is_trivial(),
            _ => self.free_rank == 0 && self.torsion == vec![Int::Small(n as i64)],
        }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

impl GroupPresentation {
    pub fn trivial() -> Self {
        GroupPresentation {
            generators: vec![],
            relators: vec![],
        }
    }

    pub fn is_trivially_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(|r| r.len()).sum()
    }

    /// Abelianization from the Smith form of the exponent-sum matrix.
    pub fn abelianization(&self) -> AbelianGroup {
        let n = self.generators.len();
        let cols: Vec<Vec<(u32, Int)>> = self
            .relators
            .iter()
            .map(|r| {
                let mut sums = std::collections::BTreeMap::new();
                for &l in r {
                    *sums.entry(l.unsigned_abs() - 1).or_insert(0i64) += l.signum() as i64;
                }
                sums.into_iter().filter(|e| e.1 != 0).map(|(g, v)| (g, Int::Small(v))).collect()
            })
            .collect();
        let m = SparseMatrix::from_columns(n, cols);
        let s = integer_smith_summary(&m);
        let mut torsion: Vec<BigInt> = s.factors;
        torsion.sort();
        AbelianGroup {
            free_rank: n - s.rank,
            torsion: torsion.into_iter().map(Int::from_big).collect(),
        }
    }

    pub fn word_string(&self, w: &[i32]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|&l| {
                let g = &self.generators[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    g.clone()
                } else {
                    format!("{g}⁻¹")
                }
            })
            .collect::<Vec<_>>()
            .join("·")
    }
}

pub fn free_reduce(w: &mut Vec<i32>) {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &l in w.iter() {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    *w = out;
}

pub fn cyclic_reduce(w: &mut Vec<i32>) {
    free_reduce(w);
    let (mut a, mut b) = (0, w.len());
    while b > a + 1 && w[a] == -w[b - 1] {
        a += 1;
        b -= 1;
    }
    *w = w[a..b].to_vec();
}

fn invert(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|&l| -l).collect()
}

/// Edge-path presentation of π₁ of the nerve at `basepoint`: a spanning tree
/// of non-identity morphisms, one generator per remaining non-identity
/// morphism, one relator per composable pair of non-identities.
pub fn pi1_presentation(c: &FinCat, basepoint: u32) -> Result<GroupPresentation> {
    if basepoint as usize >= c.num_objects() {
        return Err(Error::InvalidInput("basepoint is not an object".into()));
    }
    if !c.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); c.num_objects()];
    for m in c.morphisms() {
        if !c.is_identity(m) {
            adj[c.src(m) as usize].push(m);
            adj[c.tgt(m) as usize].push(m);
        }
    }
    let mut seen = vec![false; c.num_objects()];
    let mut in_tree = vec![false; c.num_morphisms()];
    seen[basepoint as usize] = true;
    let mut queue = VecDeque::from([basepoint]);
    while let Some(x) = queue.pop_front() {
        for &m in &adj[x as usize] {
            let y = if c.src(m) == x { c.tgt(m) } else { c.src(m) };
            if !seen[y as usize] {
                seen[y as usize] = true;
                in_tree[m as usize] = true;
                queue.push_back(y);
            }
        }
    }
    let mut letter = vec![0i32; c.num_morphisms()];
    let mut generators = Vec::new();
    for m in c.morphisms() {
        if !c.is_identity(m) && !in_tree[m as usize] {
            generators.push(c.mor_label(m).to_string());
            letter[m as usize] = generators.len() as i32;
        }
    }
    let mut relators = Vec::new();
    for f in c.morphisms() {
        if c.is_identity(f) {
            continue;
        }
        for &g in c.out(c.tgt(f)) {
            if c.is_identity(g) {
                continue;
            }
            let gf = c.compose(g, f);
            let mut w: Vec<i32> = [letter[f as usize], letter[g as usize], -letter[gf as usize]]
                .into_iter()
                .filter(|&l| l != 0)
                .collect();
            cyclic_reduce(&mut w);
            if !w.is_empty() {
                relators.push(w);
            }
        }
    }
    Ok(GroupPresentation { generators, relators })
}

#[derive(Clone, Debug, Serialize)]
pub struct TietzeOutcome {
    pub presentation: GroupPresentation,
    pub steps: u64,
    /// The step budget ran out before simplification stalled.
    pub exhausted: bool,
}

impl TietzeOutcome {
    pub fn is_trivial(&self) -> bool {
        self.presentation.generators.is_empty()
    }
}

/// Tietze simplification: repeatedly eliminates a generator occurring
/// exactly once in a shortest possible relator.
pub fn tietze_simplify(p: &GroupPresentation, budget: u64) -> TietzeOutcome {
    let ng = p.generators.len();
    let mut rels: Vec<Option<Vec<i32>>> = p
        .relators
        .iter()
        .map(|r| {
            let mut r = r.clone();
            cyclic_reduce(&mut r);
            (!r.is_empty()).then_some(r)
        })
        .collect();
    let mut occ: Vec<HashSet<usize>> = vec![HashSet::new(); ng];
    let mut heap = BinaryHeap::new();
    for (i, r) in rels.iter().enumerate() {
        if let Some(r) = r {
            for &l in r {
                occ[l.unsigned_abs() as usize - 1].insert(i);
            }
            heap.push(Reverse((r.len(), i)));
        }
    }
    let mut alive = vec![true; ng];
    let initial_len: usize = rels.iter().flatten().map(|r| r.len()).sum();
    let length_cap = initial_len.saturating_mul(4).max(10_000);
    let mut total_len = initial_len;
    let mut steps = 0u64;
    let mut exhausted = false;
    while let Some(Reverse((len, i))) = heap.pop() {
        let Some(r) = &rels[i] else { continue };
        if r.len() != len {
            continue;
        }
        let mut counts: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
        for &l in r {
            *counts.entry(l.unsigned_abs()).or_insert(0) += 1;
        }
        let Some(pos) = r.iter().position(|l| counts[&l.unsigned_abs()] == 1) else { continue };
        if steps >= budget || total_len > length_cap {
            exhausted = true;
            break;
        }
        steps += 1;
        let r = rels[i].take().unwrap();
        total_len -= r.len();
        let x = r[pos];
        let gx = x.unsigned_abs() as usize - 1;
        let rotated: Vec<i32> = r[pos + 1..].iter().chain(r[..pos].iter()).copied().collect();
        // x^e · rest = 1, so x = rest⁻¹ when e = 1 and x = rest when e = −1.
        let value = if x > 0 { invert(&rotated) } else { rotated };
        alive[gx] = false;
        let users: Vec<usize> = occ[gx].drain().collect();
        for j in users {
            let Some(old) = rels[j].take() else { continue };
            total_len -= old.len();
            let mut w = Vec::with_capacity(old.len() + value.len());
            for &l in &old {
                if l.unsigned_abs() as usize - 1 == gx {
                    if l > 0 {
                        w.extend_from_slice(&value);
                    } else {
                        w.extend(invert(&value));
                    }
                } else {
                    w.push(l);
                }
            }
            cyclic_reduce(&mut w);
            if !w.is_empty() {
                for &l in &w {
                    occ[l.unsigned_abs() as usize - 1].insert(j);
                }
                total_len += w.len();
                heap.push(Reverse((w.len(), j)));
                rels[j] = Some(w);
            }
        }
    }
    let mut new_index = vec![0i32; ng];
    let mut generators = Vec::new();
    for g in 0..ng {
        if alive[g] {
            generators.push(p.generators[g].clone());
            new_index[g] = generators.len() as i32;
        }
    }
    let mut relators: Vec<Vec<i32>> = rels
        .into_iter()
        .flatten()
        .map(|r| r.iter().map(|&l| l.signum() * new_index[l.unsigned_abs() as usize - 1]).collect())
        .collect();
    relators.sort();
    relators.dedup();
    TietzeOutcome {
        presentation: GroupPresentation { generators, relators },
        steps,
        exhausted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{group_category, poset_category, FiniteGroup};
    use crate::fincat::ops::terminal_category;

    #[test]
    fn terminal_presentation() {
        let p = pi1_presentation(&terminal_category(), 0).unwrap();
        assert!(p.is_trivially_trivial());
    }

    #[test]
    fn cyclic_three() {
        let p = pi1_presentation(&group_category(&FiniteGroup::cyclic(3)), 0).unwrap();
        assert_eq!(p.generators.len(), 2);
        assert!(p.abelianization().is_cyclic_of_order(3));
        let t = tietze_simplify(&p, 100);
        assert_eq!(t.presentation.generators.len(), 1);
        assert!(!t.is_trivial());
    }

    #[test]
    fn two_chain_is_simply_connected() {
        let c = poset_category(&["0".into(), "1".into()], |a, b| a <= b);
        let p = pi1_presentation(&c, 0).unwrap();
        assert!(p.is_trivially_trivial());
    }

    #[test]
    fn circle_poset_is_free() {
        let labels: Vec<String> = (0..6).map(|i| i.to_string()).collect();
        let c = poset_category(&labels, |a, b| a == b || (a < 3 && b >= 3 && b - 3 != a));
        let p = pi1_presentation(&c, 0).unwrap();
        let t = tietze_simplify(&p, 100);
        assert_eq!(t.presentation.generators.len(), 1);
        assert!(t.presentation.relators.is_empty());
        assert!(p.abelianization().is_cyclic_of_order(0));
    }

    #[test]
    fn symmetric_group_presentation() {
        let p = pi1_presentation(&group_category(&FiniteGroup::symmetric(3)), 0).unwrap();
        let ab = p.abelianization();
        assert!(ab.is_cyclic_of_order(2), "{ab}");
        let t = tietze_simplify(&p, 1000);
        assert!(!t.is_trivial());
        assert!(t.presentation.generators.len() <= 2);
    }

    #[test]
    fn budget_exhaustion() {
        let p = pi1_presentation(&group_category(&FiniteGroup::symmetric(3)), 0).unwrap();
        let t = tietze_simplify(&p, 1);
        assert!(t.exhausted);
    }

    #[test]
    fn disconnected_rejected() {
        let c = poset_category(&["a".into(), "b".into()], |a, b| a == b);
        assert!(matches!(pi1_presentation(&c, 0), Err(Error::Disconnected)));
    }
}

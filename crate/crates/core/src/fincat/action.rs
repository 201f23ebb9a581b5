use std::collections::HashMap;
use std::sync::Arc;

use super::{CatBuilder, FinCat, UnionFind};
use crate::error::{Error, Result};
use crate::ring::{FiniteRing, Mat};

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: u32,
    labels: Vec<String>,
}

/// Largest order for which a full multiplication table is stored.
pub const MAX_TABLE_ORDER: usize = 6000;

impl FiniteGroup {
    /// `mul[a * order + b] = a * b`. Group axioms are checked.
    pub fn from_table(order: usize, mul: Vec<u32>, labels: Vec<String>) -> Result<Self> {
        if order == 0 || mul.len() != order * order || labels.len() != order {
            return Err(Error::InvalidInput("malformed group table".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| mul[e * order + a] as usize == a && mul[a * order + e] as usize == a))
            .ok_or_else(|| Error::Axiom("group table has no identity".into()))? as u32;
        let mut inv = vec![0u32; order];
        for a in 0..order {
            inv[a] = (0..order)
                .find(|&b| mul[a * order + b] == identity)
                .ok_or_else(|| Error::Axiom(format!("element {a} has no inverse")))? as u32;
        }
        let g = FiniteGroup {
            order,
            mul,
            inv,
            identity,
            labels,
        };
        for a in 0..order as u32 {
            for b in 0..order as u32 {
                for c in 0..order as u32 {
                    if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)) {
                        return Err(Error::Axiom(format!("group table not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(g)
    }

    fn from_table_trusted(order: usize, mul: Vec<u32>, labels: Vec<String>) -> Self {
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| mul[e * order + a] as usize == a))
            .expect("identity") as u32;
        let inv = (0..order)
            .map(|a| (0..order).find(|&b| mul[a * order + b] == identity).expect("inverse") as u32)
            .collect();
        FiniteGroup {
            order,
            mul,
            inv,
            identity,
            labels,
        }
    }

    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
        FiniteGroup::from_table_trusted(n, mul, (0..n).map(|i| i.to_string()).collect())
    }

    pub fn trivial() -> Self {
        FiniteGroup::cyclic(1)
    }

    /// Permutations of {0..n-1} in lexicographic order; `a * b = a ∘ b`.
    pub fn symmetric(n: usize) -> Self {
        let mut perms = Vec::new();
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            perms.push(p.clone());
            if !crate::ring::next_permutation(&mut p) {
                break;
            }
        }
        let idx: HashMap<Vec<usize>, u32> = perms.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let k = perms.len();
        let mut mul = vec![0u32; k * k];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                let c: Vec<usize> = (0..n).map(|i| pa[pb[i]]).collect();
                mul[a * k + b] = idx[&c];
            }
        }
        let labels = perms.iter().map(|p| format!("{p:?}")).collect();
        FiniteGroup::from_table_trusted(k, mul, labels)
    }

    /// The group of the given matrices under multiplication (must be closed).
    pub fn from_matrices(ring: &FiniteRing, mats: &[Mat]) -> Result<Self> {
        let k = mats.len();
        if k > MAX_TABLE_ORDER {
            return Err(Error::guard("max_group_table_order", k as u64, MAX_TABLE_ORDER as u64));
        }
        let idx: HashMap<&Mat, u32> = mats.iter().enumerate().map(|(i, m)| (m, i as u32)).collect();
        let mut mul = vec![0u32; k * k];
        for (a, ma) in mats.iter().enumerate() {
            for (b, mb) in mats.iter().enumerate() {
                let c = ma.mul(mb, ring);
                mul[a * k + b] = *idx
                    .get(&c)
                    .ok_or_else(|| Error::InvalidInput("matrix set is not closed under products".into()))?;
            }
        }
        let labels = mats.iter().map(|m| format!("{m:?}")).collect();
        Ok(FiniteGroup::from_table_trusted(k, mul, labels))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn label(&self, a: u32) -> &str {
        &self.labels[a as usize]
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order];
        seen[self.identity as usize] = true;
        let mut list = vec![self.identity];
        let mut i = 0;
        while i < list.len() {
            let a = list[i];
            for &g in gens {
                let c = self.mul(a, g);
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    list.push(c);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        list
    }

    pub fn is_normal(&self, sub: &[u32]) -> bool {
        let mut inside = vec![false; self.order];
        for &h in sub {
            inside[h as usize] = true;
        }
        (0..self.order as u32).all(|g| sub.iter().all(|&h| inside[self.mul(self.mul(g, h), self.inv(g)) as usize]))
    }

    /// G/N for a normal subgroup N, with the projection G -> G/N. Cosets are
    /// numbered by their least element.
    pub fn quotient(&self, normal: &[u32]) -> Result<(FiniteGroup, Vec<u32>)> {
        if !self.is_normal(normal) {
            return Err(Error::InvalidInput("subgroup is not normal".into()));
        }
        let mut class = vec![u32::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order as u32 {
            if class[g as usize] == u32::MAX {
                let c = reps.len() as u32;
                reps.push(g);
                for &n in normal {
                    class[self.mul(g, n) as usize] = c;
                }
            }
        }
        let k = reps.len();
        let mut mul = vec![0u32; k * k];
        for a in 0..k {
            for b in 0..k {
                mul[a * k + b] = class[self.mul(reps[a], reps[b]) as usize];
            }
        }
        let labels = reps.iter().map(|&r| format!("[{}]", self.label(r))).collect();
        Ok((FiniteGroup::from_table_trusted(k, mul, labels), class))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order as u32).all(|a| (0..self.order as u32).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: u32) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// The one-object category BG; morphism ids are group elements and
/// `f ∘ g = f * g`.
pub fn group_category(g: &FiniteGroup) -> FinCat {
    let mut b = CatBuilder::new();
    let o = b.add_object("*");
    for a in 0..g.order() as u32 {
        b.add_morphism(o, o, g.label(a));
    }
    b.set_identity(o, g.identity());
    b.build_trusted(|f, h| Ok(g.mul(f, h))).expect("group category")
}

/// A finite poset, stored as its order relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    leq: Vec<bool>,
}

impl Poset {
    /// Checks reflexivity, antisymmetry and transitivity.
    pub fn new(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        let rel: Vec<bool> = (0..n * n).map(|i| leq(i / n, i % n)).collect();
        let p = Poset { labels, leq: rel };
        for a in 0..n {
            if !p.leq(a, a) {
                return Err(Error::Axiom(format!("poset relation not reflexive at {a}")));
            }
            for b in 0..n {
                if a != b && p.leq(a, b) && p.leq(b, a) {
                    return Err(Error::Axiom(format!("poset relation not antisymmetric at ({a},{b})")));
                }
                for c in 0..n {
                    if p.leq(a, b) && p.leq(b, c) && !p.leq(a, c) {
                        return Err(Error::Axiom(format!("poset relation not transitive at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.labels.len() + b]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|a| self.leq(a, m)))
    }

    pub fn to_category(&self) -> FinCat {
        poset_category(&self.labels, |a, b| self.leq(a, b))
    }
}

/// Thin category of a preorder: one morphism a -> b whenever `leq(a, b)`.
pub fn poset_category(labels: &[String], leq: impl Fn(usize, usize) -> bool) -> FinCat {
    let n = labels.len();
    let mut b = CatBuilder::new();
    for l in labels {
        b.add_object(l.clone());
    }
    let mut id = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            if leq(x, y) {
                let m = b.add_morphism(x as u32, y as u32, format!("{}<={}", labels[x], labels[y]));
                id.insert((x as u32, y as u32), m);
            }
        }
    }
    for x in 0..n as u32 {
        b.set_identity(x, id[&(x, x)]);
    }
    let ends: Vec<(u32, u32)> = {
        let mut v = vec![(0, 0); id.len()];
        for (&(x, y), &m) in &id {
            v[m as usize] = (x, y);
        }
        v
    };
    b.build(|f, g| {
        let key = (ends[g as usize].0, ends[f as usize].1);
        id.get(&key)
            .copied()
            .ok_or_else(|| Error::Axiom("relation is not transitive".into()))
    })
    .expect("preorder category")
}

/// A group acting on a poset by order automorphisms; `perm[g][p] = g·p`.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub group: Arc<FiniteGroup>,
    pub poset: Arc<Poset>,
    perm: Vec<Vec<u32>>,
}

impl GroupAction {
    pub fn new(group: Arc<FiniteGroup>, poset: Arc<Poset>, perm: Vec<Vec<u32>>) -> Result<Self> {
        let n = poset.len();
        if perm.len() != group.order() || perm.iter().any(|p| p.len() != n) {
            return Err(Error::InvalidInput("action table has the wrong shape".into()));
        }
        for (g, p) in perm.iter().enumerate() {
            let mut seen = vec![false; n];
            for &x in p {
                if std::mem::replace(&mut seen[x as usize], true) {
                    return Err(Error::Axiom(format!("element {g} does not act bijectively")));
                }
            }
            for a in 0..n {
                for b in 0..n {
                    if poset.leq(a, b) != poset.leq(p[a] as usize, p[b] as usize) {
                        return Err(Error::Axiom(format!("element {g} is not an order automorphism")));
                    }
                }
            }
        }
        for g in 0..group.order() as u32 {
            for h in 0..group.order() as u32 {
                let gh = group.mul(g, h) as usize;
                if (0..n).any(|x| perm[gh][x] != perm[g as usize][perm[h as usize][x] as usize]) {
                    return Err(Error::Axiom(format!("action not compatible with product ({g},{h})")));
                }
            }
        }
        Ok(GroupAction { group, poset, perm })
    }

    #[inline]
    pub fn act(&self, g: u32, x: usize) -> usize {
        self.perm[g as usize][x] as usize
    }

    pub fn trivial(poset: Arc<Poset>) -> Self {
        let n = poset.len();
        GroupAction {
            group: Arc::new(FiniteGroup::trivial()),
            poset,
            perm: vec![(0..n as u32).collect()],
        }
    }
}

/// Morphism data of an action category.
#[derive(Clone, Debug)]
pub struct ActionCategory {
    pub cat: FinCat,
    /// (g, source, target) per morphism.
    pub data: Vec<(u32, u32, u32)>,
}

/// G\\P: objects p, morphisms p -> p' the g with g·p <= p'.
pub fn action_category(a: &GroupAction) -> ActionCategory {
    let (g, p) = (&a.group, &a.poset);
    let mut b = CatBuilder::new();
    for x in 0..p.len() {
        b.add_object(p.label(x));
    }
    let mut data = Vec::new();
    let mut idx: HashMap<(u32, u32, u32), u32> = HashMap::new();
    for x in 0..p.len() {
        for e in 0..g.order() as u32 {
            let gx = a.act(e, x);
            for y in 0..p.len() {
                if p.leq(gx, y) {
                    let m = b.add_morphism(x as u32, y as u32, format!("{}:{}->{}", g.label(e), x, y));
                    idx.insert((e, x as u32, y as u32), m);
                    data.push((e, x as u32, y as u32));
                }
            }
        }
    }
    for x in 0..p.len() as u32 {
        b.set_identity(x, idx[&(g.identity(), x, x)]);
    }
    let cat = b
        .build_trusted(|f, h| {
            let (gf, _, y) = data[f as usize];
            let (gh, x, _) = data[h as usize];
            Ok(idx[&(g.mul(gf, gh), x, y)])
        })
        .expect("action category");
    ActionCategory { cat, data }
}

/// Verifies `x <= g·x ⇒ x = g·x` and returns the quotient poset G\P with
/// the class of each element.
pub fn poset_quotient(a: &GroupAction) -> Result<(Poset, Vec<usize>)> {
    check_regularity(a)?;
    let p = &a.poset;
    let mut uf = UnionFind::new(p.len());
    for g in 0..a.group.order() as u32 {
        for x in 0..p.len() {
            uf.union(x, a.act(g, x));
        }
    }
    let (k, class) = uf.labels();
    let mut rel = vec![false; k * k];
    for x in 0..p.len() {
        for y in 0..p.len() {
            if p.leq(x, y) {
                rel[class[x] * k + class[y]] = true;
            }
        }
    }
    let mut labels = vec![String::new(); k];
    for x in (0..p.len()).rev() {
        labels[class[x]] = format!("[{}]", p.label(x));
    }
    let q = Poset::new(labels, |i, j| rel[i * k + j])
        .map_err(|e| Error::Consistency(format!("orbit relation is not a partial order: {e}")))?;
    Ok((q, class))
}

pub fn check_regularity(a: &GroupAction) -> Result<()> {
    let p = &a.poset;
    for g in 0..a.group.order() as u32 {
        for x in 0..p.len() {
            let gx = a.act(g, x);
            if gx != x && p.leq(x, gx) {
                return Err(Error::Regularity { g: g as usize, x });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn antichain(n: usize) -> Arc<Poset> {
        Arc::new(Poset::new((0..n).map(|i| i.to_string()).collect(), |a, b| a == b).unwrap())
    }

    #[test]
    fn symmetric_group() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let table = (0..36).map(|i| s3.mul(i / 6, i % 6)).collect();
        FiniteGroup::from_table(6, table, (0..6).map(|i| i.to_string()).collect()).unwrap();
    }

    #[test]
    fn trivial_action_gives_poset() {
        let p = Arc::new(Poset::new(vec!["0".into(), "1".into()], |a, b| a <= b).unwrap());
        let a = GroupAction::trivial(p.clone());
        let ac = action_category(&a);
        assert_eq!(ac.cat.num_morphisms(), 3);
        let (q, _) = poset_quotient(&a).unwrap();
        assert_eq!(q.len(), 2);
    }

    #[test]
    fn swap_of_incomparables() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let a = GroupAction::new(g, antichain(2), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let (q, _) = poset_quotient(&a).unwrap();
        assert_eq!(q.len(), 1);
        let ac = action_category(&a);
        ac.cat.validate().unwrap();
        assert_eq!(ac.cat.num_morphisms(), 4);
    }

    #[test]
    fn quotient_group() {
        let z6 = FiniteGroup::cyclic(6);
        let sub = z6.closure(&[2]);
        assert_eq!(sub, vec![0, 2, 4]);
        let (q, proj) = z6.quotient(&sub).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj[3], 1);
    }
}

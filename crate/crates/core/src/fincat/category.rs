use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite category with indexed objects and morphisms.
///
/// Composition is stored sparsely over composable pairs: for each morphism
/// `g` the row `comp[g]` lists `f ∘ g` for `f` ranging over the morphisms
/// out of `tgt(g)`, in the order of `out(tgt(g))`.
#[derive(Clone, Debug)]
pub struct FinCat {
    obj_labels: Vec<String>,
    src: Vec<u32>,
    tgt: Vec<u32>,
    mor_labels: Vec<String>,
    ident: Vec<u32>,
    out: Vec<Vec<u32>>,
    pos_in_out: Vec<u32>,
    comp: Vec<Vec<u32>>,
    is_id: Vec<bool>,
}

/// Incremental construction of a [`FinCat`].
#[derive(Clone, Debug, Default)]
pub struct CatBuilder {
    obj_labels: Vec<String>,
    src: Vec<u32>,
    tgt: Vec<u32>,
    mor_labels: Vec<String>,
    ident: Vec<Option<u32>>,
}

impl CatBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, label: impl Into<String>) -> u32 {
        self.obj_labels.push(label.into());
        self.ident.push(None);
        (self.obj_labels.len() - 1) as u32
    }

    pub fn add_morphism(&mut self, src: u32, tgt: u32, label: impl Into<String>) -> u32 {
        self.src.push(src);
        self.tgt.push(tgt);
        self.mor_labels.push(label.into());
        (self.src.len() - 1) as u32
    }

    /// Adds a fresh identity morphism at `obj`.
    pub fn add_identity(&mut self, obj: u32) -> u32 {
        let label = format!("id_{}", self.obj_labels[obj as usize]);
        let m = self.add_morphism(obj, obj, label);
        self.ident[obj as usize] = Some(m);
        m
    }

    pub fn set_identity(&mut self, obj: u32, mor: u32) {
        self.ident[obj as usize] = Some(mor);
    }

    pub fn num_objects(&self) -> usize {
        self.obj_labels.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.src.len()
    }

    /// Builds and validates exhaustively. `compose(f, g)` must return `f ∘ g`.
    pub fn build<F>(self, compose: F) -> Result<FinCat>
    where
        F: FnMut(u32, u32) -> Result<u32>,
    {
        let cat = self.assemble(compose)?;
        cat.validate()?;
        Ok(cat)
    }

    /// Builds without the associativity and identity checks, for categories
    /// derived from an already validated one.
    pub(crate) fn build_trusted<F>(self, compose: F) -> Result<FinCat>
    where
        F: FnMut(u32, u32) -> Result<u32>,
    {
        self.assemble(compose)
    }

    fn assemble<F>(self, mut compose: F) -> Result<FinCat>
    where
        F: FnMut(u32, u32) -> Result<u32>,
    {
        let nobj = self.obj_labels.len();
        let nmor = self.src.len();
        let mut ident = Vec::with_capacity(nobj);
        for (x, id) in self.ident.iter().enumerate() {
            let m = id.ok_or_else(|| Error::Axiom(format!("object {} has no identity", self.obj_labels[x])))?;
            if self.src[m as usize] as usize != x || self.tgt[m as usize] as usize != x {
                return Err(Error::Axiom(format!("identity of {} has wrong endpoints", self.obj_labels[x])));
            }
            ident.push(m);
        }
        let mut out: Vec<Vec<u32>> = vec![Vec::new(); nobj];
        let mut pos_in_out = vec![0u32; nmor];
        for m in 0..nmor {
            let s = self.src[m] as usize;
            if s >= nobj || self.tgt[m] as usize >= nobj {
                return Err(Error::InvalidInput(format!("morphism {m} has an endpoint out of range")));
            }
            pos_in_out[m] = out[s].len() as u32;
            out[s].push(m as u32);
        }
        let mut is_id = vec![false; nmor];
        for &m in &ident {
            is_id[m as usize] = true;
        }
        let mut comp = Vec::with_capacity(nmor);
        for g in 0..nmor {
            let y = self.tgt[g] as usize;
            let mut row = Vec::with_capacity(out[y].len());
            for &f in &out[y] {
                let c = compose(f, g as u32)?;
                if c as usize >= nmor
                    || self.src[c as usize] != self.src[g]
                    || self.tgt[c as usize] != self.tgt[f as usize]
                {
                    return Err(Error::Axiom(format!(
                        "composite {} ∘ {} has wrong endpoints",
                        self.mor_labels[f as usize], self.mor_labels[g]
                    )));
                }
                row.push(c);
            }
            comp.push(row);
        }
        Ok(FinCat {
            obj_labels: self.obj_labels,
            src: self.src,
            tgt: self.tgt,
            mor_labels: self.mor_labels,
            ident,
            out,
            pos_in_out,
            comp,
            is_id,
        })
    }
}

impl FinCat {
    /// Identity laws and associativity. By Light's test it is enough that
    /// `(h∘f)∘g = h∘(f∘g)` for all h, g and every f in a generating set.
    pub fn validate(&self) -> Result<()> {
        for g in 0..self.num_morphisms() as u32 {
            let (x, y) = (self.src(g), self.tgt(g));
            if self.compose(self.identity(y), g) != g || self.compose(g, self.identity(x)) != g {
                return Err(Error::Axiom(format!("identity law fails at {}", self.mor_label(g))));
            }
        }
        let mut into: Vec<Vec<u32>> = vec![Vec::new(); self.num_objects()];
        for g in self.morphisms() {
            into[self.tgt(g) as usize].push(g);
        }
        for f in super::morse::greedy_generators(self) {
            for &g in &into[self.src(f) as usize] {
                let fg = self.compose(f, g);
                for &h in &self.out[self.tgt(f) as usize] {
                    let a = self.compose(h, fg);
                    let b = self.compose(self.compose(h, f), g);
                    if a != b {
                        return Err(Error::Axiom(format!(
                            "associativity fails for (h, f, g) = ({}, {}, {})",
                            self.mor_label(h),
                            self.mor_label(f),
                            self.mor_label(g)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_objects(&self) -> usize {
        self.obj_labels.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.src.len()
    }

    #[inline]
    pub fn src(&self, m: u32) -> u32 {
        self.src[m as usize]
    }

    #[inline]
    pub fn tgt(&self, m: u32) -> u32 {
        self.tgt[m as usize]
    }

    #[inline]
    pub fn identity(&self, x: u32) -> u32 {
        self.ident[x as usize]
    }

    #[inline]
    pub fn is_identity(&self, m: u32) -> bool {
        self.is_id[m as usize]
    }

    /// `f ∘ g`; panics unless `tgt(g) == src(f)`.
    #[inline]
    pub fn compose(&self, f: u32, g: u32) -> u32 {
        debug_assert_eq!(self.tgt(g), self.src(f), "composing non-composable morphisms");
        self.comp[g as usize][self.pos_in_out[f as usize] as usize]
    }

    pub fn try_compose(&self, f: u32, g: u32) -> Option<u32> {
        (self.tgt(g) == self.src(f)).then(|| self.compose(f, g))
    }

    /// Morphisms out of `x`, in id order.
    pub fn out(&self, x: u32) -> &[u32] {
        &self.out[x as usize]
    }

    pub fn hom(&self, x: u32, y: u32) -> Vec<u32> {
        self.out[x as usize].iter().copied().filter(|&m| self.tgt(m) == y).collect()
    }

    pub fn obj_label(&self, x: u32) -> &str {
        &self.obj_labels[x as usize]
    }

    pub fn mor_label(&self, m: u32) -> &str {
        &self.mor_labels[m as usize]
    }

    pub fn obj_labels(&self) -> &[String] {
        &self.obj_labels
    }

    pub fn objects(&self) -> std::ops::Range<u32> {
        0..self.num_objects() as u32
    }

    pub fn morphisms(&self) -> std::ops::Range<u32> {
        0..self.num_morphisms() as u32
    }

    /// Number of composable pairs (f, g).
    pub fn num_composable_pairs(&self) -> u64 {
        self.comp.iter().map(|r| r.len() as u64).sum()
    }

    pub fn is_isomorphism(&self, f: u32) -> bool {
        self.inverse(f).is_some()
    }

    pub fn inverse(&self, f: u32) -> Option<u32> {
        let (x, y) = (self.src(f), self.tgt(f));
        self.out(y)
            .iter()
            .copied()
            .find(|&g| self.tgt(g) == x && self.compose(g, f) == self.identity(x) && self.compose(f, g) == self.identity(y))
    }

    /// An object receiving exactly one morphism from every object.
    pub fn terminal_object(&self) -> Option<u32> {
        let n = self.num_objects();
        let mut into: Vec<HashMap<u32, u32>> = vec![HashMap::new(); n];
        for m in self.morphisms() {
            *into[self.tgt(m) as usize].entry(self.src(m)).or_insert(0) += 1;
        }
        (0..n as u32).find(|&t| into[t as usize].len() == n && into[t as usize].values().all(|&c| c == 1))
    }

    /// An object with exactly one morphism to every object.
    pub fn initial_object(&self) -> Option<u32> {
        let n = self.num_objects();
        self.objects().find(|&x| {
            let mut cnt = vec![0u32; n];
            for &m in self.out(x) {
                cnt[self.tgt(m) as usize] += 1;
            }
            cnt.iter().all(|&c| c == 1)
        })
    }

    /// Connected components of the underlying graph; component id per object.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut uf = UnionFind::new(self.num_objects());
        for m in self.morphisms() {
            uf.union(self.src(m) as usize, self.tgt(m) as usize);
        }
        uf.labels()
    }

    pub fn is_connected(&self) -> bool {
        self.num_objects() > 0 && self.components().0 == 1
    }

    /// Serializable form with composition as a triple list.
    pub fn to_raw(&self) -> RawCategory {
        let mut composition = Vec::new();
        for g in self.morphisms() {
            for (i, &f) in self.out(self.tgt(g)).iter().enumerate() {
                composition.push([f, g, self.comp[g as usize][i]]);
            }
        }
        RawCategory {
            objects: self.obj_labels.clone(),
            morphisms: self
                .morphisms()
                .map(|m| RawMorphism {
                    src: self.src(m),
                    tgt: self.tgt(m),
                    label: self.mor_labels[m as usize].clone(),
                })
                .collect(),
            identities: self.ident.clone(),
            composition,
        }
    }
}

/// JSON schema for finite categories: `composition` holds triples
/// `[f, g, f∘g]` for every composable pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub identities: Vec<u32>,
    pub composition: Vec<[u32; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub src: u32,
    pub tgt: u32,
    pub label: String,
}

/// Validates raw tables; rejects missing composites, missing identities and
/// non-associative triples (naming the witnesses).
pub fn validate_category(raw: &RawCategory) -> Result<FinCat> {
    if raw.identities.len() != raw.objects.len() {
        return Err(Error::Axiom("every object needs exactly one identity".into()));
    }
    let mut b = CatBuilder::new();
    for o in &raw.objects {
        b.add_object(o.clone());
    }
    for m in &raw.morphisms {
        b.add_morphism(m.src, m.tgt, m.label.clone());
    }
    for (x, &m) in raw.identities.iter().enumerate() {
        if m as usize >= raw.morphisms.len() {
            return Err(Error::Axiom(format!("identity of object {x} is out of range")));
        }
        b.set_identity(x as u32, m);
    }
    let mut table: HashMap<(u32, u32), u32> = HashMap::new();
    for &[f, g, c] in &raw.composition {
        if table.insert((f, g), c).is_some_and(|old| old != c) {
            return Err(Error::Axiom(format!("composite of ({f}, {g}) given twice")));
        }
    }
    let labels: Vec<String> = raw.morphisms.iter().map(|m| m.label.clone()).collect();
    b.build(|f, g| {
        table
            .get(&(f, g))
            .copied()
            .ok_or_else(|| Error::Axiom(format!("missing composite {} ∘ {}", labels[f as usize], labels[g as usize])))
    })
}

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Unions, keeping the smaller root as representative.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// (number of classes, dense class label per element in order of first appearance)
    pub fn labels(&mut self) -> (usize, Vec<usize>) {
        let n = self.parent.len();
        let mut map = HashMap::new();
        let mut out = Vec::with_capacity(n);
        for x in 0..n {
            let r = self.find(x);
            let next = map.len();
            out.push(*map.entry(r).or_insert(next));
        }
        (map.len(), out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_chain() -> RawCategory {
        RawCategory {
            objects: vec!["0".into(), "1".into()],
            morphisms: vec![
                RawMorphism { src: 0, tgt: 0, label: "id0".into() },
                RawMorphism { src: 1, tgt: 1, label: "id1".into() },
                RawMorphism { src: 0, tgt: 1, label: "a".into() },
            ],
            identities: vec![0, 1],
            composition: vec![[0, 0, 0], [1, 1, 1], [2, 0, 2], [1, 2, 2]],
        }
    }

    #[test]
    fn terminal_category() {
        let raw = RawCategory {
            objects: vec!["*".into()],
            morphisms: vec![RawMorphism { src: 0, tgt: 0, label: "id".into() }],
            identities: vec![0],
            composition: vec![[0, 0, 0]],
        };
        let c = validate_category(&raw).unwrap();
        assert_eq!((c.num_objects(), c.num_morphisms()), (1, 1));
        assert_eq!(c.terminal_object(), Some(0));
    }

    #[test]
    fn poset_two_chain() {
        let c = validate_category(&two_chain()).unwrap();
        assert_eq!(c.num_morphisms(), 3);
        assert_eq!(c.terminal_object(), Some(1));
        assert_eq!(c.initial_object(), Some(0));
        assert_eq!(validate_category(&c.to_raw()).unwrap().to_raw(), c.to_raw());
    }

    #[test]
    fn missing_composite_rejected() {
        let mut raw = two_chain();
        raw.composition.pop();
        assert!(matches!(validate_category(&raw), Err(Error::Axiom(_))));
    }

    #[test]
    fn broken_associativity_named() {
        // Z/3 = {1, a, b = a^2}; then a∘b is changed from 1 to a.
        let mor = |l: &str| RawMorphism { src: 0, tgt: 0, label: l.into() };
        let mut raw = RawCategory {
            objects: vec!["*".into()],
            morphisms: vec![mor("1"), mor("a"), mor("b")],
            identities: vec![0],
            composition: vec![
                [0, 0, 0],
                [0, 1, 1],
                [0, 2, 2],
                [1, 0, 1],
                [2, 0, 2],
                [1, 1, 2],
                [1, 2, 0],
                [2, 1, 0],
                [2, 2, 1],
            ],
        };
        assert!(validate_category(&raw).is_ok());
        raw.composition[6] = [1, 2, 1];
        let err = validate_category(&raw).unwrap_err().to_string();
        assert!(err.contains("associativity"), "{err}");
    }
}

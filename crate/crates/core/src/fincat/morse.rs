use std::collections::{HashMap, VecDeque};
use std::sync::Arc;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use super::chain::{ChainComplex, SparseMatrix};
use super::homology::{homology, Coefficients, HomologyResult};
use super::ops::skeleton;
use super::{FinCat, Int};
use crate::error::{Error, Result};
use crate::guards::Guards;

/// Normal forms for the morphisms of a finite category with respect to a
/// generating set: each non-identity morphism gets its shortlex-least word.
pub struct Rewriting<'a> {
    c: &'a FinCat,
    pub generators: Vec<u32>,
    len: Vec<u32>,
    prefix: Vec<Vec<u32>>,
    suffix: Vec<Vec<u32>>,
    chain_next: Vec<Vec<u32>>,
}

enum Class {
    Critical,
    Down,
    /// Matched with a cell one degree up.
    Up(Vec<u32>),
}

impl<'a> Rewriting<'a> {
    pub fn new(c: &'a FinCat) -> Result<Self> {
        let generators = choose_generators(c);
        Self::with_generators(c, generators)
    }

    pub fn with_generators(c: &'a FinCat, mut generators: Vec<u32>) -> Result<Self> {
        generators.sort_unstable();
        let nm = c.num_morphisms();
        let mut is_gen = vec![false; nm];
        for &s in &generators {
            if c.is_identity(s) {
                return Err(Error::Morse("identity chosen as generator".into()));
            }
            is_gen[s as usize] = true;
        }
        let mut len = vec![u32::MAX; nm];
        let mut prefix: Vec<Vec<u32>> = vec![Vec::new(); nm];
        let mut word: Vec<Vec<u32>> = vec![Vec::new(); nm];
        let mut queue = VecDeque::new();
        for x in c.objects() {
            let id = c.identity(x);
            len[id as usize] = 0;
            prefix[id as usize] = vec![id];
            queue.push_back(id);
        }
        // FIFO over (length, parent order, generator order) gives shortlex-least words.
        while let Some(m) = queue.pop_front() {
            for &s in c.out(c.tgt(m)) {
                if !is_gen[s as usize] {
                    continue;
                }
                let n = c.compose(s, m);
                if len[n as usize] != u32::MAX {
                    continue;
                }
                len[n as usize] = len[m as usize] + 1;
                let mut p = prefix[m as usize].clone();
                p.push(n);
                prefix[n as usize] = p;
                let mut w = word[m as usize].clone();
                w.push(s);
                word[n as usize] = w;
                queue.push_back(n);
            }
        }
        if let Some(m) = c.morphisms().find(|&m| len[m as usize] == u32::MAX) {
            return Err(Error::Morse(format!("generators do not reach {}", c.mor_label(m))));
        }
        let mut suffix: Vec<Vec<u32>> = vec![Vec::new(); nm];
        for m in c.morphisms() {
            let w = &word[m as usize];
            let l = w.len();
            let mut s = vec![0u32; l + 1];
            let mut acc = c.identity(c.tgt(m));
            s[l] = acc;
            for k in (0..l).rev() {
                acc = c.compose(acc, w[k]);
                s[k] = acc;
            }
            for (k, &x) in s.iter().enumerate() {
                if len[x as usize] as usize != l - k {
                    return Err(Error::Morse(format!("normal forms are not suffix-closed at {}", c.mor_label(m))));
                }
            }
            suffix[m as usize] = s;
        }
        let mut rw = Rewriting {
            c,
            generators,
            len,
            prefix,
            suffix,
            chain_next: Vec::new(),
        };
        let chain_next = c
            .morphisms()
            .map(|w| {
                if c.is_identity(w) {
                    return Vec::new();
                }
                c.out(c.tgt(w))
                    .iter()
                    .copied()
                    .filter(|&u| !c.is_identity(u) && rw.is_chain_pair(w, u))
                    .collect::<Vec<u32>>()
            })
            .collect::<Vec<_>>();
        let mut chain_next = chain_next;
        for v in chain_next.iter_mut() {
            v.sort_unstable();
        }
        rw.chain_next = chain_next;
        Ok(rw)
    }

    #[inline]
    fn pre(&self, m: u32, k: u32) -> u32 {
        self.prefix[m as usize][k as usize]
    }

    #[inline]
    fn suf(&self, m: u32, k: u32) -> u32 {
        self.suffix[m as usize][k as usize]
    }

    pub fn normal_form_length(&self, m: u32) -> u32 {
        self.len[m as usize]
    }

    /// Whether the concatenation of the normal forms of `a` then `b` is the
    /// normal form of `b ∘ a`.
    pub fn normal(&self, a: u32, b: u32) -> bool {
        let c = self.c.compose(b, a);
        if self.c.is_identity(c) {
            return false;
        }
        let la = self.len[a as usize];
        self.len[c as usize] == la + self.len[b as usize] && self.pre(c, la) == a && self.suf(c, la) == b
    }

    fn is_chain_pair(&self, a: u32, b: u32) -> bool {
        if self.normal(a, b) {
            return false;
        }
        let lb = self.len[b as usize];
        lb == 1 || self.normal(a, self.pre(b, lb - 1))
    }

    fn classify(&self, w: &[u32]) -> Class {
        let w0 = w[0];
        if self.len[w0 as usize] > 1 {
            let mut tau = Vec::with_capacity(w.len() + 1);
            tau.push(self.pre(w0, 1));
            tau.push(self.suf(w0, 1));
            tau.extend_from_slice(&w[1..]);
            return Class::Up(tau);
        }
        let n = w.len();
        let mut j = 1;
        while j < n && self.chain_next[w[j - 1] as usize].binary_search(&w[j]).is_ok() {
            j += 1;
        }
        if j == n {
            return Class::Critical;
        }
        let (a, b) = (w[j - 1], w[j]);
        if self.normal(a, b) {
            return Class::Down;
        }
        let lb = self.len[b as usize];
        let k = (1..lb).find(|&k| !self.normal(a, self.pre(b, k))).expect("non-chain pair has a reducible proper prefix");
        let mut tau = Vec::with_capacity(n + 1);
        tau.extend_from_slice(&w[..j]);
        tau.push(self.pre(b, k));
        tau.push(self.suf(b, k));
        tau.extend_from_slice(&w[j + 1..]);
        Class::Up(tau)
    }

    /// Critical cells of degree k, lexicographic, flattened with stride k.
    pub fn critical_cells(&self, k: usize, guards: &Guards) -> Result<Vec<u32>> {
        let c = self.c;
        if k == 0 {
            return Ok(c.objects().collect());
        }
        let mut out = Vec::new();
        let mut count = 0u64;
        let mut stack: Vec<u32> = Vec::with_capacity(k);
        fn dfs(rw: &Rewriting, k: usize, stack: &mut Vec<u32>, out: &mut Vec<u32>, count: &mut u64, limit: u64) -> Result<()> {
            if stack.len() == k {
                *count += 1;
                if *count > limit {
                    return Err(Error::guard("max_simplices_per_degree", *count, limit));
                }
                out.extend_from_slice(stack);
                return Ok(());
            }
            let last = *stack.last().unwrap();
            for &u in &rw.chain_next[last as usize] {
                stack.push(u);
                dfs(rw, k, stack, out, count, limit)?;
                stack.pop();
            }
            Ok(())
        }
        for &s in &self.generators {
            stack.clear();
            stack.push(s);
            dfs(self, k, &mut stack, &mut out, &mut count, guards.max_simplices_per_degree)?;
        }
        Ok(out)
    }

    /// Faces of a cell of degree ≥ 2 with their signs, degenerate faces omitted.
    fn faces(&self, w: &[u32]) -> Vec<(Vec<u32>, i64)> {
        let n = w.len();
        let mut out = Vec::with_capacity(n + 1);
        out.push((w[1..].to_vec(), 1));
        for i in 1..n {
            let comp = self.c.compose(w[i], w[i - 1]);
            if self.c.is_identity(comp) {
                continue;
            }
            let mut f = Vec::with_capacity(n - 1);
            f.extend_from_slice(&w[..i - 1]);
            f.push(comp);
            f.extend_from_slice(&w[i + 1..]);
            out.push((f, if i % 2 == 0 { 1 } else { -1 }));
        }
        out.push((w[..n - 1].to_vec(), if n % 2 == 0 { 1 } else { -1 }));
        out
    }
}

/// Greedy generating set: isomorphisms first, then the rest ordered by how
/// often they factor through two non-isomorphisms; redundant picks pruned.
pub fn choose_generators(c: &FinCat) -> Vec<u32> {
    let nm = c.num_morphisms();
    let is_iso: Vec<bool> = c.morphisms().map(|m| c.is_isomorphism(m)).collect();
    let mut fact = vec![0u64; nm];
    for a in c.morphisms() {
        if c.is_identity(a) || is_iso[a as usize] {
            continue;
        }
        for &b in c.out(c.tgt(a)) {
            if c.is_identity(b) || is_iso[b as usize] {
                continue;
            }
            let m = c.compose(b, a);
            if !c.is_identity(m) {
                fact[m as usize] += 1;
            }
        }
    }
    let mut order: Vec<u32> = c.morphisms().filter(|&m| !c.is_identity(m)).collect();
    order.sort_by_key(|&m| (!is_iso[m as usize], fact[m as usize], m));
    let mut into: Vec<Vec<u32>> = vec![Vec::new(); c.num_objects()];
    for m in c.morphisms() {
        if !c.is_identity(m) {
            into[c.tgt(m) as usize].push(m);
        }
    }
    let mut gens = Vec::new();
    let mut cl = Closure::new(c, &into);
    for &m in &order {
        if !cl.has(m) {
            gens.push(m);
            cl.add(m);
        }
    }
    let budget = c.num_composable_pairs().saturating_mul(gens.len() as u64);
    if budget <= 400_000_000 {
        let mut i = gens.len();
        while i > 0 {
            i -= 1;
            let s = gens[i];
            let mut cl = Closure::new(c, &into);
            for &t in &gens {
                if t != s {
                    cl.add(t);
                }
            }
            if cl.has(s) {
                gens.remove(i);
            }
        }
    }
    gens.sort_unstable();
    gens
}

/// Greedy generating set: non-identity morphisms in index order, each kept
/// unless it is already a composite of earlier picks.
pub(crate) fn greedy_generators(c: &FinCat) -> Vec<u32> {
    let mut into: Vec<Vec<u32>> = vec![Vec::new(); c.num_objects()];
    for m in c.morphisms() {
        if !c.is_identity(m) {
            into[c.tgt(m) as usize].push(m);
        }
    }
    let mut cl = Closure::new(c, &into);
    let mut gens = Vec::new();
    for m in c.morphisms() {
        if !c.is_identity(m) && !cl.has(m) {
            gens.push(m);
            cl.add(m);
        }
    }
    gens
}

struct Closure<'a> {
    c: &'a FinCat,
    into: &'a [Vec<u32>],
    member: Vec<bool>,
    queue: Vec<u32>,
}

impl<'a> Closure<'a> {
    fn new(c: &'a FinCat, into: &'a [Vec<u32>]) -> Self {
        Closure {
            c,
            into,
            member: vec![false; c.num_morphisms()],
            queue: Vec::new(),
        }
    }

    fn has(&self, m: u32) -> bool {
        self.member[m as usize]
    }

    fn add(&mut self, m: u32) {
        if self.member[m as usize] {
            return;
        }
        self.member[m as usize] = true;
        self.queue.push(m);
        let c = self.c;
        while let Some(x) = self.queue.pop() {
            for &y in c.out(c.tgt(x)) {
                if self.member[y as usize] && !c.is_identity(y) {
                    let z = c.compose(y, x);
                    if !c.is_identity(z) && !self.member[z as usize] {
                        self.member[z as usize] = true;
                        self.queue.push(z);
                    }
                }
            }
            for &y in &self.into[c.src(x) as usize] {
                if self.member[y as usize] {
                    let z = c.compose(x, y);
                    if !c.is_identity(z) && !self.member[z as usize] {
                        self.member[z as usize] = true;
                        self.queue.push(z);
                    }
                }
            }
        }
    }
}

/// Morse-reduced normalized nerve complex in degrees 0..=depth.
pub struct MorseComplex {
    pub complex: ChainComplex,
    pub generators: Vec<u32>,
    /// Flattened critical cells per degree.
    pub critical: Vec<Vec<u32>>,
}

enum Memo {
    InProgress,
    Done(Arc<Vec<(u32, Int)>>),
}

pub fn morse_complex(c: &FinCat, depth: usize, guards: &Guards) -> Result<MorseComplex> {
    let rw = Rewriting::new(c)?;
    morse_complex_with(&rw, depth, guards)
}

pub fn morse_complex_with(rw: &Rewriting, depth: usize, guards: &Guards) -> Result<MorseComplex> {
    let c = rw.c;
    let mut critical = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        critical.push(rw.critical_cells(k, guards)?);
    }
    let dims: Vec<usize> = critical
        .iter()
        .enumerate()
        .map(|(k, v)| if k == 0 { v.len() } else { v.len() / k })
        .collect();
    let visited = AtomicU64::new(0);
    let mats: Vec<Result<SparseMatrix>> = std::thread::scope(|s| {
        let handles: Vec<_> = (1..=depth)
            .map(|k| {
                let critical = &critical;
                let dims = &dims;
                let visited = &visited;
                s.spawn(move || -> Result<SparseMatrix> {
                    if k == 1 {
                        let cols = critical[1]
                            .iter()
                            .map(|&m| vec![(c.tgt(m), Int::ONE), (c.src(m), Int::Small(-1))])
                            .collect();
                        return Ok(SparseMatrix::from_columns(dims[0], cols));
                    }
                    let mut flow = Flow {
                        rw,
                        lower: &critical[k - 1],
                        k: k - 1,
                        memo: HashMap::new(),
                        visited,
                        limit: guards.max_morse_memory,
                    };
                    let mut cols = Vec::with_capacity(dims[k]);
                    for cell in critical[k].chunks(k) {
                        let mut acc: Vec<(u32, Int)> = Vec::new();
                        for (f, s) in rw.faces(cell) {
                            let v = flow.phi(f)?;
                            let s = Int::Small(s);
                            acc.extend(v.iter().map(|(i, x)| (*i, x.mul(&s))));
                        }
                        cols.push(acc);
                    }
                    Ok(SparseMatrix::from_columns(dims[k - 1], cols))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("morse worker")).collect()
    });
    let mut higher = Vec::with_capacity(depth);
    for m in mats {
        higher.push(m?);
    }
    let complex = ChainComplex::new(dims, higher).map_err(|e| Error::Morse(format!("Morse complex invalid: {e}")))?;
    Ok(MorseComplex {
        complex,
        generators: rw.generators.clone(),
        critical,
    })
}

// Rough heap cost of a memo entry and of one stored coefficient.
const ENTRY_BYTES: u64 = 96;
const COEFF_BYTES: u64 = 24;

struct Flow<'r, 'a> {
    rw: &'r Rewriting<'a>,
    lower: &'r [u32],
    k: usize,
    memo: HashMap<Vec<u32>, Memo>,
    /// Approximate bytes held by the memo tables of all degrees, shared by
    /// the worker threads.
    visited: &'r AtomicU64,
    limit: u64,
}

struct Frame {
    cell: Vec<u32>,
    pending: Vec<(Vec<u32>, i64)>,
    pos: usize,
    acc: Vec<(u32, Int)>,
    mult: i64,
}

impl Flow<'_, '_> {
    fn critical_index(&self, cell: &[u32]) -> Option<u32> {
        let k = self.k;
        let n = self.lower.len() / k;
        let (mut lo, mut hi) = (0, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.lower[mid * k..(mid + 1) * k].cmp(cell) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid as u32),
            }
        }
        None
    }

    fn charge(&self, words: u64) -> Result<()> {
        let n = self.visited.fetch_add(words, AtomicOrdering::Relaxed) + words;
        if n > self.limit {
            return Err(Error::guard("max_morse_memory", n, self.limit));
        }
        Ok(())
    }

    /// Resolves cells that need no recursion; otherwise returns the frame.
    fn open(&mut self, cell: Vec<u32>) -> Result<Option<Frame>> {
        self.charge(ENTRY_BYTES + 4 * cell.len() as u64)?;
        match self.rw.classify(&cell) {
            Class::Critical => {
                let i = self.critical_index(&cell).ok_or_else(|| Error::Morse("critical cell not enumerated".into()))?;
                self.memo.insert(cell, Memo::Done(Arc::new(vec![(i, Int::ONE)])));
                Ok(None)
            }
            Class::Down => {
                self.memo.insert(cell, Memo::Done(Arc::new(Vec::new())));
                Ok(None)
            }
            Class::Up(tau) => {
                match self.rw.classify(&tau) {
                    Class::Down => {}
                    _ => return Err(Error::Morse(format!("matching is not an involution at {cell:?}"))),
                }
                let mut incidence = 0i64;
                let mut pending = Vec::new();
                for (f, s) in self.rw.faces(&tau) {
                    if f == cell {
                        incidence += s;
                    } else {
                        pending.push((f, s));
                    }
                }
                if incidence.abs() != 1 {
                    return Err(Error::Morse(format!("matched pair has incidence {incidence}")));
                }
                self.memo.insert(cell.clone(), Memo::InProgress);
                Ok(Some(Frame {
                    cell,
                    pending,
                    pos: 0,
                    acc: Vec::new(),
                    mult: -incidence,
                }))
            }
        }
    }

    fn phi(&mut self, cell: Vec<u32>) -> Result<Arc<Vec<(u32, Int)>>> {
        if let Some(Memo::Done(v)) = self.memo.get(&cell) {
            return Ok(v.clone());
        }
        let root = cell.clone();
        let mut stack: Vec<Frame> = Vec::new();
        if let Some(f) = self.open(cell)? {
            stack.push(f);
        }
        while let Some(top) = stack.last_mut() {
            if top.pos < top.pending.len() {
                let (f, s) = &top.pending[top.pos];
                match self.memo.get(f) {
                    Some(Memo::Done(v)) => {
                        let s = Int::Small(*s);
                        top.acc.extend(v.iter().map(|(i, x)| (*i, x.mul(&s))));
                        top.pos += 1;
                    }
                    Some(Memo::InProgress) => return Err(Error::Morse("gradient path cycle; matching not acyclic".into())),
                    None => {
                        let f = f.clone();
                        if let Some(fr) = self.open(f)? {
                            stack.push(fr);
                        }
                    }
                }
            } else {
                let fr = stack.pop().unwrap();
                let m = Int::Small(fr.mult);
                let mut acc = super::chain::normalize_col(fr.acc);
                for e in acc.iter_mut() {
                    e.1 = e.1.mul(&m);
                }
                self.charge(COEFF_BYTES * acc.len() as u64)?;
                self.memo.insert(fr.cell, Memo::Done(Arc::new(acc)));
            }
        }
        match self.memo.get(&root) {
            Some(Memo::Done(v)) => Ok(v.clone()),
            _ => Err(Error::Morse("flow did not resolve".into())),
        }
    }
}

/// Integral or mod-ℓ homology of the nerve of `c` in degrees 0..depth−1,
/// computed on a skeleton with a Morse-reduced complex.
pub fn category_homology(c: &Arc<FinCat>, depth: usize, coeff: Coefficients, guards: &Guards) -> Result<HomologyResult> {
    let sk = skeleton(c);
    let mc = morse_complex(&sk.cat, depth, guards)?;
    Ok(homology(&mc.complex, coeff))
}

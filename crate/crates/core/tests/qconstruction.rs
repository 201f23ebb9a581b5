use std::collections::BTreeSet;
use std::sync::Arc;

use rbskit::qkt::{
    build_filt_category, build_monoidal, comma_contractibility, has_terminal_shape, psi_functor, q1_category, q2_hom,
    quillen_q, MonoidalCategory, PsiFunctor, QuillenQ,
};
use rbskit::ring::FiniteRing;
use rbskit::Guards;

fn gl(q: u64, n: u32) -> u64 {
    (0..n).map(|i| q.pow(n) - q.pow(i)).product()
}

/// Injective linear maps F_q^a → F_q^b.
fn injections(q: u64, a: u32, b: u32) -> u64 {
    if a > b {
        0
    } else {
        (0..a).map(|i| q.pow(b) - q.pow(i)).product()
    }
}

/// Isomorphism classes of spans x ↞ z ↣ y: Aut(z) acts freely on the pairs.
fn span_count(q: u64, x: u32, y: u32) -> u64 {
    (x..=y).map(|z| injections(q, x, z) * injections(q, z, y) / gl(q, z)).sum()
}

/// Graded flags with graded pieces `blocks` in F_q^n and chosen isomorphisms
/// of each piece: |GL_n| over the unipotent radical.
fn graded_flags(q: u64, blocks: &[usize]) -> u64 {
    let n: usize = blocks.iter().sum();
    let mut pairs = 0;
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            pairs += blocks[i] * blocks[j];
        }
    }
    gl(q, n as u32) / q.pow(pairs as u32)
}

/// Hom(m, m′) in M_E: contiguous blocks of m summing to the parts of m′.
fn monoidal_hom(q: u64, m: &[usize], t: &[usize]) -> u64 {
    let mut total = 1;
    let mut rest = m;
    for &d in t {
        let mut acc = 0;
        let mut k = 0;
        while acc < d && k < rest.len() {
            acc += rest[k];
            k += 1;
        }
        if acc != d {
            return 0;
        }
        total *= graded_flags(q, &rest[..k]);
        rest = &rest[k..];
    }
    if rest.is_empty() {
        total
    } else {
        0
    }
}

fn q_of(q: u32, n: usize) -> QuillenQ {
    let g = Guards::default();
    quillen_q(&build_filt_category(q, n, &g).unwrap(), &g).unwrap()
}

fn monoidal(q: u32, max_part: usize, cap: usize) -> Arc<MonoidalCategory> {
    Arc::new(build_monoidal(&FiniteRing::field(q).unwrap(), max_part, cap, &Guards::default()).unwrap())
}

fn psi(n: usize, cap: usize) -> PsiFunctor {
    let g = Guards::default();
    let e = build_filt_category(2, n, &g).unwrap();
    let q = Arc::new(quillen_q(&e, &g).unwrap());
    let me = Arc::new(build_monoidal(&e.ring, n, cap, &g).unwrap());
    psi_functor(q, Arc::new(q1_category(me).unwrap()), &g).unwrap()
}

#[test]
fn filtered_hom_sets_are_all_linear_maps() {
    let g = Guards::default();
    for (q, n) in [(2u32, 1usize), (2, 2), (3, 1), (3, 2)] {
        let e = build_filt_category(q, n, &g).unwrap();
        assert!(e.axioms.all_hold(), "F{q}, n={n}");
        for x in 0..=n as u32 {
            for y in 0..=n as u32 {
                assert_eq!(e.cat.hom(x, y).len() as u64, (q as u64).pow(x * y), "F{q}: Hom({x}, {y})");
            }
        }
    }
    assert_eq!(build_filt_category(2, 1, &g).unwrap().cat.num_morphisms(), 5);
}

#[test]
fn quillen_hom_sets_count_span_classes() {
    for (q, n) in [(2u32, 1usize), (2, 2), (3, 1), (3, 2), (2, 3)] {
        let c = q_of(q, n);
        for x in 0..=n as u32 {
            for y in 0..=n as u32 {
                assert_eq!(c.cat.hom(x, y).len() as u64, span_count(q as u64, x, y), "Q(F{q}): Hom({x}, {y})");
            }
        }
    }
    let c = q_of(2, 1);
    let counts: Vec<usize> = [(0, 0), (0, 1), (1, 0), (1, 1)].iter().map(|&(x, y)| c.cat.hom(x, y).len()).collect();
    assert_eq!(counts, vec![1, 2, 0, 1]);
    assert_eq!(q_of(3, 1).cat.hom(1, 1).len(), 2);
}

#[test]
fn identity_spans_are_neutral() {
    let c = q_of(2, 2);
    for (i, s) in c.spans.iter().enumerate() {
        let (idx, idy) = (c.cat.identity(s.x as u32), c.cat.identity(s.y as u32));
        assert_eq!(c.cat.compose(idy, i as u32), i as u32);
        assert_eq!(c.cat.compose(i as u32, idx), i as u32);
    }
}

#[test]
fn monoidal_hom_sets_match_the_flag_count() {
    for (q, max_part, cap) in [(2u32, 2usize, 3usize), (3, 2, 2), (2, 3, 3)] {
        let me = monoidal(q, max_part, cap);
        for (a, m) in me.objects.iter().enumerate() {
            for (b, t) in me.objects.iter().enumerate() {
                let h = me.cat.hom(a as u32, b as u32).len() as u64;
                assert_eq!(h, monoidal_hom(q as u64, m, t), "F{q}: Hom({m:?}, {t:?})");
            }
        }
    }
    let me = monoidal(2, 2, 2);
    assert_eq!(me.cat.hom(me.obj(&[1, 1]).unwrap(), me.obj(&[2]).unwrap()).len(), 3);
}

#[test]
fn concatenation_is_strictly_unital() {
    let me = monoidal(2, 2, 3);
    let e = me.empty();
    for x in me.cat.objects() {
        assert_eq!(me.concat_obj(e, x), Some(x));
        assert_eq!(me.concat_obj(x, e), Some(x));
    }
    let cert = me.check().unwrap();
    assert!(cert.unit_and_associativity > 0 && cert.interchange > 0 && cert.monomorphism > 0);
}

#[test]
fn merging_is_associative_on_full_flags() {
    let me = monoidal(2, 3, 3);
    let (ones, top) = (me.obj(&[1, 1, 1]).unwrap(), me.obj(&[3]).unwrap());
    let direct: BTreeSet<u32> = me.cat.hom(ones, top).into_iter().collect();
    assert_eq!(direct.len(), 21);
    for mid in [[2, 1], [1, 2]] {
        let mid = me.obj(&mid).unwrap();
        let mut composites = BTreeSet::new();
        for f in me.cat.hom(ones, mid) {
            for g in me.cat.hom(mid, top) {
                composites.insert(me.cat.compose(g, f));
            }
        }
        assert_eq!(composites, direct);
    }
}

#[test]
fn hom_categories_have_terminal_objects() {
    for q in [2u32, 3] {
        let me = monoidal(q, 2, 2);
        let one = me.obj(&[1]).unwrap();
        let h = q2_hom(&me, one, one).unwrap();
        assert_eq!(h.num_components(), h.objects.len(), "F{q}");
    }
    let me = monoidal(2, 2, 3);
    for a in me.cat.objects() {
        for b in me.cat.objects() {
            let h = q2_hom(&me, a, b).unwrap();
            for x in 0..h.objects.len() as u32 {
                let (t, cell) = h.terminal_decomposition(x);
                assert!(has_terminal_shape(&me, &h.objects[t as usize]));
                assert_eq!(h.cat.hom(x, t), vec![cell]);
            }
        }
    }
}

#[test]
fn psi_is_fully_faithful_on_lines() {
    let p = psi(1, 2);
    let me = &p.q1.me;
    assert_eq!(p.functor.obj(0), me.empty());
    assert_eq!(p.functor.obj(1), me.obj(&[1]).unwrap());
    assert!(p.fully_faithful && p.policies_agree && p.representatives_terminal);
    for x in 0..2 {
        assert_eq!(p.functor.mor(p.q.cat.identity(x)), p.q1.cat.identity(p.functor.obj(x)));
    }
}

#[test]
fn comma_categories_are_contractible() {
    let p = psi(1, 2);
    let me = p.q1.me.clone();
    let g = Guards::default();
    for (target, pieces) in [(vec![], 0), (vec![1], 1), (vec![1, 1], 2)] {
        let (_, cert) = comma_contractibility(&p, me.obj(&target).unwrap(), 3, &g).unwrap();
        assert!(cert.all_hold(), "{cert:?}");
        assert_eq!(cert.pieces.len(), pieces, "{target:?}");
    }
}

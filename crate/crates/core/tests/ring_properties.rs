use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rbskit::ring::{enumerate_gl, enumerate_submodules, howell_form, FiniteRing, Mat, Submodule};
use rbskit::Guards;

const RINGS: [&str; 7] = ["F2", "F3", "F4", "F5", "Z/4", "Z/8", "Z/9"];

fn ring(i: usize) -> FiniteRing {
    FiniteRing::from_str_spec(RINGS[i % RINGS.len()]).unwrap()
}

/// Random r×n matrix over the ring with index `ri`.
fn matrix() -> impl Strategy<Value = (usize, Mat)> {
    (0..RINGS.len(), 1usize..=4, 1usize..=3).prop_flat_map(|(ri, r, n)| {
        let q = ring(ri).size() as u8;
        proptest::collection::vec(0..q, r * n).prop_map(move |data| (ri, Mat::new(r, n, data)))
    })
}

/// Product of random elementary row operations; invertible by construction.
fn invertible(ring: &FiniteRing, r: usize, ops: &[(usize, usize, u8)]) -> Mat {
    let mut g = Mat::identity(r);
    let units = ring.units();
    for &(i, j, s) in ops {
        let (i, j) = (i % r, j % r);
        if i == j {
            g.scale_row(i, units[s as usize % units.len()], ring);
        } else if s % 5 == 0 {
            g.swap_rows(i, j);
        } else {
            g.add_row_multiple(i, j, s % ring.size() as u8, ring);
        }
    }
    g
}

proptest! {
    #[test]
    fn howell_form_is_idempotent((ri, m) in matrix()) {
        let r = ring(ri);
        let h = howell_form(&r, &m);
        prop_assert_eq!(howell_form(&r, &h), h);
    }

    #[test]
    fn howell_form_ignores_invertible_row_operations(
        (ri, m) in matrix(),
        ops in proptest::collection::vec((0usize..4, 0usize..4, any::<u8>()), 0..12),
    ) {
        let r = ring(ri);
        let g = invertible(&r, m.rows(), &ops);
        prop_assert!(g.is_invertible(&r));
        prop_assert_eq!(howell_form(&r, &g.mul(&m, &r)), howell_form(&r, &m));
    }

    #[test]
    fn span_has_the_elements_of_its_generators((ri, m) in matrix()) {
        let r = ring(ri);
        let s = Submodule::span(&r, &m);
        for row in m.row_vecs() {
            prop_assert!(s.contains_vec(&r, &row));
        }
        prop_assert_eq!(s.elements(&r).len() as u64, s.cardinality(&r));
    }

    #[test]
    fn ring_axioms_on_random_triples(ri in 0..RINGS.len(), a in any::<u8>(), b in any::<u8>(), c in any::<u8>()) {
        let r = ring(ri);
        let q = r.size() as u8;
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(r.mul(a, r.mul(b, c)), r.mul(r.mul(a, b), c));
        prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
        prop_assert_eq!(r.mul(a, b), r.mul(b, a));
        prop_assert_eq!(r.add(a, r.neg(a)), 0);
        if let Some(i) = r.inv(a) {
            prop_assert_eq!(r.mul(a, i), 1);
        }
    }
}

fn gaussian_oracle(q: u64, n: u32, k: u32) -> u64 {
    if k == 0 || k == n {
        1
    } else if k > n {
        0
    } else {
        gaussian_oracle(q, n - 1, k - 1) + q.pow(k) * gaussian_oracle(q, n - 1, k)
    }
}

#[test]
fn subspace_counts_are_gaussian_binomials() {
    let g = Guards::default();
    for (q, n) in [(2u32, 1usize), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2)] {
        let r = FiniteRing::field(q).unwrap();
        let mut by_dim: BTreeMap<usize, u64> = BTreeMap::new();
        for s in enumerate_submodules(&r, n, &g).unwrap() {
            *by_dim.entry(s.rank(&r)).or_default() += 1;
        }
        for k in 0..=n {
            assert_eq!(by_dim[&k], gaussian_oracle(q as u64, n as u32, k as u32), "q={q} n={n} k={k}");
        }
    }
}

#[test]
fn gl_orders_match_the_product_formula() {
    let g = Guards::default();
    for (q, n) in [(2u64, 2u32), (3, 2), (2, 3)] {
        let r = FiniteRing::field(q as u32).unwrap();
        let formula: u64 = (0..n).map(|i| q.pow(n) - q.pow(i)).product();
        assert_eq!(enumerate_gl(&r, n as usize, &g).unwrap().len() as u64, formula);
    }
}

fn complement_exists(r: &FiniteRing, s: &Submodule, all: &[Submodule]) -> bool {
    let n = s.ambient_rank();
    let whole = Submodule::whole(n);
    let se: BTreeSet<Vec<u8>> = s.elements(r).into_iter().collect();
    all.iter().any(|t| {
        s.sum(r, t) == whole && t.elements(r).iter().filter(|v| se.contains(*v)).count() == 1
    })
}

#[test]
fn splittable_agrees_with_complement_search() {
    let g = Guards::default();
    for name in ["Z/4", "Z/9"] {
        let r = FiniteRing::from_str_spec(name).unwrap();
        let all = enumerate_submodules(&r, 2, &g).unwrap();
        let mut split = 0;
        for s in &all {
            let brute = complement_exists(&r, s, &all);
            assert_eq!(s.is_splittable(&r), brute, "{name}: {:?}", s.basis());
            split += brute as usize;
        }
        assert!(split < all.len(), "{name} has non-split submodules");
    }
}

use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use rbskit::checks::oracle::{bareiss_rank, homology_agrees, snf_postconditions};
use rbskit::fincat::snf::smith_diagonal;
use rbskit::fincat::{
    category_homology, group_category, homology, is_weakly_contractible, nerve_chain_complex, pi1_presentation,
    poset_category, product, Coefficients, FinCat, FiniteGroup, HomologyResult, SimplicialComplex,
};
use rbskit::Guards;

fn matrix() -> impl Strategy<Value = Vec<Vec<BigInt>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec((-9i64..=9).prop_map(BigInt::from), c), r)
    })
}

/// Up to eight random simplices on seven vertices.
fn complex() -> impl Strategy<Value = SimplicialComplex> {
    proptest::collection::vec(proptest::collection::btree_set(0u32..7, 1..=4), 1..=8).prop_map(|ss| {
        let ss: Vec<Vec<u32>> = ss.into_iter().map(|s| s.into_iter().collect()).collect();
        SimplicialComplex::from_simplices(&ss)
    })
}

/// A random partial order on up to six points: the transitive closure of a
/// random relation compatible with the index order.
fn poset() -> impl Strategy<Value = (usize, Vec<bool>)> {
    (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut leq = vec![false; n * n];
            for i in 0..n {
                leq[i * n + i] = true;
                for j in i + 1..n {
                    leq[i * n + j] = bits[i * n + j];
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if leq[i * n + k] && leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
            (n, leq)
        })
    })
}

fn poset_cat(n: usize, leq: &[bool], with_top: bool) -> Arc<FinCat> {
    let m = n + with_top as usize;
    let labels: Vec<String> = (0..m).map(|i| format!("p{i}")).collect();
    Arc::new(poset_category(&labels, |a, b| b == n || (a < n && b < n && leq[a * n + b])))
}

/// Posets, small group categories and their products.
fn category() -> impl Strategy<Value = Arc<FinCat>> {
    prop_oneof![
        poset().prop_map(|(n, leq)| poset_cat(n, &leq, false)),
        (1usize..=5).prop_map(|k| Arc::new(group_category(&FiniteGroup::cyclic(k)))),
        (poset(), 1usize..=3).prop_filter("small", |((n, _), _)| *n <= 3).prop_map(|((n, leq), k)| {
            Arc::new(product(&poset_cat(n, &leq, false), &group_category(&FiniteGroup::cyclic(k))))
        }),
    ]
}

fn same_through(a: &HomologyResult, b: &HomologyResult, top: usize) -> bool {
    (0..=top).all(|k| a.betti[k] == b.betti[k] && a.torsion[k] == b.torsion[k])
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn snf_postconditions_hold(a in matrix()) {
        prop_assert_eq!(snf_postconditions(&a), Ok(()));
        let rank = smith_diagonal(&a).iter().filter(|d| **d != BigInt::from(0)).count();
        prop_assert_eq!(rank, bareiss_rank(&a));
    }

    #[test]
    fn snf_pipeline_agrees_with_dense_oracle(s in complex()) {
        prop_assert!(s.f_vector().iter().sum::<usize>() <= 200);
        prop_assert_eq!(homology_agrees(&s.chain_complex(), &[2, 3, 5]), Ok(()));
    }

    #[test]
    fn morse_reduction_matches_the_full_nerve(c in category(), depth in 2usize..=4) {
        let g = Guards::default();
        let full = homology(&nerve_chain_complex(&c, depth, &g).unwrap().complex, Coefficients::Integers);
        let fast = category_homology(&c, depth, Coefficients::Integers, &g).unwrap();
        prop_assert_eq!(fast.max_trusted_degree, depth - 1);
        prop_assert!(same_through(&full, &fast, depth - 1), "{:?} vs {:?}", full, fast);
    }

    #[test]
    fn truncation_is_stable(c in category(), depth in 1usize..=4) {
        let g = Guards::default();
        for coeff in [Coefficients::Integers, Coefficients::Prime(2)] {
            let a = category_homology(&c, depth, coeff, &g).unwrap();
            let b = category_homology(&c, depth + 1, coeff, &g).unwrap();
            prop_assert!(same_through(&a, &b, depth - 1));
        }
    }

    #[test]
    fn first_homology_is_the_abelianized_fundamental_group(c in category()) {
        prop_assume!(c.is_connected());
        let g = Guards::default();
        let h = category_homology(&c, 2, Coefficients::Integers, &g).unwrap();
        let ab = pi1_presentation(&c, 0).unwrap().abelianization();
        prop_assert_eq!(ab.free_rank, h.betti[1]);
        prop_assert_eq!(ab.torsion, h.torsion[1].clone());
    }

    #[test]
    fn terminal_object_gives_contractible((n, leq) in poset(), depth in 1usize..=5) {
        let c = poset_cat(n, &leq, true);
        prop_assert!(c.terminal_object().is_some());
        let cert = is_weakly_contractible(&c, depth, &Guards::default()).unwrap();
        prop_assert!(cert.verdict.is_contractible(), "{:?}", cert);
    }

    #[test]
    fn terminal_object_in_a_product_gives_contractible((n, leq) in poset(), k in 1usize..=3, depth in 1usize..=4) {
        let top = poset_cat(n, &leq, true);
        let c = Arc::new(product(&top, &poset_cat(k, &vec![true; k * k], true)));
        let cert = is_weakly_contractible(&c, depth, &Guards::default()).unwrap();
        prop_assert!(cert.verdict.is_contractible(), "{:?}", cert);
    }
}

#[test]
fn classifying_spaces_of_cyclic_groups() {
    let g = Guards::default();
    for k in 2..=6usize {
        let c = Arc::new(group_category(&FiniteGroup::cyclic(k)));
        let h = category_homology(&c, 6, Coefficients::Integers, &g).unwrap();
        for d in 1..=5 {
            let expected: Vec<BigInt> = if d % 2 == 1 { vec![BigInt::from(k)] } else { vec![] };
            let got: Vec<BigInt> = h.torsion[d].iter().map(|t| t.to_big()).collect();
            assert_eq!(got, expected, "H_{d}(BZ/{k})");
        }
    }
}

#[test]
fn symmetric_group_low_homology() {
    let c = Arc::new(group_category(&FiniteGroup::symmetric(3)));
    let h = category_homology(&c, 5, Coefficients::Integers, &Guards::default()).unwrap();
    assert_eq!(h.group_string(1), "Z/2");
    assert_eq!(h.group_string(2), "0");
    assert_eq!(h.group_string(3), "Z/6");
}

use std::collections::BTreeSet;
use std::sync::Arc;

use rbskit::fincat::{category_homology, is_fully_faithful, Coefficients};
use rbskit::rbs::{
    bgl_category, bgl_inclusion, build_rbs, comparison_functor, compute_e_group, expected_euler_characteristic, restriction_over_empty, tits_building,
    RbsCategory,
};
use rbskit::ring::{FiniteRing, Mat, Submodule};
use rbskit::Guards;

type Elems = BTreeSet<Vec<u8>>;

fn elems(r: &FiniteRing, s: &Submodule) -> Elems {
    s.elements(r).into_iter().collect()
}

fn apply(r: &FiniteRing, g: &Mat, v: &[u8]) -> Vec<u8> {
    (0..g.rows())
        .map(|i| (0..g.cols()).fold(0u8, |acc, j| r.add(acc, r.mul(g.get(i, j), v[j]))))
        .collect()
}

/// Member element sets of each flag, plus 0 below and R^n on top.
fn chains(rbs: &RbsCategory) -> Vec<Vec<Elems>> {
    let r = rbs.ring();
    let n = rbs.rank();
    rbs.flags()
        .iter()
        .map(|f| {
            let mut c = vec![elems(r, &Submodule::zero(n))];
            c.extend(f.members().iter().map(|m| elems(r, m)));
            c.push(elems(r, &Submodule::whole(n)));
            c
        })
        .collect()
}

/// #{g : gF ≤ F′} and |U_F| from the definitions, on elements.
fn naive_counts(rbs: &RbsCategory) -> (Vec<Vec<usize>>, Vec<usize>) {
    let r = rbs.ring();
    let ch = chains(rbs);
    let nf = ch.len();
    let mut below = vec![vec![0usize; nf]; nf];
    let mut unip = vec![0usize; nf];
    for g in &rbs.setting.gl {
        for (f, members) in ch.iter().enumerate() {
            let moved: Vec<Elems> = members.iter().map(|m| m.iter().map(|v| apply(r, g, v)).collect()).collect();
            for (t, other) in ch.iter().enumerate() {
                // gF refines F′: every member of F′ is a member of gF.
                if other.iter().all(|m| moved.contains(m)) {
                    below[f][t] += 1;
                }
            }
            let fixes_graded = members.windows(2).all(|w| {
                w[1].iter().all(|v| {
                    let gv = apply(r, g, v);
                    let diff: Vec<u8> = gv.iter().zip(v).map(|(a, b)| r.sub(*a, *b)).collect();
                    w[0].contains(&diff)
                })
            });
            unip[f] += fixes_graded as usize;
        }
    }
    (below, unip)
}

const INSTANCES: [(&str, usize); 6] = [("F2", 2), ("F3", 2), ("F4", 2), ("Z/4", 2), ("Z/9", 2), ("F2", 3)];

#[test]
fn hom_counts_match_the_naive_oracle() {
    let g = Guards::default();
    for (ring, n) in INSTANCES {
        let rbs = build_rbs(&FiniteRing::from_str_spec(ring).unwrap(), n, &g).unwrap();
        let (below, unip) = naive_counts(&rbs);
        for f in 0..below.len() {
            assert_eq!(rbs.unipotent[f].len(), unip[f], "{ring}^{n}: |U_F| for flag {f}");
            for t in 0..below.len() {
                let h = rbs.cat.hom(f as u32, t as u32).len();
                assert_eq!(h * unip[f], below[f][t], "{ring}^{n}: Hom({f}, {t})");
            }
        }
    }
}

#[test]
fn composition_is_independent_of_representatives() {
    let g = Guards::default();
    for (ring, n) in [("F2", 2), ("F3", 2), ("Z/4", 2), ("F2", 3)] {
        let rbs = build_rbs(&FiniteRing::from_str_spec(ring).unwrap(), n, &g).unwrap();
        rbs.check_composition().unwrap();
        rbs.check_hom_counts().unwrap();
    }
}

#[test]
fn every_flag_maps_to_the_empty_flag() {
    let g = Guards::default();
    for (ring, n) in INSTANCES {
        let rbs = build_rbs(&FiniteRing::from_str_spec(ring).unwrap(), n, &g).unwrap();
        let e = rbs.empty_flag();
        assert!(rbs.cat.objects().all(|x| !rbs.cat.hom(x, e).is_empty()), "{ring}^{n}");
        assert!(rbs.cat.is_connected());
    }
}

#[test]
fn degenerate_ranks() {
    let g = Guards::default();
    let f2 = FiniteRing::field(2).unwrap();
    let zero = build_rbs(&f2, 0, &g).unwrap();
    assert_eq!((zero.cat.num_objects(), zero.cat.num_morphisms()), (1, 1));
    for q in [2, 3, 5] {
        let one = build_rbs(&FiniteRing::field(q).unwrap(), 1, &g).unwrap();
        assert_eq!(one.cat.num_objects(), 1);
        assert_eq!(one.cat.num_morphisms(), q as usize - 1);
    }
}

#[test]
fn tits_euler_characteristics() {
    let g = Guards::default();
    for (q, n) in [(2u32, 2usize), (3, 2), (4, 2), (5, 2), (2, 3), (3, 3), (2, 4)] {
        let s = tits_building(q, n, &g).unwrap().summary();
        let formula = 1 + (-1i64).pow(n as u32 - 2) * (q as i64).pow((n * (n - 1) / 2) as u32);
        assert_eq!(s.euler_characteristic, formula, "q={q} n={n}");
        assert_eq!(expected_euler_characteristic(q, n), formula);
    }
    assert_eq!(tits_building(2, 3, &g).unwrap().summary().f_vector, vec![14, 21]);
}

#[test]
fn restriction_over_the_empty_flag_is_bgl() {
    let g = Guards::default();
    for (ring, n) in [("F2", 2), ("F3", 2), ("Z/4", 2)] {
        let rbs = build_rbs(&FiniteRing::from_str_spec(ring).unwrap(), n, &g).unwrap();
        let cmp = comparison_functor(&rbs).unwrap();
        let over = restriction_over_empty(&rbs, &cmp).unwrap();
        assert!(over.is_isomorphism && over.commutes, "{ring}^{n}");
        assert!(is_fully_faithful(&bgl_inclusion(&rbs).unwrap()));
    }
}

#[test]
fn first_homology_is_the_unit_group() {
    let g = Guards::default();
    for (ring, n, units) in [("F2", 2, 1usize), ("F3", 2, 2), ("F4", 2, 3), ("F5", 2, 4), ("Z/4", 2, 2), ("Z/9", 2, 6)] {
        let rbs = build_rbs(&FiniteRing::from_str_spec(ring).unwrap(), n, &g).unwrap();
        let h = category_homology(&rbs.cat, 3, Coefficients::Integers, &g).unwrap();
        let expected = if units == 1 { "0".to_string() } else { format!("Z/{units}") };
        assert_eq!(h.group_string(1), expected, "{ring}^{n}");
        assert!(compute_e_group(&rbs).unwrap().elementary_is_special());
        let bgl = Arc::new(bgl_category(&rbs.setting));
        assert_eq!(bgl.num_morphisms(), rbs.setting.gl.len());
    }
}

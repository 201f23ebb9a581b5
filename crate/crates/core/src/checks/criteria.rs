use std::sync::Arc;

use super::oracle::{corpus, homology_agrees, random_matrices, snf_postconditions};
use super::{CheckDef, Instance, Measurement, Provenance};
use crate::error::{Error, Result};
use crate::fincat::{
    category_homology, check_regularity, group_category, is_colim_equivalence, is_proper, poset_category,
    terminal_category, twisted_arrow, Coefficients, FinCat, FiniteGroup, HomologyResult, Int,
};
use crate::guards::Guards;
use crate::qkt::{
    build_filt_category, build_monoidal, comma_contractibility, compare_with_rbs, psi_functor, q1_category, quillen_q,
};
use crate::rbs::{
    bgl_category, build_rbs, comparison_functor, compute_e_group, expected_euler_characteristic, inductive_decomposition,
    pi1_target, restriction_over_empty, tits_building, RbsCategory,
};
use crate::ring::FiniteRing;

use Provenance::{Derived, Paper, Trivial};

pub(super) static REGISTRY: &[CheckDef] = &[
    CheckDef {
        name: "steinberg",
        criterion: 1,
        title: "Tits building top homology has rank q^(n(n-1)/2)",
        instances: steinberg_instances,
        run: steinberg,
    },
    CheckDef {
        name: "pi1",
        criterion: 2,
        title: "H_1 of RBS(R^n) is GL/E",
        instances: pi1_instances,
        run: pi1,
    },
    CheckDef {
        name: "fp-acyclic",
        criterion: 3,
        title: "RBS(F_q^n) is F_p-acyclic in degrees 1..3",
        instances: fp_instances,
        run: fp_acyclic,
    },
    CheckDef {
        name: "prime-to-p",
        criterion: 4,
        title: "BGL and RBS agree with coefficients prime to p",
        instances: prime_to_p_instances,
        run: prime_to_p,
    },
    CheckDef {
        name: "proper-p",
        criterion: 5,
        title: "GL\\P -> RBS is proper, an isomorphism over [∅], and RBS is inductive",
        instances: proper_instances,
        run: proper_p,
    },
    CheckDef {
        name: "twisted-cofinal",
        criterion: 6,
        title: "Tw(C)^op -> C is a colim-equivalence",
        instances: twisted_instances,
        run: twisted_cofinal,
    },
    CheckDef {
        name: "poset-regular",
        criterion: 7,
        title: "x <= gx implies x = gx on the flag poset",
        instances: regular_instances,
        run: poset_regular,
    },
    CheckDef {
        name: "qconstruction",
        criterion: 8,
        title: "Ψ, Q_2 terminal decompositions, comma categories and M_E cancellation",
        instances: q_instances,
        run: qconstruction,
    },
    CheckDef {
        name: "infrastructure",
        criterion: 9,
        title: "SNF postconditions, homology oracle and truncation stability",
        instances: infra_instances,
        run: infrastructure,
    },
];

fn need<T>(x: Option<T>, what: &str) -> Result<T> {
    x.ok_or_else(|| Error::InvalidInput(format!("this check needs {what}")))
}

fn ring_of(inst: &Instance) -> Result<FiniteRing> {
    FiniteRing::from_str_spec(&need(inst.ring.clone(), "--ring")?)
}

fn rbs_of(inst: &Instance, guards: &Guards) -> Result<RbsCategory> {
    build_rbs(&ring_of(inst)?, need(inst.n, "--n")?, guards)
}

fn field_size(inst: &Instance) -> Result<u32> {
    let r = ring_of(inst)?;
    if !r.is_field() {
        return Err(Error::InvalidInput("this check needs a finite field".into()));
    }
    Ok(r.size() as u32)
}

/// "Z/a ⊕ Z/b" for a cyclic decomposition, "0" if trivial.
fn abelian(free: usize, torsion: &[Int]) -> String {
    let mut parts: Vec<String> = Vec::new();
    match free {
        0 => {}
        1 => parts.push("Z".into()),
        r => parts.push(format!("Z^{r}")),
    }
    parts.extend(torsion.iter().map(|t| format!("Z/{t}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ⊕ ")
    }
}

fn cyclic(k: usize) -> String {
    if k == 1 {
        "0".into()
    } else {
        format!("Z/{k}")
    }
}

fn steinberg_instances() -> Vec<Instance> {
    [("F2", 2), ("F3", 2), ("F4", 2), ("F2", 3), ("F3", 3)].iter().map(|&(r, n)| Instance::ring_n(r, n)).collect()
}

fn steinberg(inst: &Instance, guards: &Guards) -> Result<Vec<Measurement>> {
    let (q, n) = (field_size(inst)?, need(inst.n, "--n")?);
    let s = tits_building(q, n, guards)?.summary();
    let expected = (q as u64).pow((n * (n - 1) / 2) as u32);
    Ok(vec![
        Measurement::new("Steinberg rank", s.steinberg_rank, expected, Paper),
        Measurement::new(
            "reduced Betti numbers vanish below the top",
            s.reduced_betti[..n - 2].iter().all(|&b| b == 0),
            true,
            Paper,
        ),
        Measurement::new("Euler characteristic", s.euler_characteristic, expected_euler_characteristic(q, n), Derived),
    ])
}

fn pi1_instances() -> Vec<Instance> {
    [("F2", 2, 4), ("F3", 2, 4), ("F4", 2, 3), ("F2", 3, 3), ("Z/4", 2, 4)]
        .iter()
        .map(|&(r, n, d)| Instance::ring_n(r, n).with_depth(d))
        .collect()
}

fn pi1(inst: &Instance, guards: &Guards) -> Result<Vec<Measurement>> {
    let rbs = rbs_of(inst, guards)?;
    let depth = inst.depth.unwrap_or(4);
    let h = category_homology(&rbs.cat, depth, Coefficients::Integers, guards)?;
    let data = compute_e_group(&rbs)?;
    let (quotient, _) = pi1_target(&rbs, &data)?;
    let units = rbs.ring().units().len();
    Ok(vec![
        Measurement::new("H_1(|RBS|; Z)", abelian(h.betti[1], &h.torsion[1]), cyclic(units), Paper),
        Measurement::new("[GL : E]", quotient.order(), units, Paper),
        Measurement::boolean("GL/E abelian", quotient.is_abelian(), Paper),
        Measurement::boolean("E = SL", data.elementary_is_special(), Paper),
    ])
}

fn fp_instances() -> Vec<Instance> {
    [("F2", 2), ("F3", 2)].iter().map(|&(r, n)| Instance::ring_n(r, n).with_depth(5)).collect()
}

fn fp_acyclic(inst: &Instance, guards: &Guards) -> Result<Vec<Measurement>> {
    let rbs = rbs_of(inst, guards)?;
    let depth = inst.depth.unwrap_or(5);
    let p = rbs.ring().characteristic();
    let h = category_homology(&rbs.cat, depth, Coefficients::Prime(p), guards)?;
    let top = h.max_trusted_degree.min(3);
    let reduced = h.reduced_betti();
    Ok(vec![
        Measurement::new(format!("reduced F{p} Betti numbers, degrees 0..={top}"), format!("{:?}", &reduced[..=top]), format!("{:?}", vec![0; top + 1]), Paper),
        Measurement::new("trusted through degree 3", h.max_trusted_degree >= 3, true, Trivial),
    ])
}

fn prime_to_p_instances() -> Vec<Instance> {
    [("F2", 2, 3), ("F3", 2, 2)]
        .iter()
        .map(|&(r, n, ell)| Instance {
            ell: Some(ell),
            ..Instance::ring_n(r, n).with_depth(4)
        })
        .collect()
}

fn prime_to_p(inst: &Instance, guards: &Guards) -> Result<Vec<Measurement>> {
    let rbs = rbs_of(inst, guards)?;
    let depth = inst.depth.unwrap_or(4);
    let ell = need(inst.ell, "--ell")?;
    if rbs.ring().characteristic() == ell {
        return Err(Error::InvalidInput("ell must differ from the characteristic".into()));
    }
    let coeff = Coefficients::Prime(ell);
    let hr = category_homology(&rbs.cat, depth, coeff, guards)?;
    let bgl = Arc::new(bgl_category(&rbs.setting));
    let hb = category_homology(&bgl, depth, coeff, guards)?;
    let top = hr.max_trusted_degree.min(hb.max_trusted_degree).min(3);
    Ok(vec![
        Measurement::new(
            format!("F{ell} Betti numbers of RBS vs BGL, degrees 0..={top}"),
            format!("{:?}", &hr.betti[..=top]),
            format!("{:?}", &hb.betti[..=top]),
            Paper,
        ),
        Measurement::new("trusted through degree 3", top == 3, true, Trivial),
    ])
}

fn proper_instances() -> Vec<Instance> {
    [("F2", 2), ("F3", 2)].iter().map(|&(r, n)| Instance::ring_n(r, n).with_depth(3)).collect()
}

fn proper_p(inst: &Instance, guards: &Guards) -> Result<Vec<Measurement>> {
    let rbs = rbs_of(inst, guards)?;
    let depth = inst.depth.unwrap_or(3);
    let cmp = comparison_functor(&rbs)?;
    let proper = is_proper(&cmp.functor, depth, guards)?;
    let detail = proper.first_failure().map(|f| f.0.clone()).unwrap_or_default();
    let over = restriction_over_empty(&rbs, &cmp)?;
    let (mut equivalences, mut isomorphisms) = (0, 0);
    for f in rbs.cat.objects() {
        let d = inductive_decomposition(&rbs, f, guards)?;
        equivalences += d.inclusion_is_equivalence as usize;
        isomorphisms += d.is_isomorphism as usize;
    }
    let flags = rbs.cat.num_objects();
    Ok(vec![
        Measurement::verdict(format!("p proper (depth {depth})"), proper.holds, &detail, Paper),
        Measurement::boolean("p over [∅] is an isomorphism onto BGL", over.is_isomorphism && over.commutes, Paper),
        Measurement::new("flags F with RBS_{≤F} ≃ refinements of F", equivalences, flags, Paper),
        Measurement::new("flags F with refinements of F ≅ ∏ RBS(M_i/M_{i-1})", isomorphisms, flags, Paper),
    ])
}

fn twisted_instances() -> Vec<Instance> {
    ["terminal", "interval", "BZ2", "BZ3", "RBS(F2^2)"]
        .iter()
        .map(|l| Instance {
            depth: Some(3),
            ..Instance::labelled(l)
        })
        .collect()
}

fn named_category(label: &str, guards: &Guards) -> Result<Arc<FinCat>> {
    Ok(Arc::new(match label {
        "terminal" => terminal_category(),
        "interval" => poset_category(&["0".into(), "1".into()], |a, b| a <= b),
        "BZ2" => group_category(&FiniteGroup::cyclic(2)),
        "BZ3" => group_category(&FiniteGroup::cyclic(3)),
        "RBS(F2^2)" => return Ok(build_rbs(&FiniteRing::field(2)?, 2, guards)?.cat),
        other => return Err(Error::InvalidInput(format!("unknown category `{other}`"))),
    }))
}

fn twisted_cofinal(inst: &Instance, guards: &Guards) -> Result<Vec<Measurement>> {
    let c = named_category(&need(inst.label.clone(), "--category")?, guards)?;
    let depth = inst.depth.unwrap_or(3);
    let tw = twisted_arrow(&c)?;
    let v = is_colim_equivalence(&tw.projection, depth, guards)?;
    let detail = v.first_failure().map(|f| f.0.clone()).unwrap_or_default();
    Ok(vec![Measurement::verdict(format!("Tw(C)^op → C colim-equivalence (depth {depth})"), v.holds, &detail, Paper)])
}

fn regular_instances() -> Vec<Instance> {
    [("F2", 2), ("F3", 2), ("F2", 3), ("Z/4", 2)].iter().map(|&(r, n)| Instance::ring_n(r, n)).collect()
}

fn poset_regular(inst: &Instance, guards: &Guards) -> Result<Vec<Measurement>> {
    let rbs = rbs_of(inst, guards)?;
    let action = &rbs.setting.action;
    let pairs = action.group.order() * action.poset.len();
    let holds = check_regularity(action).is_ok();
    Ok(vec![
        Measurement::boolean(format!("x ≤ gx ⇒ x = gx on all {pairs} pairs (g, x)"), holds, Paper),
        Measurement::new("flags", action.poset.len(), rbs.flags().len(), Trivial),
    ])
}

fn q_instances() -> Vec<Instance> {
    [(1, 2), (1, 3), (2, 2), (2, 3)]
        .iter()
        .map(|&(n, cap)| Instance {
            cap: Some(cap),
            depth: Some(3),
            ..Instance::ring_n("F2", n)
        })
        .collect()
}

fn qconstruction(inst: &Instance, guards: &Guards) -> Result<Vec<Measurement>> {
    let q = field_size(inst)?;
    let n = need(inst.n, "--n")?;
    let cap = need(inst.cap, "--cap")?;
    let depth = inst.depth.unwrap_or(3);
    let e = build_filt_category(q, n, guards)?;
    let qq = Arc::new(quillen_q(&e, guards)?);
    let me = Arc::new(build_monoidal(&e.ring, n, cap, guards)?);
    let mono = me.check()?;
    let q1 = Arc::new(q1_category(me.clone())?);
    let q2 = q1.certificate();
    let psi = psi_functor(qq.clone(), q1, guards)?;
    let mut ms = vec![
        Measurement::boolean("axioms of a category with filtrations", e.axioms.all_hold(), Paper),
        Measurement::boolean(format!("Ψ fully faithful on {} spans", qq.spans.len()), psi.fully_faithful, Paper),
        Measurement::boolean("Ψ independent of the kernel/cokernel choices", psi.policies_agree, Paper),
        Measurement::boolean("Ψ lands on terminal representatives", psi.representatives_terminal, Paper),
        Measurement::new(
            format!("Q_2 components with a terminal object of decomposed form ({} hom-categories)", q2.hom_categories),
            q2.terminal_shapes_checked,
            q2.components,
            Paper,
        ),
        Measurement::boolean(
            format!("M_E morphisms are monomorphisms ({} cancellation tests)", mono.monomorphism),
            true,
            Paper,
        ),
    ];
    if n == 1 && q == 2 {
        let c = &qq.cat;
        let counts: Vec<usize> = [(0, 0), (0, 1), (1, 0), (1, 1)].iter().map(|&(x, y)| c.hom(x, y).len()).collect();
        ms.push(Measurement::new("|Hom_Q| for (0,0), (0,1), (1,0), (1,1)", format!("{counts:?}"), "[1, 2, 0, 1]", Derived));
    }
    if n <= cap {
        let rbs = build_rbs(&e.ring, n, guards)?;
        let (total, agree) = compare_with_rbs(&rbs, &me)?;
        ms.push(Measurement::new(format!("RBS(F_{q}^{n}) hom-sets matching M_E"), agree, total, Paper));
    }
    let mut failures = Vec::new();
    let mut comma_objects = 0;
    for m in me.cat.objects() {
        let (_, c) = comma_contractibility(&psi, m, depth, guards)?;
        comma_objects += c.objects;
        if !c.all_hold() {
            failures.push(format!("{}: {}", c.target, c.verdict));
        }
    }
    ms.push(Measurement::new(
        format!("comma categories Ψ↓m with cover, terminal objects, intersections and contractibility ({comma_objects} objects)"),
        if failures.is_empty() { "all".to_string() } else { failures.join("; ") },
        "all",
        Paper,
    ));
    Ok(ms)
}

fn infra_instances() -> Vec<Instance> {
    let mut v = vec![Instance::labelled("snf"), Instance::labelled("homology-oracle")];
    for (r, n, d) in [("F2", 2, 6), ("F3", 2, 6), ("F4", 2, 4), ("Z/4", 2, 4), ("F2", 3, 4)] {
        v.push(Instance {
            label: Some("truncation".into()),
            ..Instance::ring_n(r, n).with_depth(d)
        });
    }
    for r in ["F2", "F3"] {
        v.push(Instance {
            label: Some("truncation-bgl".into()),
            ..Instance::ring_n(r, 2).with_depth(5)
        });
    }
    v
}

fn stable(a: &HomologyResult, b: &HomologyResult, top: usize) -> bool {
    (0..=top).all(|k| a.betti[k] == b.betti[k] && a.torsion[k] == b.torsion[k])
}

fn infrastructure(inst: &Instance, guards: &Guards) -> Result<Vec<Measurement>> {
    match need(inst.label.as_deref(), "--category")? {
        "snf" => {
            let mats = random_matrices(1000, 0x5eed);
            let bad: Vec<String> = mats
                .iter()
                .enumerate()
                .filter_map(|(i, a)| snf_postconditions(a).err().map(|e| format!("#{i}: {e}")))
                .collect();
            Ok(vec![Measurement::new(
                "random matrices failing SNF postconditions",
                bad.len(),
                0,
                Derived,
            )])
        }
        "homology-oracle" => {
            let mut ms = Vec::new();
            for (name, s) in corpus() {
                let cx = s.chain_complex();
                let r = homology_agrees(&cx, &[2, 3]);
                ms.push(Measurement::new(
                    format!("{name}: SNF homology vs Bareiss ranks"),
                    r.err().unwrap_or_else(|| "agree".into()),
                    "agree",
                    Derived,
                ));
                if name == "RP2" {
                    let h = crate::fincat::homology(&cx, Coefficients::Integers);
                    ms.push(Measurement::new("H_1(RP2; Z)", abelian(h.betti[1], &h.torsion[1]), "Z/2", Derived));
                }
            }
            Ok(ms)
        }
        label @ ("truncation" | "truncation-bgl") => {
            let rbs = rbs_of(inst, guards)?;
            let c = if label == "truncation" { rbs.cat.clone() } else { Arc::new(bgl_category(&rbs.setting)) };
            let d = need(inst.depth, "--depth")?;
            let a = category_homology(&c, d, Coefficients::Integers, guards)?;
            let b = category_homology(&c, d + 1, Coefficients::Integers, guards)?;
            let top = d - 1;
            Ok(vec![Measurement::boolean(
                format!("H_i(D={d}) = H_i(D={}) for i ≤ {top}", d + 1),
                stable(&a, &b, top),
                Derived,
            )])
        }
        other => Err(Error::InvalidInput(format!("unknown infrastructure instance `{other}`"))),
    }
}

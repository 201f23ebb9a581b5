//! RBS(M) for free modules over finite local rings, together with the flag
//! poset, GL(M)\\P, E(M), Tits buildings and the inductive structure.

mod build;
mod comparison;
mod groups;
mod inductive;
mod tits;

pub use build::{
    bgl_category, bgl_inclusion, build_from_action, build_rbs, flag_poset, gl_action, CosetMorphism, ExportMorphism,
    ExportObject, FlagAction, RbsCategory, RbsExport,
};
pub use comparison::{comparison_functor, restriction_over_empty, Comparison, OverEmpty};
pub use groups::{compute_e_group, functor_to_quotient, pi1_target, SubgroupData};
pub use inductive::{inductive_decomposition, InductiveDecomposition};
pub use tits::{expected_euler_characteristic, steinberg_rank, tits_building, TitsComplex, TitsSummary};

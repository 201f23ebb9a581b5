//! Finite categories, functors, nerves and their homology.

pub mod action;
pub mod category;
pub mod chain;
pub mod contract;
pub mod fibers;
pub mod functor;
pub mod homology;
pub mod int;
pub mod morse;
pub mod ops;
pub mod pi1;
pub mod snf;
pub mod twisted;

pub use action::{
    action_category, check_regularity, group_category, poset_category, poset_quotient, ActionCategory, FiniteGroup,
    GroupAction, Poset,
};
pub use category::{validate_category, CatBuilder, FinCat, RawCategory, RawMorphism, UnionFind};
pub use chain::{nerve_chain_complex, ChainComplex, Nerve, SimplicialComplex, SparseMatrix};
pub use contract::{is_colim_equivalence, is_lim_equivalence, is_proper, is_weakly_contractible, Certificate, FunctorVerdict, Verdict};
pub use fibers::{left_fiber, right_fiber, strict_fiber, strict_to_right, Fiber};
pub use functor::FinFunctor;
pub use homology::{homology, Coefficients, HomologyResult};
pub use int::{Coef, Fp, Int};
pub use morse::{category_homology, morse_complex, MorseComplex};
pub use ops::{
    full_subcategory, is_equivalence, is_essentially_surjective, is_fully_faithful, is_isomorphism_of_categories,
    opposite, opposite_functor, product, product_all, skeleton, terminal_category, Skeleton,
};
pub use pi1::{pi1_presentation, tietze_simplify, AbelianGroup, GroupPresentation, TietzeOutcome};
pub use snf::smith_normal_form;
pub use twisted::{twisted_arrow, TwistedArrow};

//! Exact arithmetic over F_q and Z/p^k: matrices, canonical submodule
//! bases, splittable flags and GL enumeration.

mod enumerate;
mod finite;
mod flag;
mod mat;
mod submodule;

pub use enumerate::{
    all_vectors, enumerate_flags, enumerate_gl, enumerate_splittable_submodules, enumerate_submodules,
    gaussian_binomial, gl_order,
};
pub use finite::{default_irreducible, is_prime, make_ring, prime_power, FiniteRing, RingKind, RingSpec};
pub use flag::Flag;
pub use mat::Mat;
pub(crate) use mat::next_permutation;
pub use submodule::{
    extend_residue_basis, howell_form, is_splittable, quotient_map, residue_rank, QuotientMap, Submodule,
};

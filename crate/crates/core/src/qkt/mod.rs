//! Quillen's Q-construction for finite vector spaces, the monoidal category
//! M_E, the 2-category Q^⊛ and its homotopy category Q_1, and the functor
//! Ψ: Q(E) → Q_1 with its comma categories.

pub mod filt;
pub mod linalg;
pub mod monoidal;
pub mod psi;
pub mod q2;
pub mod quillen;

pub use filt::{build_filt_category, AxiomCertificate, FiltCategory};
pub use linalg::PartialEpi;
pub use monoidal::{build_monoidal, compare_with_rbs, graded_dims, obj_label, GradedFlag, MonMor, MonoidalCategory, MonoidalCertificate};
pub use psi::{comma_contractibility, psi_functor, psi_object, psi_triple, ChoicePolicy, CommaCertificate, PsiFunctor};
pub use q2::{has_terminal_shape, q1_category, q2_hom, Q1Category, Q2Certificate, Q2Hom, Triple};
pub use quillen::{quillen_q, QuillenQ, Span};

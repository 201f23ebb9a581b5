//! Finite reductive Borel-Serre categories and friends: exact linear algebra
//! over finite local rings, finite categories with nerve homology, the
//! categories RBS(M), and the Q-construction comparison at small scale.

pub mod checks;
pub mod error;
pub mod fincat;
pub mod guards;
pub mod qkt;
pub mod rbs;
pub mod ring;

pub use error::{Error, Result};
pub use guards::Guards;

//! Resource limits. Every enumeration checks one of these before allocating
//! and fails with [`Error::Guard`](crate::Error::Guard) instead of truncating.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Guards {
    /// Candidate matrices examined by brute-force GL enumeration.
    pub max_gl_candidates: u64,
    /// Bound on |R|^n for submodule enumeration.
    pub max_module_size: u64,
    /// Nondegenerate simplices per degree in an unreduced nerve.
    pub max_simplices_per_degree: u64,
    /// Approximate bytes held by the Morse reduction memo tables.
    pub max_morse_memory: u64,
    /// Group orders for closure computations and quotient groups.
    pub max_group_order: u64,
    /// Morphisms in any constructed finite category.
    pub max_morphisms: u64,
    /// Total dimension cap for the monoidal category M_E.
    pub max_total_dim: usize,
    /// Tietze moves before a pi_1 verdict becomes inconclusive.
    pub tietze_budget: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_gl_candidates: 10_000_000,
            max_module_size: 1_000_000,
            max_simplices_per_degree: 4_000_000,
            max_morse_memory: 4_000_000_000,
            max_group_order: 2_000_000,
            max_morphisms: 2_000_000,
            max_total_dim: 3,
            tietze_budget: 20_000,
        }
    }
}

impl Guards {
    pub fn check(&self, guard: &'static str, needed: u64) -> Result<()> {
        let limit = match guard {
            "max_gl_candidates" => self.max_gl_candidates,
            "max_module_size" => self.max_module_size,
            "max_simplices_per_degree" => self.max_simplices_per_degree,
            "max_morse_memory" => self.max_morse_memory,
            "max_group_order" => self.max_group_order,
            "max_morphisms" => self.max_morphisms,
            "max_total_dim" => self.max_total_dim as u64,
            _ => u64::MAX,
        };
        if needed > limit {
            Err(Error::guard(guard, needed, limit))
        } else {
            Ok(())
        }
    }
}

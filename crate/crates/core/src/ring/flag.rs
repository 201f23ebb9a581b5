use serde::{Deserialize, Serialize};

use super::{FiniteRing, Mat, Submodule};
use crate::error::{Error, Result};

/// A strictly increasing chain of proper nonzero splittable submodules of
/// R^n. The empty chain is the empty flag `[∅]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flag {
    n: usize,
    members: Vec<Submodule>,
}

impl Flag {
    pub fn empty(n: usize) -> Self {
        Flag { n, members: Vec::new() }
    }

    /// Checks splittability, properness and strict inclusions.
    pub fn new(ring: &FiniteRing, n: usize, members: Vec<Submodule>) -> Result<Self> {
        for m in &members {
            if m.ambient_rank() != n {
                return Err(Error::InvalidInput("flag member has the wrong ambient rank".into()));
            }
            if m.is_zero() || *m == Submodule::whole(n) {
                return Err(Error::InvalidInput("flag members must be proper and nonzero".into()));
            }
            if !m.is_splittable(ring) {
                return Err(Error::InvalidInput(format!("{:?} is not splittable", m.basis())));
            }
        }
        for w in members.windows(2) {
            if w[0] == w[1] || !w[0].is_subset_of(ring, &w[1]) {
                return Err(Error::InvalidInput("flag members must be strictly increasing".into()));
            }
        }
        Ok(Flag { n, members })
    }

    pub(crate) fn from_members_unchecked(n: usize, members: Vec<Submodule>) -> Self {
        Flag { n, members }
    }

    pub fn ambient_rank(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Submodule] {
        &self.members
    }

    /// Number of graded pieces d (members + 1).
    pub fn length(&self) -> usize {
        self.members.len() + 1
    }

    pub fn is_empty_flag(&self) -> bool {
        self.members.is_empty()
    }

    /// `0 = M_0 ⊂ M_1 ⊂ ... ⊂ M_d = R^n`.
    pub fn full_chain(&self) -> Vec<Submodule> {
        let mut v = vec![Submodule::zero(self.n)];
        v.extend(self.members.iter().cloned());
        v.push(Submodule::whole(self.n));
        v
    }

    /// Refinement order: `self <= other` iff the members of `other` occur in `self`.
    pub fn refines(&self, other: &Flag) -> bool {
        other.members.iter().all(|m| self.members.contains(m))
    }

    /// Ranks of the graded pieces (free ranks).
    pub fn graded_ranks(&self, ring: &FiniteRing) -> Vec<usize> {
        let chain = self.full_chain();
        chain.windows(2).map(|w| w[1].rank(ring) - w[0].rank(ring)).collect()
    }

    pub fn act(&self, ring: &FiniteRing, g: &Mat) -> Flag {
        let gt = g.transpose();
        Flag {
            n: self.n,
            members: self.members.iter().map(|m| m.act_t(ring, &gt)).collect(),
        }
    }

    /// JSON form: one canonical matrix per member, rows as integer arrays.
    pub fn to_int_rows(&self) -> Vec<Vec<Vec<u32>>> {
        self.members.iter().map(|m| m.basis().to_int_rows()).collect()
    }

    pub fn label(&self) -> String {
        if self.members.is_empty() {
            return "[∅]".into();
        }
        let parts: Vec<String> = self.members.iter().map(|m| format!("{:?}", m.basis())).collect();
        format!("({})", parts.join(" < "))
    }
}

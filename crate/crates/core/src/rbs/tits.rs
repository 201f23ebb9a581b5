use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{homology, Coefficients, SimplicialComplex};
use crate::guards::Guards;
use crate::ring::{enumerate_flags, FiniteRing, Submodule};

/// The Tits building of F_q^n: vertices are proper nonzero subspaces and a
/// nonempty flag with k members is a (k-1)-simplex.
#[derive(Clone, Debug)]
pub struct TitsComplex {
    pub q: u32,
    pub n: usize,
    pub vertices: Vec<Submodule>,
    pub complex: SimplicialComplex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TitsSummary {
    pub q: u32,
    pub n: usize,
    pub f_vector: Vec<usize>,
    pub euler_characteristic: i64,
    pub reduced_betti: Vec<usize>,
    pub steinberg_rank: usize,
}

pub fn tits_building(q: u32, n: usize, guards: &Guards) -> Result<TitsComplex> {
    if n < 2 {
        return Err(Error::InvalidInput("the Tits building needs n >= 2".into()));
    }
    let ring = FiniteRing::field(q)?;
    let flags = enumerate_flags(&ring, n, guards)?;
    let mut vertices: Vec<Submodule> = flags.iter().flat_map(|f| f.members().iter().cloned()).collect();
    vertices.sort();
    vertices.dedup();
    let simplices: Vec<Vec<u32>> = flags
        .iter()
        .filter(|f| !f.is_empty_flag())
        .map(|f| {
            f.members()
                .iter()
                .map(|m| vertices.binary_search(m).expect("member is a vertex") as u32)
                .collect()
        })
        .collect();
    let complex = SimplicialComplex::from_simplices(&simplices);
    let simplex_total: usize = complex.f_vector().iter().sum();
    if simplex_total != simplices.len() {
        return Err(Error::Consistency("simplices of the building do not match its flags".into()));
    }
    Ok(TitsComplex { q, n, vertices, complex })
}

impl TitsComplex {
    pub fn summary(&self) -> TitsSummary {
        let f = self.complex.f_vector();
        let chi = f.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
        let h = homology(&self.complex.chain_complex(), Coefficients::Integers);
        let reduced_betti = h.reduced_betti();
        TitsSummary {
            q: self.q,
            n: self.n,
            steinberg_rank: reduced_betti[self.n - 2],
            f_vector: f,
            euler_characteristic: chi,
            reduced_betti,
        }
    }
}

/// Rank of the top reduced homology H̃_{n-2} of the Tits building.
pub fn steinberg_rank(q: u32, n: usize, guards: &Guards) -> Result<usize> {
    Ok(tits_building(q, n, guards)?.summary().steinberg_rank)
}

/// `1 + (-1)^{n-1} q^{n(n-1)/2}`.
pub fn expected_euler_characteristic(q: u32, n: usize) -> i64 {
    let top = (q as i64).pow((n * (n - 1) / 2) as u32);
    if n % 2 == 0 {
        1 + top
    } else {
        1 - top
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_buildings() {
        let g = Guards::default();
        let s = tits_building(2, 2, &g).unwrap().summary();
        assert_eq!((s.f_vector.clone(), s.steinberg_rank), (vec![3], 2));
        assert_eq!(steinberg_rank(3, 2, &g).unwrap(), 3);
        let s = tits_building(2, 3, &g).unwrap().summary();
        assert_eq!(s.f_vector, vec![14, 21]);
        assert_eq!(s.reduced_betti, vec![0, 8]);
        assert_eq!(s.euler_characteristic, -7);
        assert_eq!(expected_euler_characteristic(2, 3), -7);
    }

    #[test]
    fn rank_one_rejected() {
        assert!(tits_building(2, 1, &Guards::default()).is_err());
    }
}

//! Independent reference computations used by the infrastructure checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fincat::chain::{ChainComplex, SimplicialComplex};
use crate::fincat::snf::{determinant, mat_mul, smith_normal_form, DenseMat};
use crate::fincat::{homology, Coefficients};

/// Rank over Q by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(a: &[Vec<BigInt>]) -> usize {
    let mut m: DenseMat = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

fn dense(x: &ChainComplex, k: usize) -> DenseMat {
    let b = &x.boundaries[k];
    let mut out = vec![vec![BigInt::zero(); b.ncols]; b.nrows];
    for (i, j, v) in b.triplets() {
        out[i as usize][j as usize] = v.to_big();
    }
    out
}

/// Rational Betti numbers of `x` in degrees 0..depth from Bareiss ranks.
pub fn rational_betti(x: &ChainComplex) -> Vec<usize> {
    let d = x.depth();
    let ranks: Vec<usize> = (0..=d).map(|k| if k == 0 { 0 } else { bareiss_rank(&dense(x, k)) }).collect();
    (0..d).map(|k| x.dims[k] - ranks[k] - ranks[k + 1]).collect()
}

/// Agreement of the SNF-based homology with the Bareiss oracle: free ranks
/// match, and mod-p Betti numbers satisfy the universal coefficient formula.
pub fn homology_agrees(x: &ChainComplex, primes: &[u32]) -> Result<(), String> {
    let hz = homology(x, Coefficients::Integers);
    let q = rational_betti(x);
    let d = hz.max_trusted_degree;
    if hz.betti[..=d] != q[..=d] {
        return Err(format!("free ranks {:?} vs Bareiss {:?}", &hz.betti[..=d], &q[..=d]));
    }
    for &p in primes {
        let hp = homology(x, Coefficients::Prime(p));
        let tors = |k: usize| {
            hz.torsion
                .get(k)
                .map_or(0, |t| t.iter().filter(|f| f.to_big().is_multiple_of(&BigInt::from(p))).count())
        };
        for k in 0..=d.min(hp.max_trusted_degree) {
            let expected = q[k] + tors(k) + if k > 0 { tors(k - 1) } else { 0 };
            if hp.betti[k] != expected {
                return Err(format!("F{p} Betti in degree {k}: {} vs {expected}", hp.betti[k]));
            }
        }
    }
    Ok(())
}

/// Fixed corpus: circle, 2-sphere, projective plane, torus.
pub fn corpus() -> Vec<(&'static str, SimplicialComplex)> {
    let circle = SimplicialComplex::from_simplices(&[vec![0, 1], vec![1, 2], vec![0, 2]]);
    let sphere = SimplicialComplex::from_simplices(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
    let rp2 = SimplicialComplex::from_simplices(&[
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 5],
        vec![0, 1, 5],
        vec![1, 2, 4],
        vec![2, 3, 5],
        vec![1, 3, 4],
        vec![2, 4, 5],
        vec![1, 3, 5],
    ]);
    // 3 × 3 grid with opposite sides identified.
    let v = |i: u32, j: u32| (i % 3) * 3 + (j % 3);
    let mut torus = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            torus.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
            torus.push(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
        }
    }
    vec![
        ("circle", circle),
        ("S2", sphere),
        ("RP2", rp2),
        ("torus", SimplicialComplex::from_simplices(&torus)),
    ]
}

/// Seeded random integer matrices, every third one of deficient rank.
pub fn random_matrices(count: usize, seed: u64) -> Vec<DenseMat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let (r, c) = (rng.gen_range(1..=7), rng.gen_range(1..=7));
            let mut gen = |r: usize, c: usize| -> DenseMat {
                (0..r).map(|_| (0..c).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect()).collect()
            };
            if i % 3 == 2 {
                let k = (r.min(c) / 2).max(1);
                mat_mul(&gen(r, k), &gen(k, c))
            } else {
                gen(r, c)
            }
        })
        .collect()
}

/// Checks U·A·V = D, D diagonal with a nonnegative divisibility chain, and
/// U, V unimodular, without trusting the decomposition's own checks.
pub fn snf_postconditions(a: &DenseMat) -> Result<(), String> {
    let (u, d, v) = smith_normal_form(a).map_err(|e| e.to_string())?;
    if mat_mul(&mat_mul(&u, a), &v) != d {
        return Err("U·A·V ≠ D".into());
    }
    for (i, row) in d.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j && !x.is_zero() {
                return Err(format!("off-diagonal entry at ({i}, {j})"));
            }
        }
    }
    let k = d.len().min(d.first().map_or(0, |r| r.len()));
    let diag: Vec<&BigInt> = (0..k).map(|i| &d[i][i]).collect();
    if diag.iter().any(|x| x.is_negative()) {
        return Err("negative invariant factor".into());
    }
    for w in diag.windows(2) {
        let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(w[0]) };
        if !ok {
            return Err(format!("{} does not divide {}", w[0], w[1]));
        }
    }
    for (name, m) in [("U", &u), ("V", &v)] {
        if determinant(m).abs() != BigInt::one() {
            return Err(format!("{name} is not unimodular"));
        }
    }
    Ok(())
}

use std::time::Instant;

use clap::{Args, ValueEnum};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rbskit::fincat::snf::smith_diagonal_profiled;
use rbskit::fincat::{group_category, nerve_chain_complex, FiniteGroup};
use rbskit::ring::{enumerate_gl, gl_order, FiniteRing};
use rbskit::{Guards, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kernel {
    Snf,
    Nerve,
    #[value(name = "gl-enum")]
    GlEnum,
}

#[derive(Args, Clone, Debug)]
pub struct BenchArgs {
    pub kernel: Kernel,
    /// snf: matrix side length.
    #[arg(long, default_value_t = 100)]
    pub size: usize,
    /// snf: entries are drawn uniformly from -bound..=bound.
    #[arg(long, default_value_t = 2)]
    pub bound: i64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// nerve: the symmetric group S_k.
    #[arg(long, default_value_t = 3)]
    pub sym: usize,
    /// nerve: top simplicial degree.
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    /// gl-enum: ring.
    #[arg(long, default_value = "F2")]
    pub ring: String,
    /// gl-enum: matrix size.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
}

#[derive(Debug, Serialize)]
pub struct BenchRow {
    pub kernel: String,
    pub params: String,
    pub elapsed_ms: u128,
    pub metrics: Vec<(String, String)>,
    /// Whether the output matches its closed-form count.
    pub agrees: bool,
}

pub fn run(args: &BenchArgs, guards: &Guards) -> Result<BenchRow> {
    match args.kernel {
        Kernel::Snf => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let a: Vec<Vec<BigInt>> = (0..args.size)
                .map(|_| (0..args.size).map(|_| BigInt::from(rng.gen_range(-args.bound..=args.bound))).collect())
                .collect();
            let start = Instant::now();
            let (diag, bits) = smith_diagonal_profiled(&a);
            let elapsed_ms = start.elapsed().as_millis();
            let rank = diag.iter().filter(|d| **d != BigInt::from(0)).count();
            let chain = diag.windows(2).all(|w| if w[0] == BigInt::from(0) { w[1] == BigInt::from(0) } else { &w[1] % &w[0] == BigInt::from(0) });
            Ok(BenchRow {
                kernel: "snf".into(),
                params: format!("{0}×{0}, entries in [-{1}, {1}], seed {2}", args.size, args.bound, args.seed),
                elapsed_ms,
                metrics: vec![
                    ("rank".into(), rank.to_string()),
                    ("max intermediate bits".into(), bits.to_string()),
                    ("largest invariant factor bits".into(), diag.iter().map(|d| d.bits()).max().unwrap_or(0).to_string()),
                ],
                agrees: chain,
            })
        }
        Kernel::Nerve => {
            let g = FiniteGroup::symmetric(args.sym);
            let c = group_category(&g);
            let start = Instant::now();
            let nerve = nerve_chain_complex(&c, args.depth, guards)?;
            let elapsed_ms = start.elapsed().as_millis();
            let counts = &nerve.complex.dims;
            let expected: Vec<usize> = (0..=args.depth as u32).map(|k| (g.order() - 1).pow(k)).collect();
            Ok(BenchRow {
                kernel: "nerve".into(),
                params: format!("B(S_{}), depth {}", args.sym, args.depth),
                elapsed_ms,
                metrics: vec![
                    ("simplices per degree".into(), format!("{counts:?}")),
                    ("(|G|-1)^k".into(), format!("{expected:?}")),
                ],
                agrees: *counts == expected,
            })
        }
        Kernel::GlEnum => {
            let ring = FiniteRing::from_str_spec(&args.ring)?;
            let start = Instant::now();
            let gl = enumerate_gl(&ring, args.n, guards)?;
            let elapsed_ms = start.elapsed().as_millis();
            let k = ring.residue_size() as u64;
            let radical = (ring.size() as u64 / k).pow((args.n * args.n) as u32);
            let expected = radical * gl_order(k, args.n as u32);
            Ok(BenchRow {
                kernel: "gl-enum".into(),
                params: format!("GL_{}({})", args.n, args.ring),
                elapsed_ms,
                metrics: vec![
                    ("matrices".into(), gl.len().to_string()),
                    ("expected order".into(), expected.to_string()),
                ],
                agrees: gl.len() as u64 == expected,
            })
        }
    }
}

impl BenchRow {
    pub fn table(&self) -> String {
        let mut rows = vec![
            ("kernel".to_string(), self.kernel.clone()),
            ("params".to_string(), self.params.clone()),
            ("elapsed".to_string(), format!("{} ms", self.elapsed_ms)),
        ];
        rows.extend(self.metrics.iter().cloned());
        rows.push(("agrees".to_string(), self.agrees.to_string()));
        let w = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        rows.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
    }
}

//! Convergence sweep: sample W-random graphs at increasing sizes and compare
//! their ψ_n coefficients with ψ of the kernel.
//!
//! Jobs `(n, sample)` run on rayon's pool. Each job's seed is
//! `sub_seed(seeds[sample % seeds.len()], n, sample)`, so a job's result does
//! not depend on scheduling, and rows come back in `(n, sample, k)` order.

use std::fmt::Write as _;

use graphon_psi::charseries::{psi_from_graph, psi_from_kernel};
use graphon_psi::graphs::{gen_from_kernel, sub_seed, SampleMode};
use graphon_psi::{Error, KernelSpec, Result, Route};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

/// Coefficients `k ≤ DEVIATION_MAX_K` enter the per-size summary.
pub const DEVIATION_MAX_K: usize = 10;

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub samples: usize,
    pub degree: usize,
    pub blocks: usize,
    pub mode: SampleMode,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub n: usize,
    pub sample: usize,
    pub seed: u64,
    pub k: usize,
    pub coeff: f64,
    pub target: f64,
    pub deviation: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SizeSummary {
    pub n: usize,
    /// Max over samples and `k ≤ DEVIATION_MAX_K` of `|c_k(ψ_n) − c_k(ψ_W)|`.
    pub max_deviation: f64,
    pub mean_lambda1: f64,
    pub mean_abs_lambda2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub target: Vec<f64>,
    pub rows: Vec<Row>,
    pub summary: Vec<SizeSummary>,
}

impl SweepReport {
    pub fn max_deviation(&self, n: usize) -> Option<f64> {
        self.summary.iter().find(|s| s.n == n).map(|s| s.max_deviation)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,sample,seed,k,coeff,target,deviation,lambda1,lambda2\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{:?},{:?},{:?},{:?},{:?}",
                r.n, r.sample, r.seed, r.k, r.coeff, r.target, r.deviation, r.lambda1, r.lambda2
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({ "target": self.target, "summary": self.summary, "rows": self.rows })
    }
}

pub fn validate(config: &SweepConfig) -> Result<()> {
    if config.sizes.is_empty() {
        return Err(Error::invalid("empty size sweep (--n)"));
    }
    if config.sizes[0] == 0 || config.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("sizes (--n) must be positive and strictly increasing"));
    }
    if config.seeds.is_empty() {
        return Err(Error::invalid("converge requires --seed"));
    }
    if config.samples == 0 {
        return Err(Error::invalid("--samples must be at least 1"));
    }
    if config.degree < 2 {
        return Err(Error::invalid("degree K must be at least 2"));
    }
    if config.blocks == 0 {
        return Err(Error::invalid("--blocks must be at least 1"));
    }
    Ok(())
}

pub fn converge(kernel: &KernelSpec, config: &SweepConfig) -> Result<SweepReport> {
    validate(config)?;
    let k = config.degree;
    let target = psi_from_kernel(&kernel.to_step(config.blocks)?, k)?.series.into_coeffs();

    let jobs: Vec<(usize, usize)> = config
        .sizes
        .iter()
        .flat_map(|&n| (0..config.samples).map(move |s| (n, s)))
        .collect();
    let results: Vec<Vec<Row>> = jobs
        .par_iter()
        .map(|&(n, sample)| {
            let base = config.seeds[sample % config.seeds.len()];
            let seed = sub_seed(base, n as u64, sample as u64);
            let g = gen_from_kernel(kernel, n, seed, config.mode)?;
            let psi = psi_from_graph(&g, k, Route::Eigen)?;
            let spectrum = psi.meta.spectrum.as_ref().expect("eigen route keeps its spectrum");
            let (lambda1, lambda2) = (spectrum.get(0), spectrum.get(1));
            Ok(psi
                .coeffs()
                .iter()
                .zip(&target)
                .enumerate()
                .map(|(k, (&coeff, &t))| Row {
                    n,
                    sample,
                    seed,
                    k,
                    coeff,
                    target: t,
                    deviation: (coeff - t).abs(),
                    lambda1,
                    lambda2,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let rows: Vec<Row> = results.into_iter().flatten().collect();

    let summary = config
        .sizes
        .iter()
        .map(|&n| {
            let of_n: Vec<&Row> = rows.iter().filter(|r| r.n == n).collect();
            let firsts: Vec<&&Row> = of_n.iter().filter(|r| r.k == 0).collect();
            let count = firsts.len() as f64;
            SizeSummary {
                n,
                max_deviation: of_n
                    .iter()
                    .filter(|r| r.k <= DEVIATION_MAX_K)
                    .map(|r| r.deviation)
                    .fold(0.0, f64::max),
                mean_lambda1: firsts.iter().map(|r| r.lambda1).sum::<f64>() / count,
                mean_abs_lambda2: firsts.iter().map(|r| r.lambda2.abs()).sum::<f64>() / count,
            }
        })
        .collect();
    Ok(SweepReport { target, rows, summary })
}

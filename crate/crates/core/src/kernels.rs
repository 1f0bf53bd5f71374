//! Graphon representations: block-constant step kernels and the closed-form
//! kernels (constant `p` and the half graphon `1[x + y ≤ 1]`).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::{sym_eig, DenseMatrix, Spectrum, DEFAULT_TOL};

/// Default number of blocks when a closed-form kernel must be discretized.
pub const DEFAULT_BLOCKS: usize = 1024;

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Anything that can be evaluated as a symmetric `[0,1]² → [0,1]` function.
pub trait Kernel {
    fn eval(&self, x: f64, y: f64) -> f64;
}

/// Symmetric block-constant kernel: block `i` occupies an interval of length
/// `weights[i]` and the kernel equals `values[i][j]` on block `(i, j)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepKernel {
    weights: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl StepKernel {
    /// Validates and builds a step kernel. Weights must be positive and sum to
    /// 1 within `1e-12`; they are then renormalized to sum to 1.
    pub fn new(weights: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let b = weights.len();
        if b == 0 {
            return Err(Error::invalid("step kernel needs at least one block"));
        }
        if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::invalid("block weights must be positive"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::invalid(format!("block weights sum to {total}, not 1")));
        }
        if values.len() != b || values.iter().any(|r| r.len() != b) {
            return Err(Error::invalid(format!("values must be a {b}×{b} matrix")));
        }
        for i in 0..b {
            for j in 0..b {
                let v = values[i][j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::invalid(format!("value {v} at ({i}, {j}) outside [0, 1]")));
                }
                if v != values[j][i] {
                    return Err(Error::invalid(format!("values not symmetric at ({i}, {j})")));
                }
            }
        }
        let weights = weights.iter().map(|w| w / total).collect();
        Ok(StepKernel { weights, values })
    }

    /// One block of measure 1 with value `p`.
    pub fn constant(p: f64) -> Result<Self> {
        StepKernel::new(vec![1.0], vec![vec![p]])
    }

    /// `m` equal blocks.
    pub fn uniform_blocks(values: Vec<Vec<f64>>) -> Result<Self> {
        let m = values.len();
        StepKernel::new(vec![1.0 / m as f64; m], values)
    }

    pub fn blocks(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// True if every value is 0 or 1 (a blow-up of a graph with loops allowed).
    pub fn is_zero_one(&self) -> bool {
        self.values.iter().flatten().all(|&v| v == 0.0 || v == 1.0)
    }

    /// True if the blocks split into two classes with all nonzero values
    /// between the classes.
    pub fn is_bipartite(&self) -> bool {
        let b = self.blocks();
        let mut side: Vec<Option<bool>> = vec![None; b];
        for start in 0..b {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(false);
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                let si = side[i].unwrap();
                for j in 0..b {
                    if self.values[i][j] == 0.0 {
                        continue;
                    }
                    match side[j] {
                        None => {
                            side[j] = Some(!si);
                            stack.push(j);
                        }
                        Some(sj) if sj == si => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// `S_ij = √w_i · W_ij · √w_j`, whose eigenvalues are the nonzero
    /// operator eigenvalues.
    pub fn operator_matrix(&self) -> DenseMatrix {
        let b = self.blocks();
        let roots: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        let mut m = DenseMatrix::zeros(b);
        for i in 0..b {
            for j in 0..b {
                m.set(i, j, roots[i] * self.values[i][j] * roots[j]);
            }
        }
        m
    }

    fn block_of(&self, x: f64) -> usize {
        let mut acc = 0.0;
        for (i, w) in self.weights.iter().enumerate() {
            acc += w;
            if x < acc {
                return i;
            }
        }
        self.blocks() - 1
    }
}

impl Kernel for StepKernel {
    fn eval(&self, x: f64, y: f64) -> f64 {
        self.values[self.block_of(x)][self.block_of(y)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedFormKernel {
    Constant(f64),
    /// `1` if `x + y ≤ 1`, else `0`.
    Half,
}

impl ClosedFormKernel {
    pub fn constant(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("constant kernel value {p} outside [0, 1]")));
        }
        Ok(ClosedFormKernel::Constant(p))
    }

    pub fn name(&self) -> String {
        match self {
            ClosedFormKernel::Constant(p) => format!("constant({p})"),
            ClosedFormKernel::Half => "half".into(),
        }
    }
}

impl Kernel for ClosedFormKernel {
    fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            ClosedFormKernel::Constant(p) => p,
            ClosedFormKernel::Half => f64::from(u8::from(x + y <= 1.0)),
        }
    }
}

/// A kernel as it appears in JSON input.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelSpec {
    Step(StepKernel),
    Closed(ClosedFormKernel),
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum KernelJson {
    Step { weights: Vec<f64>, values: Vec<Vec<f64>> },
    Constant { p: f64 },
    Half,
}

impl KernelSpec {
    /// Parses `{"type":"step",...}`, `{"type":"constant","p":..}` or
    /// `{"type":"half"}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: KernelJson = serde_json::from_str(text)
            .map_err(|e| Error::invalid(format!("bad kernel JSON: {e}")))?;
        Ok(match raw {
            KernelJson::Step { weights, values } => KernelSpec::Step(StepKernel::new(weights, values)?),
            KernelJson::Constant { p } => KernelSpec::Closed(ClosedFormKernel::constant(p)?),
            KernelJson::Half => KernelSpec::Closed(ClosedFormKernel::Half),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            KernelSpec::Step(k) => serde_json::json!({"type": "step", "weights": k.weights, "values": k.values}),
            KernelSpec::Closed(ClosedFormKernel::Constant(p)) => serde_json::json!({"type": "constant", "p": p}),
            KernelSpec::Closed(ClosedFormKernel::Half) => serde_json::json!({"type": "half"}),
        }
    }

    /// Step representation. A constant is represented exactly by one block;
    /// the half graphon is discretized with `blocks` blocks.
    pub fn to_step(&self, blocks: usize) -> Result<StepKernel> {
        match self {
            KernelSpec::Step(k) => Ok(k.clone()),
            KernelSpec::Closed(ClosedFormKernel::Constant(p)) => StepKernel::constant(*p),
            KernelSpec::Closed(c @ ClosedFormKernel::Half) => discretize(c, blocks),
        }
    }
}

impl Kernel for KernelSpec {
    fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            KernelSpec::Step(k) => k.eval(x, y),
            KernelSpec::Closed(c) => c.eval(x, y),
        }
    }
}

/// Operator spectrum of a step kernel (nonzero part plus the `B − rank`
/// zeros of the block matrix).
pub fn step_eig(w: &StepKernel) -> Result<Spectrum> {
    let s = sym_eig(&w.operator_matrix(), DEFAULT_TOL)?;
    Ok(Spectrum::new(s.values().to_vec(), format!("step:{}", w.blocks())))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Norms {
    /// `‖W‖₁ = Σ w_i w_j |W_ij|`.
    pub l1: f64,
    /// `‖W‖₂² = Σ w_i w_j W_ij²`.
    pub l2sq: f64,
}

pub fn norms(w: &StepKernel) -> Norms {
    let mut l1 = 0.0;
    let mut l2sq = 0.0;
    for (i, wi) in w.weights.iter().enumerate() {
        for (j, wj) in w.weights.iter().enumerate() {
            let v = w.values[i][j];
            l1 += wi * wj * v.abs();
            l2sq += wi * wj * v * v;
        }
    }
    Norms { l1, l2sq }
}

/// The `p`-disjoint union: `g` rescaled onto `[0, p)`, `h` onto `[p, 1]`,
/// zero between them.
pub fn p_join(g: &StepKernel, h: &StepKernel, p: f64) -> Result<StepKernel> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("p-join needs 0 < p < 1, got {p}")));
    }
    let (bg, bh) = (g.blocks(), h.blocks());
    let weights: Vec<f64> = g
        .weights
        .iter()
        .map(|w| w * p)
        .chain(h.weights.iter().map(|w| w * (1.0 - p)))
        .collect();
    let mut values = vec![vec![0.0; bg + bh]; bg + bh];
    for i in 0..bg {
        values[i][..bg].copy_from_slice(&g.values[i]);
    }
    for i in 0..bh {
        values[bg + i][bg..].copy_from_slice(&h.values[i]);
    }
    // the scaled weights can miss 1 by an ulp or two
    let total: f64 = weights.iter().sum();
    StepKernel::new(weights.iter().map(|w| w / total).collect(), values)
}

/// `m` equal blocks with values sampled at block centres.
pub fn discretize(f: &ClosedFormKernel, m: usize) -> Result<StepKernel> {
    if m == 0 {
        return Err(Error::invalid("discretize needs at least one block"));
    }
    let centre = |i: usize| (i as f64 + 0.5) / m as f64;
    let values = (0..m)
        .map(|i| (0..m).map(|j| f.eval(centre(i), centre(j))).collect())
        .collect();
    StepKernel::uniform_blocks(values)
}

/// The `n`-th eigenvalue of the half graphon, `2(−1)^n / ((2n + 1)π)`.
///
/// The eigenfunctions are `√2·cos((2n + 1)πx/2)`; the squares of these
/// eigenvalues sum to `‖W‖₂² = 1/2`.
pub fn half_graphon_eigenvalue(n: usize) -> f64 {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * 2.0 / ((2 * n + 1) as f64 * PI)
}

/// The first `count` eigenvalues of the half graphon, modulus-ordered.
pub fn half_graphon_spectrum(count: usize) -> Result<Spectrum> {
    if count == 0 {
        return Err(Error::invalid("half_graphon_spectrum needs count >= 1"));
    }
    Ok(Spectrum::new((0..count).map(half_graphon_eigenvalue).collect(), "kernel:half"))
}

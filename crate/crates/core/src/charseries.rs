//! Characteristic power series `ψ` of graphs and graphons.
//!
//! For a graph on `n` vertices `ψ_n(z) = det(I − z·A/n)`, available through
//! three independent routes ([`Route::Eigen`], [`Route::Newton`],
//! [`Route::HararySachs`]). For a step kernel `W`,
//!
//! ```text
//! log ψ_W(z) = −‖W‖₁·z²/2 − Σ_{k≥3} t(C_k, W)·z^k/k,   t(C_k, W) = Σ λ_i^k,
//! ```
//!
//! which is the Hilbert–Carleman determinant `det₂(I − zW)` times the
//! correction `exp(z²(‖W‖₂² − ‖W‖₁)/2)`. The literal product forms are kept
//! as [`psi_hadamard_form`] and [`psi_trace_class_form`] so the two can be
//! compared.

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graphs::{count_hs_subgraphs, normalized_trace_powers, Graph, HS_MAX_VERTICES};
use crate::kernels::{norms, step_eig, StepKernel};
use crate::partitions::{hs_family, lambda_filter};
use crate::series::{Rational, Scalar, TruncatedSeries};
use crate::spectra::{power_sums, sym_eig, Spectrum, DEFAULT_TOL};

/// Largest degree accepted by the Harary–Sachs route.
pub const HS_MAX_DEGREE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// `Π (1 − λ_i z)` over the spectrum.
    Eigen,
    /// Exponential of the trace power sums.
    Newton,
    /// Signed edge/cycle subgraph counts.
    HararySachs,
    ClosedForm,
    PartitionSum,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Eigen => "eigen",
            Route::Newton => "newton",
            Route::HararySachs => "harary_sachs",
            Route::ClosedForm => "closed_form",
            Route::PartitionSum => "partition_sum",
        }
    }
}

impl std::str::FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eigen" => Ok(Route::Eigen),
            "newton" => Ok(Route::Newton),
            "harary_sachs" | "harary-sachs" | "hs" => Ok(Route::HararySachs),
            "closed_form" => Ok(Route::ClosedForm),
            "partition_sum" => Ok(Route::PartitionSum),
            _ => Err(Error::invalid(format!("unknown route {s:?}"))),
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsiMeta {
    pub l1: f64,
    pub l2sq: f64,
    /// Spectrum of `A/n` or of the kernel operator, when the route computed one.
    pub spectrum: Option<Spectrum>,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsiResult {
    pub series: TruncatedSeries<f64>,
    pub route: Route,
    pub meta: PsiMeta,
}

impl PsiResult {
    pub fn coeffs(&self) -> &[f64] {
        self.series.coeffs()
    }

    /// `{"route", "K", "coeffs", "l1", "l2sq", "roots": [{"z", "trusted"}]}`.
    pub fn to_json(&self, roots: &[RootEntry]) -> Value {
        json!({
            "route": self.route.as_str(),
            "K": self.meta.degree,
            "coeffs": self.series.coeffs(),
            "l1": self.meta.l1,
            "l2sq": self.meta.l2sq,
            "roots": roots,
        })
    }
}

/// `Π (1 − λ z)` truncated at degree `k`.
pub fn product_of_linear_factors(values: &[f64], k: usize) -> TruncatedSeries<f64> {
    let mut c = vec![0.0; k + 1];
    c[0] = 1.0;
    for &lambda in values {
        for j in (1..=k).rev() {
            c[j] -= lambda * c[j - 1];
        }
    }
    TruncatedSeries::from_poly(c, k)
}

/// `ψ_n` of a graph by the requested route.
pub fn psi_from_graph(g: &Graph, k: usize, route: Route) -> Result<PsiResult> {
    let n = g.n();
    let density = if n == 0 { 0.0 } else { 2.0 * g.edge_count() as f64 / (n * n) as f64 };
    let meta = |spectrum| PsiMeta { l1: density, l2sq: density, spectrum, degree: k };
    if n == 0 {
        return Ok(PsiResult { series: TruncatedSeries::one(k), route, meta: meta(None) });
    }
    match route {
        Route::Eigen => {
            let spectrum = sym_eig(&g.normalized_adjacency(), DEFAULT_TOL)?;
            let series = product_of_linear_factors(spectrum.values(), k);
            Ok(PsiResult { series, route, meta: meta(Some(spectrum)) })
        }
        Route::Newton => {
            let traces = normalized_trace_powers(g, k.max(1));
            // the zero diagonal makes p_1 vanish identically
            assert!(traces[0].abs() <= 1e-12, "tr(A/n) = {} for a loop-free graph", traces[0]);
            let mut log = vec![0.0; k + 1];
            for j in 2..=k {
                log[j] = -traces[j - 1] / j as f64;
            }
            let series = TruncatedSeries::from_poly(log, k).exp(k)?;
            Ok(PsiResult { series, route, meta: meta(None) })
        }
        Route::HararySachs => {
            if n > HS_MAX_VERTICES || k > HS_MAX_DEGREE {
                return Err(Error::ScaleLimit(format!(
                    "harary_sachs route needs n <= {HS_MAX_VERTICES} and K <= {HS_MAX_DEGREE} (got n = {n}, K = {k})"
                )));
            }
            let mut c = vec![0.0; k + 1];
            for (j, slot) in c.iter_mut().enumerate().take(k.min(n) + 1) {
                let mut acc: i64 = 0;
                for term in hs_family(j) {
                    let count = count_hs_subgraphs(g, &term)? as i64;
                    acc += i64::from(term.sign) * (1i64 << term.z) * count;
                }
                *slot = acc as f64 / (n as f64).powi(j as i32);
            }
            Ok(PsiResult { series: TruncatedSeries::from_poly(c, k), route, meta: meta(None) })
        }
        Route::ClosedForm | Route::PartitionSum => Err(Error::invalid(format!(
            "route {route} does not apply to graphs (use eigen, newton or harary_sachs)"
        ))),
    }
}

/// `exp(−edge_term·z²/2 − Σ_{k≥3} t_k z^k/k)` truncated at `k`;
/// `cycle_densities[0]` is `t_3`.
pub fn series_from_power_sums<S: Scalar>(
    edge_term: S,
    cycle_densities: &[S],
    k: usize,
) -> Result<TruncatedSeries<S>> {
    if k < 2 {
        return Err(Error::invalid("series_from_power_sums needs K >= 2"));
    }
    let mut log = vec![S::zero(); k + 1];
    log[2] = -edge_term / S::from_int(2);
    for (j, t) in cycle_densities.iter().enumerate().take(k.saturating_sub(2)) {
        let deg = j + 3;
        log[deg] = -t.clone() / S::from_int(deg as i64);
    }
    TruncatedSeries::from_poly(log, k).exp(k)
}

/// `ψ_W` of a step kernel from its operator spectrum and `‖W‖₁`.
pub fn psi_from_kernel(w: &StepKernel, k: usize) -> Result<PsiResult> {
    let spectrum = step_eig(w)?;
    let nm = norms(w);
    let sums = power_sums(&spectrum, k.max(2));
    let series = series_from_power_sums(nm.l1, &sums[2..], k.max(2))?.truncate(k);
    Ok(PsiResult {
        series,
        route: Route::Eigen,
        meta: PsiMeta { l1: nm.l1, l2sq: nm.l2sq, spectrum: Some(spectrum), degree: k },
    })
}

/// `det₂(I − zW) · exp(z²(‖W‖₂² − ‖W‖₁)/2)` with `det₂` multiplied out as
/// `Π (1 − λz)·e^{λz}`: the Hadamard form with `m = a = b = 0`.
pub fn psi_hadamard_form(spectrum: &Spectrum, l1: f64, l2sq: f64, k: usize) -> Result<TruncatedSeries<f64>> {
    let mut acc = quadratic_exp((l2sq - l1) / 2.0, 0.0, k)?;
    for &lambda in spectrum.values() {
        let linear = TruncatedSeries::from_poly(vec![1.0, -lambda], k);
        let e = TruncatedSeries::from_poly(vec![0.0, lambda], k).exp(k)?;
        acc = acc.mul(&linear.mul(&e, k), k);
    }
    Ok(acc)
}

/// `exp((‖W‖₂² − ‖W‖₁)z²/2 + z·tr W) · Π (1 − λz)`, valid for trace-class
/// kernels (every step kernel).
pub fn psi_trace_class_form(spectrum: &Spectrum, l1: f64, l2sq: f64, k: usize) -> Result<TruncatedSeries<f64>> {
    let trace: f64 = spectrum.values().iter().sum();
    let e = quadratic_exp((l2sq - l1) / 2.0, trace, k)?;
    Ok(e.mul(&product_of_linear_factors(spectrum.values(), k), k))
}

fn quadratic_exp(quad: f64, lin: f64, k: usize) -> Result<TruncatedSeries<f64>> {
    TruncatedSeries::from_poly(vec![0.0, lin, quad], k).exp(k)
}

/// `(1 − pz)·exp(pz − p(1 − p)z²/2)`, the series of the constant-`p` graphon.
pub fn quasirandom_series<S: Scalar>(p: &S, k: usize) -> Result<TruncatedSeries<S>> {
    let one = S::one();
    let quad = -(p.clone() * (one.clone() - p.clone())) / S::from_int(2);
    let e = TruncatedSeries::from_poly(vec![S::zero(), p.clone(), quad], k).exp(k)?;
    let linear = TruncatedSeries::from_poly(vec![one, -p.clone()], k);
    Ok(linear.mul(&e, k))
}

/// Coefficient `k` is `Σ_{i,j} Σ_{λ ∈ Λ(k;i,j)} (−1)^j p^{k−i} / η(λ)`.
pub fn quasirandom_partition_sum(p: &Rational, k: usize) -> TruncatedSeries<Rational> {
    let mut coeffs = Vec::with_capacity(k + 1);
    for total in 0..=k {
        let mut acc = Rational::zero();
        for j in 0..=total / 2 {
            for i in 0..=j {
                for lambda in lambda_filter(total, i, j) {
                    let sign = if j % 2 == 0 { Rational::from_int(1) } else { Rational::from_int(-1) };
                    let eta = Rational::from_integer(lambda.eta());
                    acc += sign * Scalar::pow(p, total - i) / eta;
                }
            }
        }
        coeffs.push(acc);
    }
    TruncatedSeries::from_poly(coeffs, k)
}

/// Roots are reported as trustworthy only within `K/(3e·max|λ|)`; past that
/// the truncation error of the exponential factor dominates.
pub fn trust_radius(k: usize, max_abs_eigenvalue: f64) -> f64 {
    if max_abs_eigenvalue == 0.0 {
        f64::INFINITY
    } else {
        k as f64 / (3.0 * std::f64::consts::E * max_abs_eigenvalue)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RootEntry {
    pub z: f64,
    pub trusted: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootReport {
    /// Smallest-modulus real root with `|z| ≤ radius`.
    pub smallest_real: Option<f64>,
    /// All roots (real or not) with `|z| ≤ radius`.
    pub in_radius: usize,
    /// Every root of the truncated polynomial.
    pub roots: Vec<Complex64>,
    pub iterations: usize,
}

impl RootReport {
    /// Real roots inside `radius`, sorted by modulus.
    pub fn real_roots_within(&self, radius: f64) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .roots
            .iter()
            .filter(|z| z.im.abs() < REAL_IM_TOL && z.norm() <= radius)
            .map(|z| z.re)
            .collect();
        out.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        out
    }

    pub fn entries(&self, radius: f64, trusted_within: f64) -> Vec<RootEntry> {
        self.real_roots_within(radius)
            .into_iter()
            .map(|z| RootEntry { z, trusted: z.abs() <= trusted_within })
            .collect()
    }
}

const ROOT_MAX_ITER: usize = 500;
const ROOT_TOL: f64 = 1e-12;
const REAL_IM_TOL: f64 = 1e-6;

/// Roots of the truncated polynomial by Aberth–Ehrlich simultaneous
/// iteration, started on a circle of radius `1.5·radius`.
///
/// Trailing coefficients whose contribution on `|z| ≤ radius` is below
/// `1e-16` of the largest term are dropped first; they only move roots that
/// lie far outside the disk.
pub fn smallest_root(s: &TruncatedSeries<f64>, radius: f64) -> Result<RootReport> {
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::invalid("root radius must be positive"));
    }
    if s.coeff(0) != 1.0 {
        return Err(Error::invalid("smallest_root expects constant coefficient 1"));
    }
    let r = radius.max(1.0);
    let scale = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| c.abs() * r.powi(j as i32))
        .fold(0.0, f64::max);
    let mut coeffs = s.coeffs().to_vec();
    while coeffs.len() > 1 {
        let j = coeffs.len() - 1;
        let c = coeffs[j];
        if c == 0.0 || c.abs() * r.powi(j as i32) < 1e-16 * scale {
            coeffs.pop();
        } else {
            break;
        }
    }
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Ok(RootReport { smallest_real: None, in_radius: 0, roots: Vec::new(), iterations: 0 });
    }
    let (roots, iterations) = aberth(&coeffs, 1.5 * radius)?;
    let in_radius = roots.iter().filter(|z| z.norm() <= radius).count();
    let smallest_real = roots
        .iter()
        .filter(|z| z.im.abs() < REAL_IM_TOL && z.norm() <= radius)
        .map(|z| z.re)
        .min_by(|a, b| a.abs().total_cmp(&b.abs()));
    Ok(RootReport { smallest_real, in_radius, roots, iterations })
}

/// Returns all `coeffs.len() − 1` roots and the number of iterations used.
fn aberth(coeffs: &[f64], start_radius: f64) -> Result<(Vec<Complex64>, usize)> {
    let degree = coeffs.len() - 1;
    let poly: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let deriv: Vec<Complex64> = (1..=degree).map(|j| poly[j] * j as f64).collect();
    let horner = |p: &[Complex64], z: Complex64| p.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c);

    // offset keeps the start off the real axis, where conjugate pairs would
    // otherwise stay stuck
    let mut z: Vec<Complex64> = (0..degree)
        .map(|i| {
            let theta = std::f64::consts::TAU * i as f64 / degree as f64 + 0.4;
            Complex64::from_polar(start_radius, theta)
        })
        .collect();
    let mut done = vec![false; degree];

    for iter in 1..=ROOT_MAX_ITER {
        for i in 0..degree {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let value = horner(&poly, zi);
            // at a multiple root the step never settles below rounding
            // noise, so also stop once |p(z)| is within that noise
            let noise = coeffs.iter().rev().fold(0.0, |acc, c| acc * zi.norm() + c.abs());
            if value.norm() <= 8.0 * f64::EPSILON * noise {
                done[i] = true;
                continue;
            }
            let ratio = value / horner(&deriv, zi);
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| (zi - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                return Err(Error::Numerical("root iteration produced a non-finite step".into()));
            }
            z[i] = zi - step;
            if step.norm() <= ROOT_TOL * (1.0 + z[i].norm()) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok((z, iter));
        }
    }
    Err(Error::Numerical(format!(
        "root finder did not converge within {ROOT_MAX_ITER} iterations"
    )))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuasirandomRow {
    pub n: usize,
    /// Top eigenvalue of `A/n`.
    pub lambda1: f64,
    /// Second eigenvalue of `A/n` in modulus order.
    pub lambda2: f64,
    pub root: Option<f64>,
    pub roots_in_radius: usize,
    /// `max_{2≤k≤K} |c_k|`.
    pub max_coeff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuasirandomReport {
    pub p: f64,
    pub tol_root: f64,
    pub tol_gap: f64,
    pub radius: f64,
    pub rows: Vec<QuasirandomRow>,
    pub pass: bool,
    /// Why the verdict failed, empty on PASS.
    pub reasons: Vec<String>,
}

/// Tests the last graph of an increasing sequence for `p`-quasirandomness in
/// two ways: the eigenvalue gap (`λ₁/n ≈ p`, `λ₂/n ≈ 0`) and, for `p > 0`, the
/// smallest root of `ψ_n` near `1/p`. For `p = 0` the root test is replaced
/// by `max_{k≥2} |c_k| ≤ tol_root`.
pub fn quasirandom_test(
    graphs: &[Graph],
    p: f64,
    tol_root: f64,
    tol_gap: f64,
    k: usize,
) -> Result<QuasirandomReport> {
    if graphs.is_empty() {
        return Err(Error::invalid("quasirandom_test needs at least one graph"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("p = {p} outside [0, 1]")));
    }
    let radius = if p > 0.0 { 1.5 / p } else { 1.0 };
    let mut rows = Vec::with_capacity(graphs.len());
    for g in graphs {
        let psi = psi_from_graph(g, k, Route::Eigen)?;
        let spectrum = psi.meta.spectrum.as_ref().expect("eigen route keeps its spectrum");
        let (root, roots_in_radius) = if p > 0.0 && g.n() > 0 {
            let report = smallest_root(&psi.series, radius)?;
            (report.smallest_real, report.in_radius)
        } else {
            (None, 0)
        };
        rows.push(QuasirandomRow {
            n: g.n(),
            lambda1: spectrum.get(0),
            lambda2: spectrum.get(1),
            root,
            roots_in_radius,
            max_coeff: psi.coeffs().iter().skip(2).map(|c| c.abs()).fold(0.0, f64::max),
        });
    }

    let last = rows.last().expect("non-empty");
    let mut reasons = Vec::new();
    if (last.lambda1 - p).abs() > tol_gap {
        reasons.push(format!("|λ₁/n − p| = {:.6} > {tol_gap}", (last.lambda1 - p).abs()));
    }
    if last.lambda2.abs() > tol_gap {
        reasons.push(format!("|λ₂|/n = {:.6} > {tol_gap}", last.lambda2.abs()));
    }
    if p > 0.0 {
        match last.root {
            Some(z) if (z - 1.0 / p).abs() <= tol_root => {}
            Some(z) => reasons.push(format!("smallest root {z:.6} is not within {tol_root} of 1/p = {:.6}", 1.0 / p)),
            None => reasons.push(format!("no real root within |z| <= {radius}")),
        }
    } else if last.max_coeff > tol_root {
        reasons.push(format!("max |c_k| = {:.6} > {tol_root}", last.max_coeff));
    }
    Ok(QuasirandomReport { p, tol_root, tol_gap, radius, pass: reasons.is_empty(), rows, reasons })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Zero,
    Minus,
}

impl Sign {
    fn of<S: Scalar>(c: &S) -> Sign {
        match c.signum_i8() {
            1 => Sign::Plus,
            -1 => Sign::Minus,
            _ => Sign::Zero,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Zero => '0',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

pub fn format_signs(signs: &[Sign]) -> String {
    signs.iter().map(Sign::to_string).collect::<Vec<_>>().join(",")
}

/// Exact coefficient signs of the constant-`p` series.
pub fn sign_pattern(p: &Rational, k: usize) -> Result<Vec<Sign>> {
    Ok(quasirandom_series(p, k)?.coeffs().iter().map(Sign::of).collect())
}

/// The sign pattern for `p = 1/2`, `k = 0..=15`, as commonly quoted. It
/// disagrees with exact arithmetic from `k = 3` on (`c_3 = −p³/3 < 0`).
pub const QUOTED_SIGNS_HALF: &str = "+,0,-,+,+,-,-,+,+,+,-,-,+,+,-,-";

#[derive(Clone, Debug, PartialEq)]
pub struct SignReport {
    pub p: Rational,
    pub coeffs: TruncatedSeries<Rational>,
    pub signs: Vec<Sign>,
    /// Indices `k ≠ 1` with `c_k = 0` exactly.
    pub exact_zeros: Vec<usize>,
    /// For `p = 1/2`: first `k` where the exact sign differs from
    /// [`QUOTED_SIGNS_HALF`].
    pub quoted_mismatch: Option<usize>,
}

pub fn sign_report(p: &Rational, k: usize) -> Result<SignReport> {
    let coeffs = quasirandom_series(p, k)?;
    let signs: Vec<Sign> = coeffs.coeffs().iter().map(Sign::of).collect();
    let exact_zeros = signs
        .iter()
        .enumerate()
        .filter(|&(j, s)| j != 1 && *s == Sign::Zero)
        .map(|(j, _)| j)
        .collect();
    let quoted_mismatch = if *p == crate::series::rat(1, 2) {
        QUOTED_SIGNS_HALF
            .split(',')
            .zip(&signs)
            .position(|(quoted, s)| !quoted.starts_with(s.symbol()))
    } else {
        None
    };
    Ok(SignReport { p: p.clone(), coeffs, signs, exact_zeros, quoted_mismatch })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TuranEntry<S> {
    pub k: usize,
    /// `c_k² − c_{k−1}·c_{k+1}`.
    pub value: S,
    pub satisfied: bool,
}

/// Turán expressions for `1 ≤ k ≤ K − 1`. Diagnostic only.
pub fn logconcavity_report<S: Scalar>(s: &TruncatedSeries<S>) -> Result<Vec<TuranEntry<S>>> {
    let k = s.degree();
    if k < 2 {
        return Err(Error::invalid("log-concavity report needs K >= 2"));
    }
    Ok((1..k)
        .map(|j| {
            let c = s.coeffs();
            let value = c[j].clone() * c[j].clone() - c[j - 1].clone() * c[j + 1].clone();
            let satisfied = value.signum_i8() >= 0;
            TuranEntry { k: j, value, satisfied }
        })
        .collect())
}

/// Partial products `Π_{n<N'} (1 − λ_n z)` for `N' = 1..=count`, in the
/// order the eigenvalues are given.
pub fn fredholm_partial_products(eigenvalues: impl IntoIterator<Item = f64>, z: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::invalid("need at least one partial product"));
    }
    let mut acc = 1.0;
    Ok(eigenvalues
        .into_iter()
        .chain(std::iter::repeat(0.0))
        .take(count)
        .map(|lambda| {
            acc *= 1.0 - lambda * z;
            acc
        })
        .collect())
}

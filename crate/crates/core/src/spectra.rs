//! Dense symmetric eigenvalues, modulus-ordered spectra, power sums and
//! graph energy.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative off-diagonal tolerance for [`sym_eig`].
pub const DEFAULT_TOL: f64 = 1e-12;
/// Maximum number of Jacobi sweeps before reporting a numerical failure.
pub const MAX_SWEEPS: usize = 64;
/// Largest supported dimension; each sweep costs `O(dim³)`.
pub const MAX_DIM: usize = 2048;

/// Square dense matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("matrix rows must all have length n"));
        }
        Ok(DenseMatrix { n, data: rows.concat() })
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn scaled(&self, s: f64) -> Self {
        DenseMatrix { n: self.n, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(&other.data[k * n..(k + 1) * n]) {
                    *o += a * b;
                }
            }
        }
        out
    }

    fn check_symmetric(&self, tol: f64) -> Result<()> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if (self.get(i, j) - self.get(j, i)).abs() > tol {
                    return Err(Error::invalid(format!(
                        "matrix is not symmetric at ({i}, {j}): {} vs {}",
                        self.get(i, j),
                        self.get(j, i)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Real eigenvalues ordered by decreasing modulus; equal moduli are broken by
/// decreasing signed value (positive first).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: Vec<f64>,
    /// Where the values came from, e.g. `"matrix:12"` or `"kernel:half"`.
    pub origin: String,
}

impl Spectrum {
    /// Sorts `values` into modulus order.
    pub fn new(mut values: Vec<f64>, origin: impl Into<String>) -> Self {
        values.sort_by(modulus_order);
        Spectrum { values, origin: origin.into() }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The `k`-th value in modulus order, or 0 past the end (the zero
    /// eigenvalues of a finite-rank operator are not stored).
    pub fn get(&self, k: usize) -> f64 {
        self.values.get(k).copied().unwrap_or(0.0)
    }

    pub fn top(&self, k: usize) -> &[f64] {
        &self.values[..k.min(self.values.len())]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.first().map_or(0.0, |v| v.abs())
    }

    pub fn is_modulus_ordered(&self) -> bool {
        self.values
            .windows(2)
            .all(|w| modulus_order(&w[0], &w[1]) != Ordering::Greater)
    }
}

fn modulus_order(a: &f64, b: &f64) -> Ordering {
    b.abs()
        .total_cmp(&a.abs())
        .then_with(|| b.total_cmp(a))
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps use a round-robin pairing: each round rotates `⌊n/2⌋` disjoint
/// index pairs at once, so both the row and the column update stream through
/// contiguous memory. Iteration stops once the off-diagonal Frobenius mass
/// drops below `tol·‖M‖_F`.
pub fn sym_eig(m: &DenseMatrix, tol: f64) -> Result<Spectrum> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::invalid("sym_eig needs dimension at least 1"));
    }
    if n > MAX_DIM {
        return Err(Error::ScaleLimit(format!("dimension {n} exceeds {MAX_DIM}")));
    }
    m.check_symmetric(1e-12)?;
    if m.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }

    let mut a = m.clone();
    let target = tol * m.frobenius_sq().sqrt();
    let origin = format!("matrix:{n}");
    if n == 1 || off_diagonal_norm(&a) <= target {
        return Ok(Spectrum::new(diagonal(&a), origin));
    }

    // Round-robin tournament on an even number of slots; slot `n` (if any)
    // is a bye.
    let slots = n + n % 2;
    let mut order: Vec<usize> = (0..slots).collect();
    let mut pairs: Vec<(usize, usize, f64, f64)> = Vec::with_capacity(slots / 2);
    let mut touched = vec![false; n];

    for _sweep in 0..MAX_SWEEPS {
        for _round in 0..slots - 1 {
            pairs.clear();
            for i in 0..slots / 2 {
                let (x, y) = (order[i], order[slots - 1 - i]);
                if x >= n || y >= n {
                    continue;
                }
                let (p, q) = if x < y { (x, y) } else { (y, x) };
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let (c, s) = rotation(a.get(p, p), a.get(q, q), apq);
                pairs.push((p, q, c, s));
            }
            if !pairs.is_empty() {
                apply_rotations(&mut a, &pairs, &mut touched);
            }
            // keep slot 0 fixed, rotate the rest
            order[1..].rotate_right(1);
        }
        if off_diagonal_norm(&a) <= target {
            return Ok(Spectrum::new(diagonal(&a), origin));
        }
    }
    Err(Error::Numerical(format!(
        "Jacobi iteration did not converge within {MAX_SWEEPS} sweeps (dim {n})"
    )))
}

/// `(c, s)` of the rotation annihilating `a_pq`.
fn rotation(app: f64, aqq: f64, apq: f64) -> (f64, f64) {
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c)
}

/// `A ← JᵀAJ` for a product `J` of rotations on disjoint index pairs.
///
/// Each row is touched once: rows of a rotated pair get the row rotation and
/// then every column rotation while they are still in cache.
fn apply_rotations(a: &mut DenseMatrix, pairs: &[(usize, usize, f64, f64)], touched: &mut [bool]) {
    let n = a.n;
    let rotate_columns = |row: &mut [f64]| {
        for &(p, q, c, s) in pairs {
            let (u, v) = (row[p], row[q]);
            row[p] = c * u - s * v;
            row[q] = s * u + c * v;
        }
    };
    touched.fill(false);
    for &(p, q, c, s) in pairs {
        touched[p] = true;
        touched[q] = true;
        let (lo, hi) = a.data.split_at_mut(q * n);
        let row_p = &mut lo[p * n..(p + 1) * n];
        let row_q = &mut hi[..n];
        for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
            let (u, v) = (*x, *y);
            *x = c * u - s * v;
            *y = s * u + c * v;
        }
        rotate_columns(row_p);
        rotate_columns(row_q);
    }
    for (row, _) in a.data.chunks_exact_mut(n).zip(touched.iter()).filter(|(_, &t)| !t) {
        rotate_columns(row);
    }
    for &(p, q, _, _) in pairs {
        a.set(p, q, 0.0);
        a.set(q, p, 0.0);
    }
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.n {
        for (j, v) in a.row(i).iter().enumerate() {
            if i != j {
                acc += v * v;
            }
        }
    }
    acc.sqrt()
}

fn diagonal(a: &DenseMatrix) -> Vec<f64> {
    (0..a.n).map(|i| a.get(i, i)).collect()
}

/// `p_k = Σ λ^k` for `k = 1..=max_k`.
pub fn power_sums(s: &Spectrum, max_k: usize) -> Vec<f64> {
    let mut sums = vec![0.0; max_k];
    for &v in s.values() {
        let mut pow = 1.0;
        for slot in sums.iter_mut() {
            pow *= v;
            *slot += pow;
        }
    }
    sums
}

/// Sum of eigenvalue moduli. Meaningful for an unnormalized adjacency
/// spectrum, where it is the graph energy.
pub fn energy(s: &Spectrum) -> f64 {
    s.values().iter().map(|v| v.abs()).sum()
}

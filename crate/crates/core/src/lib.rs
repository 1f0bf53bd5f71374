//! Characteristic power series of finite graphs and graphons.
//!
//! For a graph `G` on `n` vertices, `ψ_n(z) = det(I − z·A/n)`; as a dense
//! graph sequence converges to a graphon `W`, `ψ_n` converges coefficient-wise
//! to
//!
//! ```text
//! ψ_W(z) = det₂(I − zW) · exp(z²(‖W‖₂² − ‖W‖₁)/2)
//! ```
//!
//! where `det₂` is the Hilbert–Carleman determinant. This crate computes both
//! sides by several independent routes (spectral, trace/Newton, Harary–Sachs
//! subgraph counts, closed forms and partition sums) so they can be checked
//! against each other.

pub mod charseries;
pub mod error;
pub mod graphs;
pub mod kernels;
pub mod partitions;
pub mod series;
pub mod spectra;

pub use charseries::{PsiResult, Route};
pub use error::{Error, Result};
pub use graphs::Graph;
pub use kernels::{ClosedFormKernel, Kernel, KernelSpec, StepKernel};
pub use partitions::{HsTerm, Partition};
pub use series::{Rational, Scalar, TruncatedSeries};
pub use spectra::Spectrum;

/// Default truncation degree for every ψ computation.
pub const DEFAULT_DEGREE: usize = 16;

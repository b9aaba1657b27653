//! Classical and quantum Fisher information, measurement-induced disturbance
//! and quantum divergences, with numerical certifiers for the
//! information–disturbance tradeoff.
//!
//! The building blocks are:
//!
//! - [`linalg`]: Hermitian eigendecomposition, spectral matrix functions,
//!   direct sums and positivity tests.
//! - [`models`]: quantum statistical models `θ ↦ ρ_θ` with derivatives.
//! - [`measurement`]: Kraus-operator measurements, POVMs and channels.
//! - [`fisher`]: classical and monotone quantum Fisher information and the
//!   disturbance `ΔJ`.
//! - [`divergence`]: relative entropies and the divergence tradeoff.
//! - [`tradeoff`]: certifiers for the tradeoff relations.
//! - [`campaign`]: seeded randomized campaigns over the certifiers.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod campaign;
pub mod divergence;
pub mod error;
pub mod fisher;
pub mod linalg;
pub mod measurement;
pub mod models;
pub mod random;
pub mod tradeoff;

pub use error::{Error, Result};
pub use fisher::{FisherMatrix, MonotoneMetric};
pub use linalg::{ComplexMatrix, DensityMatrix, HermitianMatrix};
pub use measurement::{KrausChannel, Measurement, Povm};
pub use models::{ModelPoint, StatisticalModel};

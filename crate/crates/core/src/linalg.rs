//! Dense complex Hermitian linear algebra.
//!
//! Everything downstream works with small (d ≤ ~64) dense matrices, so the
//! primitives here favour clarity over blocking: one eigendecomposition per
//! state, spectral matrix functions on top of it, and explicit support
//! handling for rank-deficient inputs.
//!
//! Support convention: an eigenvalue `λ` with `|λ| ≤ support_tol` is treated
//! as an exact zero. When no tolerance is given the default is relative,
//! `1e-12 × max |λ|`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;

/// Default Hermiticity tolerance on the max-entry deviation `‖H − H†‖_max`.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues of a density matrix must be at least `-EIGENVALUE_FLOOR`.
pub const EIGENVALUE_FLOOR: f64 = 1e-10;
/// Relative support threshold used when no explicit tolerance is passed.
pub const SUPPORT_RTOL: f64 = 1e-12;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Largest absolute entry.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn trace(m: &ComplexMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub fn hermiticity_deviation(m: &ComplexMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `(M + M†)/2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Real diagonal matrix.
pub fn diag(values: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| real(v)),
    ))
}

/// Build a matrix from a row-major list of real entries.
pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_row_iterator(rows, cols, entries.iter().map(|&v| real(v)))
}

pub fn pauli_x() -> ComplexMatrix {
    from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[real(0.0), c(0.0, -1.0), c(0.0, 1.0), real(0.0)])
}

pub fn pauli_z() -> ComplexMatrix {
    diag(&[1.0, -1.0])
}

/// A complex Hermitian matrix. Construction checks Hermiticity and stores the
/// exact Hermitian part.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tol(m, HERMITICITY_TOL)
    }

    pub fn with_tol(m: ComplexMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let deviation = hermiticity_deviation(&m);
        if !(deviation <= tol) {
            return Err(Error::NonHermitianInput { deviation, tol });
        }
        Ok(Self(hermitian_part(&m)))
    }

    /// Symmetrize an arbitrary square matrix without checking.
    pub fn hermitize(m: &ComplexMatrix) -> Self {
        assert!(m.is_square(), "hermitize needs a square matrix");
        Self(hermitian_part(m))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim, dim))
    }

    pub fn from_real_diagonal(values: &[f64]) -> Self {
        Self(diag(values))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    /// Real part of the trace (the imaginary part vanishes exactly).
    pub fn trace(&self) -> f64 {
        trace(&self.0).re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    /// `A X A†`, which preserves Hermiticity.
    pub fn congruence(&self, a: &ComplexMatrix) -> Self {
        Self::hermitize(&(a * &self.0 * a.adjoint()))
    }

    pub fn eigh(&self) -> SpectralDecomposition {
        eigh(self)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        eigh(self).min()
    }
}

impl std::ops::Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &rhs.0)
    }
}

/// A positive semidefinite, trace-one Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let h = HermitianMatrix::new(m).map_err(|e| match e {
            Error::NonHermitianInput { deviation, .. } => {
                Error::InvalidState(format!("Hermiticity deviation {deviation:.3e}"))
            }
            other => other,
        })?;
        Self::from_hermitian(h)
    }

    pub fn from_hermitian(h: HermitianMatrix) -> Result<Self> {
        let tr = h.trace();
        if !((tr - 1.0).abs() <= TRACE_TOL) {
            return Err(Error::InvalidState(format!(
                "trace {tr:.15} differs from 1"
            )));
        }
        let min = h.min_eigenvalue();
        if !(min >= -EIGENVALUE_FLOOR) {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self(h))
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self(HermitianMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn from_probabilities(p: &[f64]) -> Result<Self> {
        Self::from_hermitian(HermitianMatrix::from_real_diagonal(p))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        self.0.as_matrix()
    }

    pub fn eigh(&self) -> SpectralDecomposition {
        eigh(&self.0)
    }
}

/// `H = U diag(λ) U†` with eigenvalues sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `1e-12 × max |λ|`.
    pub fn default_support_tol(&self) -> f64 {
        SUPPORT_RTOL * self.max_abs_eigenvalue()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_values(|v| v)
    }

    /// `U diag(g(λ)) U†`.
    pub fn map_values(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&v| g(v)).collect();
        self.compose(&values)
    }

    /// `U diag(values) U†` in this eigenbasis.
    pub fn compose(&self, values: &[f64]) -> ComplexMatrix {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (k, &v) in values.iter().enumerate() {
            scaled.column_mut(k).scale_mut(v);
        }
        scaled * u.adjoint()
    }

    /// `U† A U`, i.e. `A` in the eigenbasis.
    pub fn to_eigenbasis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        self.eigenvectors.adjoint() * a * &self.eigenvectors
    }

    /// Projector onto the eigenvectors with `|λ| ≤ tol`.
    pub fn kernel_projector(&self, tol: f64) -> ComplexMatrix {
        self.map_values(|v| if v.abs() <= tol { 1.0 } else { 0.0 })
    }

    /// Number of eigenvalues with `|λ| > tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|v| v.abs() > tol).count()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come out ascending; each eigenvector is phase-fixed so that its
/// first non-negligible component is real and positive.
pub fn eigh(h: &HermitianMatrix) -> SpectralDecomposition {
    let n = h.dim();
    if n == 0 {
        return SpectralDecomposition {
            eigenvalues: Vec::new(),
            eigenvectors: ComplexMatrix::zeros(0, 0),
        };
    }
    let eig = nalgebra::SymmetricEigen::new(h.as_matrix().clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(eig.eigenvalues[src]);
        let mut col = eig.eigenvectors.column(src).clone_owned();
        if let Some(z) = col.iter().copied().find(|z| z.norm() > 1e-12) {
            let phase = z.conj() / z.norm();
            col *= phase;
        }
        eigenvectors.set_column(dst, &col);
    }
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Spectral matrix function `U diag(φ(λ)) U†`.
///
/// Eigenvalues with `|λ| ≤ support_tol` are mapped to 0 regardless of `φ`.
/// `None` selects the relative default `1e-12 × max |λ|`.
pub fn matfunc(
    h: &HermitianMatrix,
    phi: impl Fn(f64) -> f64,
    support_tol: Option<f64>,
) -> Result<HermitianMatrix> {
    let spec = eigh(h);
    matfunc_spectral(&spec, phi, support_tol)
}

pub fn matfunc_spectral(
    spec: &SpectralDecomposition,
    phi: impl Fn(f64) -> f64,
    support_tol: Option<f64>,
) -> Result<HermitianMatrix> {
    let tol = support_tol.unwrap_or_else(|| spec.default_support_tol());
    let mut mapped = Vec::with_capacity(spec.dim());
    for &lambda in &spec.eigenvalues {
        if lambda.abs() <= tol {
            mapped.push(0.0);
            continue;
        }
        let v = phi(lambda);
        if !v.is_finite() {
            return Err(Error::DomainError { eigenvalue: lambda });
        }
        mapped.push(v);
    }
    Ok(HermitianMatrix::hermitize(&spec.compose(&mapped)))
}

/// Block-diagonal `⊕_i w_i M_i`.
pub fn direct_sum(blocks: &[(f64, HermitianMatrix)]) -> Result<HermitianMatrix> {
    if let Some((w, _)) = blocks.iter().find(|(w, _)| !(*w >= 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "direct_sum weight {w} is negative"
        )));
    }
    let total: usize = blocks.iter().map(|(_, m)| m.dim()).sum();
    let mut out = ComplexMatrix::zeros(total, total);
    let mut offset = 0;
    for (w, m) in blocks {
        let d = m.dim();
        out.view_mut((offset, offset), (d, d))
            .copy_from(&m.as_matrix().scale(*w));
        offset += d;
    }
    Ok(HermitianMatrix(out))
}

/// Loewner positivity: minimum eigenvalue `≥ −tol`.
pub fn is_psd(h: &HermitianMatrix, tol: f64) -> bool {
    h.dim() == 0 || eigh(h).min() >= -tol
}

/// Smallest singular value of a square matrix.
pub fn min_singular_value(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().min()
}

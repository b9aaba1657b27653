//! Quantum statistical models `θ ↦ ρ_θ` and their parameter derivatives.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{
    c, diag, hermitian_part, pauli_x, pauli_y, trace, ComplexMatrix, DensityMatrix, HermitianMatrix,
};
use crate::random::{gaussian_hermitian, random_density_matrix, rng};

/// Default central finite-difference step.
pub const FD_STEP: f64 = 1e-5;
/// Trace tolerance for analytic derivatives.
pub const ANALYTIC_TRACE_TOL: f64 = 1e-9;
/// Trace tolerance for finite-difference derivatives.
pub const FD_TRACE_TOL: f64 = 1e-8;

/// Axis-aligned parameter box, bounds inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ParamBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        Self { lower, upper }
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, theta: &[f64]) -> bool {
        theta.len() == self.dim()
            && theta
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(t, (lo, hi))| *lo <= *t && *t <= *hi)
    }

    /// `n` evenly spaced points strictly inside the box along the diagonal.
    pub fn interior_grid(&self, n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|k| {
                let s = (k as f64 + 1.0) / (n as f64 + 1.0);
                self.lower
                    .iter()
                    .zip(&self.upper)
                    .map(|(lo, hi)| lo + s * (hi - lo))
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeSource {
    Analytic,
    FiniteDifference,
}

impl DerivativeSource {
    pub fn trace_tol(self) -> f64 {
        match self {
            DerivativeSource::Analytic => ANALYTIC_TRACE_TOL,
            DerivativeSource::FiniteDifference => FD_TRACE_TOL,
        }
    }
}

/// A differentiable family of density matrices over a parameter box.
pub trait StatisticalModel: Send + Sync {
    fn name(&self) -> String;

    /// Number of parameters `m`.
    fn param_dim(&self) -> usize;

    /// Hilbert-space dimension `d`.
    fn dim(&self) -> usize;

    fn domain(&self) -> &ParamBox;

    /// Unvalidated `ρ_θ`; [`evaluate`] checks the density-matrix axioms.
    fn state_matrix(&self, theta: &[f64]) -> Result<ComplexMatrix>;

    /// Analytic `∂_a ρ_θ`, when the model has them.
    fn derivative_matrices(&self, _theta: &[f64]) -> Option<Result<Vec<ComplexMatrix>>> {
        None
    }

    /// Where the derivatives returned by [`Self::derivative_matrices`] come from.
    fn derivative_source(&self) -> DerivativeSource {
        DerivativeSource::Analytic
    }
}

/// `ρ_θ` together with `∂_a ρ_θ` at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPoint {
    pub theta: Vec<f64>,
    pub state: DensityMatrix,
    pub derivatives: Vec<HermitianMatrix>,
}

impl ModelPoint {
    /// Validates that derivatives match the state dimension and are traceless
    /// within `trace_tol`.
    pub fn new(
        theta: Vec<f64>,
        state: DensityMatrix,
        derivatives: Vec<HermitianMatrix>,
        trace_tol: f64,
    ) -> Result<Self> {
        for (a, d) in derivatives.iter().enumerate() {
            if d.dim() != state.dim() {
                return Err(Error::DimensionMismatch {
                    expected: state.dim(),
                    found: d.dim(),
                });
            }
            let tr = d.trace();
            if !(tr.abs() <= trace_tol) {
                return Err(Error::DegenerateModel(format!(
                    "derivative {a} has trace {tr:.3e}"
                )));
            }
        }
        Ok(Self {
            theta,
            state,
            derivatives,
        })
    }

    /// No trace check; for internally propagated families whose derivatives
    /// are traceless by construction.
    pub(crate) fn from_parts(
        theta: Vec<f64>,
        state: DensityMatrix,
        derivatives: Vec<HermitianMatrix>,
    ) -> Self {
        Self {
            theta,
            state,
            derivatives,
        }
    }

    pub fn param_dim(&self) -> usize {
        self.derivatives.len()
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }
}

fn check_domain(model: &dyn StatisticalModel, theta: &[f64]) -> Result<()> {
    if theta.len() != model.param_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.param_dim(),
            found: theta.len(),
        });
    }
    if !model.domain().contains(theta) {
        return Err(Error::OutOfDomain {
            theta: theta.to_vec(),
        });
    }
    Ok(())
}

fn state_at(model: &dyn StatisticalModel, theta: &[f64]) -> Result<DensityMatrix> {
    let m = model.state_matrix(theta)?;
    DensityMatrix::new(m)
        .map_err(|e| Error::DegenerateModel(format!("state at {theta:?} is invalid: {e}")))
}

/// Evaluate the model at `theta`, using analytic derivatives when available and
/// central finite differences with step [`FD_STEP`] otherwise.
pub fn evaluate(model: &dyn StatisticalModel, theta: &[f64]) -> Result<ModelPoint> {
    check_domain(model, theta)?;
    match model.derivative_matrices(theta) {
        Some(derivs) => {
            let state = state_at(model, theta)?;
            let derivatives = derivs?
                .into_iter()
                .map(|d| HermitianMatrix::new(d).map_err(|e| Error::DegenerateModel(e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            ModelPoint::new(
                theta.to_vec(),
                state,
                derivatives,
                model.derivative_source().trace_tol(),
            )
        }
        None => evaluate_finite_difference(model, theta, FD_STEP),
    }
}

/// Evaluate with central finite differences regardless of analytic support.
/// Requires `θ ± h e_a` to lie in the domain for every axis.
pub fn evaluate_finite_difference(
    model: &dyn StatisticalModel,
    theta: &[f64],
    step: f64,
) -> Result<ModelPoint> {
    check_domain(model, theta)?;
    let state = state_at(model, theta)?;
    let mut derivatives = Vec::with_capacity(theta.len());
    for a in 0..theta.len() {
        let mut plus = theta.to_vec();
        let mut minus = theta.to_vec();
        plus[a] += step;
        minus[a] -= step;
        if !model.domain().contains(&plus) || !model.domain().contains(&minus) {
            return Err(Error::OutOfDomain {
                theta: theta.to_vec(),
            });
        }
        let d = (model.state_matrix(&plus)? - model.state_matrix(&minus)?).unscale(2.0 * step);
        derivatives.push(HermitianMatrix::hermitize(&d));
    }
    ModelPoint::new(theta.to_vec(), state, derivatives, FD_TRACE_TOL)
}

/// `θ ↦ ρ` for a fixed `ρ`.
#[derive(Debug, Clone)]
pub struct ConstantModel {
    state: DensityMatrix,
    domain: ParamBox,
}

impl ConstantModel {
    pub fn new(state: DensityMatrix, param_dim: usize) -> Self {
        Self {
            state,
            domain: ParamBox::cube(param_dim, f64::NEG_INFINITY, f64::INFINITY),
        }
    }
}

impl StatisticalModel for ConstantModel {
    fn name(&self) -> String {
        "constant".into()
    }
    fn param_dim(&self) -> usize {
        self.domain.dim()
    }
    fn dim(&self) -> usize {
        self.state.dim()
    }
    fn domain(&self) -> &ParamBox {
        &self.domain
    }
    fn state_matrix(&self, _theta: &[f64]) -> Result<ComplexMatrix> {
        Ok(self.state.as_matrix().clone())
    }
    fn derivative_matrices(&self, _theta: &[f64]) -> Option<Result<Vec<ComplexMatrix>>> {
        let d = self.dim();
        Some(Ok(vec![ComplexMatrix::zeros(d, d); self.param_dim()]))
    }
}

/// `ρ_θ = diag(cos²(θ/2), sin²(θ/2))` on `θ ∈ [0.1, π − 0.1]`.
#[derive(Debug, Clone)]
pub struct ClassicalBinaryModel {
    domain: ParamBox,
}

pub fn classical_binary_model() -> ClassicalBinaryModel {
    ClassicalBinaryModel {
        domain: ParamBox::new(vec![0.1], vec![PI - 0.1]),
    }
}

impl StatisticalModel for ClassicalBinaryModel {
    fn name(&self) -> String {
        "classical_binary".into()
    }
    fn param_dim(&self) -> usize {
        1
    }
    fn dim(&self) -> usize {
        2
    }
    fn domain(&self) -> &ParamBox {
        &self.domain
    }
    fn state_matrix(&self, theta: &[f64]) -> Result<ComplexMatrix> {
        let h = theta[0] / 2.0;
        Ok(diag(&[h.cos().powi(2), h.sin().powi(2)]))
    }
    fn derivative_matrices(&self, theta: &[f64]) -> Option<Result<Vec<ComplexMatrix>>> {
        let s = theta[0].sin() / 2.0;
        Some(Ok(vec![diag(&[-s, s])]))
    }
}

/// `ρ_θ = (I + r cosθ σ_x + r sinθ σ_y)/2`: a circle of radius `r` in the
/// equatorial plane of the Bloch ball.
#[derive(Debug, Clone)]
pub struct BlochRotationModel {
    r: f64,
    domain: ParamBox,
}

pub fn bloch_rotation_model(r: f64) -> Result<BlochRotationModel> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "Bloch radius must lie in (0, 1), got {r}"
        )));
    }
    Ok(BlochRotationModel {
        r,
        domain: ParamBox::new(vec![-4.0 * PI], vec![4.0 * PI]),
    })
}

impl BlochRotationModel {
    pub fn radius(&self) -> f64 {
        self.r
    }
}

impl StatisticalModel for BlochRotationModel {
    fn name(&self) -> String {
        format!("bloch_rotation(r={})", self.r)
    }
    fn param_dim(&self) -> usize {
        1
    }
    fn dim(&self) -> usize {
        2
    }
    fn domain(&self) -> &ParamBox {
        &self.domain
    }
    fn state_matrix(&self, theta: &[f64]) -> Result<ComplexMatrix> {
        let t = theta[0];
        let m = ComplexMatrix::identity(2, 2)
            + pauli_x().scale(self.r * t.cos())
            + pauli_y().scale(self.r * t.sin());
        Ok(m.scale(0.5))
    }
    fn derivative_matrices(&self, theta: &[f64]) -> Option<Result<Vec<ComplexMatrix>>> {
        let t = theta[0];
        let d = (pauli_x().scale(-self.r * t.sin()) + pauli_y().scale(self.r * t.cos())).scale(0.5);
        Some(Ok(vec![d]))
    }
}

/// Unitary orbit `ρ_θ = U(θ) ρ₀ U(θ)†` with `U(θ) = exp(−i Σ_a θ_a G_a)`.
#[derive(Debug, Clone)]
pub struct UnitaryOrbitModel {
    rho0: DensityMatrix,
    generators: Vec<HermitianMatrix>,
    domain: ParamBox,
}

/// Seeded random unitary-orbit model on `C^dim` with `m` parameters.
pub fn random_model(dim: usize, m: usize, seed: u64) -> Result<UnitaryOrbitModel> {
    if dim < 2 || m < 1 {
        return Err(Error::InvalidArgument(format!(
            "random_model needs dim >= 2 and m >= 1, got dim={dim}, m={m}"
        )));
    }
    let mut g = rng(seed);
    let rho0 = random_density_matrix(&mut g, dim);
    let generators = (0..m).map(|_| gaussian_hermitian(&mut g, dim)).collect();
    Ok(UnitaryOrbitModel::new(rho0, generators))
}

impl UnitaryOrbitModel {
    pub fn new(rho0: DensityMatrix, generators: Vec<HermitianMatrix>) -> Self {
        let m = generators.len();
        Self {
            rho0,
            generators,
            domain: ParamBox::cube(m, -PI, PI),
        }
    }

    pub fn initial_state(&self) -> &DensityMatrix {
        &self.rho0
    }

    pub fn generators(&self) -> &[HermitianMatrix] {
        &self.generators
    }

    fn hamiltonian(&self, theta: &[f64]) -> HermitianMatrix {
        let d = self.rho0.dim();
        let mut h = ComplexMatrix::zeros(d, d);
        for (t, g) in theta.iter().zip(&self.generators) {
            h += g.as_matrix().scale(*t);
        }
        HermitianMatrix::hermitize(&h)
    }

    /// `U(θ)` and `∂_a U(θ)` from the eigendecomposition of `H = Σ θ_a G_a`.
    ///
    /// In the eigenbasis of `H` (eigenvalues `h_k`) the Fréchet derivative of
    /// `exp(−iH)` along `E = −i G_a` is `E_kl · e^{−i(h_k+h_l)/2} sinc((h_k−h_l)/2)`.
    fn unitary_and_derivatives(&self, theta: &[f64]) -> (ComplexMatrix, Vec<ComplexMatrix>) {
        let spec = self.hamiltonian(theta).eigh();
        let v = &spec.eigenvectors;
        let h = &spec.eigenvalues;
        let d = h.len();
        let mut phases = v.clone();
        for k in 0..d {
            let z = c(0.0, -h[k]).exp();
            for r in 0..d {
                phases[(r, k)] *= z;
            }
        }
        let u = &phases * v.adjoint();
        let kernel = ComplexMatrix::from_fn(d, d, |k, l| {
            let half = 0.5 * (h[k] - h[l]);
            let sinc = if half.abs() < 1e-8 {
                1.0 - half * half / 6.0
            } else {
                half.sin() / half
            };
            c(0.0, -0.5 * (h[k] + h[l])).exp() * sinc
        });
        let du = self
            .generators
            .iter()
            .map(|g| {
                let e = spec.to_eigenbasis(g.as_matrix()) * c(0.0, -1.0);
                v * e.component_mul(&kernel) * v.adjoint()
            })
            .collect();
        (u, du)
    }
}

impl StatisticalModel for UnitaryOrbitModel {
    fn name(&self) -> String {
        format!(
            "unitary_orbit(d={}, m={})",
            self.rho0.dim(),
            self.generators.len()
        )
    }
    fn param_dim(&self) -> usize {
        self.generators.len()
    }
    fn dim(&self) -> usize {
        self.rho0.dim()
    }
    fn domain(&self) -> &ParamBox {
        &self.domain
    }
    fn state_matrix(&self, theta: &[f64]) -> Result<ComplexMatrix> {
        let (u, _) = self.unitary_and_derivatives(theta);
        Ok(hermitian_part(&(&u * self.rho0.as_matrix() * u.adjoint())))
    }
    fn derivative_matrices(&self, theta: &[f64]) -> Option<Result<Vec<ComplexMatrix>>> {
        let (u, du) = self.unitary_and_derivatives(theta);
        let rho0 = self.rho0.as_matrix();
        Some(Ok(du
            .iter()
            .map(|d| {
                let half = d * rho0 * u.adjoint();
                &half + half.adjoint()
            })
            .collect()))
    }
}

/// Offset along one axis and the state sampled there.
type Neighbour<'a> = (f64, &'a ComplexMatrix);

/// A model known only through explicit `(θ, ρ)` samples on a grid. Derivatives
/// at a sample come from second-order central differences with its nearest
/// neighbours along each axis.
#[derive(Debug, Clone)]
pub struct SampledModel {
    samples: Vec<(Vec<f64>, ComplexMatrix)>,
    dim: usize,
    domain: ParamBox,
}

/// Coordinates closer than this are considered equal when matching samples.
const SAMPLE_MATCH_TOL: f64 = 1e-12;

impl SampledModel {
    pub fn new(samples: Vec<(Vec<f64>, ComplexMatrix)>) -> Result<Self> {
        let first = samples.first().ok_or_else(|| {
            Error::InvalidArgument("sampled model needs at least one sample".into())
        })?;
        let m = first.0.len();
        let dim = first.1.nrows();
        if m == 0 {
            return Err(Error::InvalidArgument(
                "samples need at least one parameter".into(),
            ));
        }
        let mut lower = vec![f64::INFINITY; m];
        let mut upper = vec![f64::NEG_INFINITY; m];
        for (theta, rho) in &samples {
            if theta.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: theta.len(),
                });
            }
            if rho.nrows() != dim || rho.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: rho.nrows(),
                });
            }
            for a in 0..m {
                lower[a] = lower[a].min(theta[a]);
                upper[a] = upper[a].max(theta[a]);
            }
        }
        Ok(Self {
            samples,
            dim,
            domain: ParamBox::new(lower, upper),
        })
    }

    pub fn sample_points(&self) -> Vec<Vec<f64>> {
        self.samples.iter().map(|(t, _)| t.clone()).collect()
    }

    fn find(&self, theta: &[f64]) -> Option<&ComplexMatrix> {
        self.samples
            .iter()
            .find(|(t, _)| {
                t.iter()
                    .zip(theta)
                    .all(|(x, y)| (x - y).abs() <= SAMPLE_MATCH_TOL)
            })
            .map(|(_, rho)| rho)
    }

    /// Nearest samples below and above `theta` along axis `a`, with all other
    /// coordinates equal.
    fn neighbours(
        &self,
        theta: &[f64],
        a: usize,
    ) -> (Option<Neighbour<'_>>, Option<Neighbour<'_>>) {
        let mut below: Option<(f64, &ComplexMatrix)> = None;
        let mut above: Option<(f64, &ComplexMatrix)> = None;
        for (t, rho) in &self.samples {
            let aligned = t
                .iter()
                .zip(theta)
                .enumerate()
                .all(|(b, (x, y))| b == a || (x - y).abs() <= SAMPLE_MATCH_TOL);
            if !aligned {
                continue;
            }
            let gap = t[a] - theta[a];
            if gap < -SAMPLE_MATCH_TOL && below.is_none_or(|(g, _)| gap > -g) {
                below = Some((-gap, rho));
            } else if gap > SAMPLE_MATCH_TOL && above.is_none_or(|(g, _)| gap < g) {
                above = Some((gap, rho));
            }
        }
        (below, above)
    }
}

impl StatisticalModel for SampledModel {
    fn name(&self) -> String {
        format!("samples(n={})", self.samples.len())
    }
    fn param_dim(&self) -> usize {
        self.domain.dim()
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn domain(&self) -> &ParamBox {
        &self.domain
    }
    fn state_matrix(&self, theta: &[f64]) -> Result<ComplexMatrix> {
        self.find(theta).cloned().ok_or_else(|| Error::OutOfDomain {
            theta: theta.to_vec(),
        })
    }
    fn derivative_matrices(&self, theta: &[f64]) -> Option<Result<Vec<ComplexMatrix>>> {
        let centre = match self.find(theta) {
            Some(rho) => rho,
            None => {
                return Some(Err(Error::OutOfDomain {
                    theta: theta.to_vec(),
                }))
            }
        };
        let mut out = Vec::with_capacity(theta.len());
        for a in 0..theta.len() {
            let (Some((hm, fm)), Some((hp, fp))) = self.neighbours(theta, a) else {
                return Some(Err(Error::OutOfDomain {
                    theta: theta.to_vec(),
                }));
            };
            // f'(0) ≈ (h₋² f₊ − h₊² f₋ + (h₊² − h₋²) f₀) / (h₋ h₊ (h₋ + h₊))
            let num = fp.scale(hm * hm) - fm.scale(hp * hp) + centre.scale(hp * hp - hm * hm);
            let d = num.unscale(hm * hp * (hm + hp));
            out.push(hermitian_part(&d));
        }
        Some(Ok(out))
    }
    fn derivative_source(&self) -> DerivativeSource {
        DerivativeSource::FiniteDifference
    }
}

/// Traces of the derivatives; used by invariant checks.
pub fn derivative_traces(point: &ModelPoint) -> Vec<f64> {
    point
        .derivatives
        .iter()
        .map(|d| trace(d.as_matrix()).re)
        .collect()
}

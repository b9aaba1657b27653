//! Measurements given by Kraus operators `{K_ij}`: outcome `i`, inner index `j`.

use crate::error::{Error, Result};
use crate::linalg::{
    diag, direct_sum, matfunc, max_abs, min_singular_value, trace, ComplexMatrix, DensityMatrix,
    HermitianMatrix,
};
use crate::models::ModelPoint;
use crate::random::{random_isometry, rng};

/// Tolerance on `‖Σ K†K − I‖_max`.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Outcomes with probability at or below this are null.
pub const PROB_TOL: f64 = 1e-12;
/// Default smallest-singular-value threshold for reversibility.
pub const COND_TOL: f64 = 1e-8;

fn normalization_residual(dim: usize, ops: impl Iterator<Item = ComplexMatrix>) -> f64 {
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for k in ops {
        sum += k.adjoint() * k;
    }
    max_abs(&(sum - ComplexMatrix::identity(dim, dim)))
}

fn check_square(dim: usize, k: &ComplexMatrix) -> Result<()> {
    if k.nrows() != dim || k.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: if k.nrows() != dim {
                k.nrows()
            } else {
                k.ncols()
            },
        });
    }
    Ok(())
}

/// A trace-preserving Kraus map `ρ ↦ Σ_k K_k ρ K_k†` with no outcome structure.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tol(ops, NORMALIZATION_TOL)
    }

    pub fn with_tol(ops: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let dim = ops
            .first()
            .ok_or_else(|| {
                Error::InvalidArgument("channel needs at least one Kraus operator".into())
            })?
            .nrows();
        for k in &ops {
            check_square(dim, k)?;
        }
        let residual = normalization_residual(dim, ops.iter().cloned());
        if !(residual <= tol) {
            return Err(Error::NotNormalized { residual, tol });
        }
        Ok(Self { dim, ops })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// `Σ_k K_k X K_k†` for any Hermitian `X`.
    pub fn map(&self, x: &HermitianMatrix) -> HermitianMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.ops {
            out += k * x.as_matrix() * k.adjoint();
        }
        HermitianMatrix::hermitize(&out)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.dim(),
            });
        }
        DensityMatrix::from_hermitian(self.map(rho.as_hermitian()))
    }

    /// Push a model point through the channel: `(E(ρ), E(∂_a ρ))`.
    pub fn apply_point(&self, point: &ModelPoint) -> Result<ModelPoint> {
        let state = self.apply(&point.state)?;
        let derivatives = point.derivatives.iter().map(|d| self.map(d)).collect();
        Ok(ModelPoint::from_parts(
            point.theta.clone(),
            state,
            derivatives,
        ))
    }

    /// The channel `ρ ↦ tr(ρ) I/d`.
    pub fn completely_depolarizing(dim: usize) -> Self {
        let s = 1.0 / (dim as f64).sqrt();
        let mut ops = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                let mut k = ComplexMatrix::zeros(dim, dim);
                k[(r, c)] = crate::linalg::real(s);
                ops.push(k);
            }
        }
        Self { dim, ops }
    }
}

/// Seeded random channel from a stacked `(n·d) × d` isometry.
pub fn random_channel(dim: usize, kraus_count: usize, seed: u64) -> Result<KrausChannel> {
    let m = random_measurement(dim, 1, kraus_count, seed)?;
    Ok(m.as_channel())
}

/// One outcome of a measurement applied to a state.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub probability: f64,
    /// `None` for null outcomes (`p ≤ PROB_TOL`).
    pub state: Option<DensityMatrix>,
}

impl Outcome {
    pub fn is_null(&self) -> bool {
        self.state.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeEnsemble {
    pub outcomes: Vec<Outcome>,
}

impl OutcomeEnsemble {
    pub fn probabilities(&self) -> Vec<f64> {
        self.outcomes.iter().map(|o| o.probability).collect()
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<HermitianMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<HermitianMatrix>) -> Result<Self> {
        let dim = elements
            .first()
            .ok_or_else(|| Error::InvalidPovm("no elements".into()))?
            .dim();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (i, e) in elements.iter().enumerate() {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
            let min = e.min_eigenvalue();
            if min < -NORMALIZATION_TOL {
                return Err(Error::InvalidPovm(format!(
                    "element {i} has eigenvalue {min:.3e}"
                )));
            }
            sum += e.as_matrix();
        }
        let residual = max_abs(&(sum - ComplexMatrix::identity(dim, dim)));
        if residual > NORMALIZATION_TOL {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {residual:.3e}"
            )));
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[HermitianMatrix] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    /// The pure measurement `K_i = E_i^{1/2}`.
    pub fn purify(&self) -> Measurement {
        let outcomes = self
            .elements
            .iter()
            .map(|e| {
                // clip tiny negative eigenvalues from roundoff
                let root = matfunc(e, |x| x.max(0.0).sqrt(), None)
                    .expect("sqrt of clipped eigenvalues is finite");
                vec![root.into_inner()]
            })
            .collect();
        Measurement {
            dim: self.dim(),
            outcomes,
        }
    }
}

/// Outcome-indexed collection of Kraus operators with `Σ_ij K_ij† K_ij = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    dim: usize,
    outcomes: Vec<Vec<ComplexMatrix>>,
}

impl Measurement {
    pub fn new(outcomes: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        Self::with_tol(outcomes, NORMALIZATION_TOL)
    }

    pub fn with_tol(outcomes: Vec<Vec<ComplexMatrix>>, tol: f64) -> Result<Self> {
        let m = Self::unchecked(outcomes)?;
        let residual = m.normalization_residual();
        if !(residual <= tol) {
            return Err(Error::NotNormalized { residual, tol });
        }
        Ok(m)
    }

    /// Structural checks only (shape, non-empty); normalization is not enforced.
    pub fn unchecked(outcomes: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        let dim = outcomes
            .iter()
            .flatten()
            .next()
            .ok_or_else(|| {
                Error::InvalidArgument("measurement needs at least one Kraus operator".into())
            })?
            .nrows();
        if outcomes.iter().any(|o| o.is_empty()) {
            return Err(Error::InvalidArgument(
                "every outcome needs a Kraus operator".into(),
            ));
        }
        for k in outcomes.iter().flatten() {
            check_square(dim, k)?;
        }
        Ok(Self { dim, outcomes })
    }

    /// The trivial measurement `{I}`.
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            outcomes: vec![vec![ComplexMatrix::identity(dim, dim)]],
        }
    }

    /// Projective measurement in the computational basis.
    pub fn projective(dim: usize) -> Self {
        let outcomes = (0..dim)
            .map(|k| {
                let mut p = vec![0.0; dim];
                p[k] = 1.0;
                vec![diag(&p)]
            })
            .collect();
        Self { dim, outcomes }
    }

    /// Two-outcome diagonal qubit measurement
    /// `K₁ = diag(cos(θ/2 − σ/4), cos(θ/2 + σ/4))`,
    /// `K₂ = diag(sin(θ/2 − σ/4), sin(θ/2 + σ/4))`.
    pub fn royer(theta_m: f64, sigma_m: f64) -> Self {
        let lo = theta_m / 2.0 - sigma_m / 4.0;
        let hi = theta_m / 2.0 + sigma_m / 4.0;
        Self {
            dim: 2,
            outcomes: vec![
                vec![diag(&[lo.cos(), hi.cos()])],
                vec![diag(&[lo.sin(), hi.sin()])],
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcomes(&self) -> &[Vec<ComplexMatrix>] {
        &self.outcomes
    }

    pub fn normalization_residual(&self) -> f64 {
        normalization_residual(self.dim, self.outcomes.iter().flatten().cloned())
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: d,
            });
        }
        Ok(())
    }

    /// `Σ_j K_ij X K_ij†` for outcome `i`.
    pub fn outcome_map(&self, i: usize, x: &HermitianMatrix) -> HermitianMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.outcomes[i] {
            out += k * x.as_matrix() * k.adjoint();
        }
        HermitianMatrix::hermitize(&out)
    }

    /// Unnormalized post-measurement blocks `σ_i = Σ_j K_ij ρ K_ij†`.
    pub fn unnormalized_blocks(&self, rho: &DensityMatrix) -> Result<Vec<HermitianMatrix>> {
        self.check_dim(rho.dim())?;
        Ok((0..self.num_outcomes())
            .map(|i| self.outcome_map(i, rho.as_hermitian()))
            .collect())
    }

    /// Outcome probabilities and normalized post-measurement states.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<OutcomeEnsemble> {
        let outcomes = self
            .unnormalized_blocks(rho)?
            .into_iter()
            .map(|block| {
                let p = block.trace();
                if p <= PROB_TOL {
                    return Ok(Outcome {
                        probability: p.max(0.0),
                        state: None,
                    });
                }
                Ok(Outcome {
                    probability: p,
                    state: Some(DensityMatrix::from_hermitian(block.scale(1.0 / p))?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OutcomeEnsemble { outcomes })
    }

    /// Output of the measurement channel `⊕_i Σ_j K_ij ρ K_ij†`.
    pub fn channel_state(&self, rho: &DensityMatrix) -> Result<HermitianMatrix> {
        let blocks: Vec<_> = self
            .unnormalized_blocks(rho)?
            .into_iter()
            .map(|b| (1.0, b))
            .collect();
        direct_sum(&blocks)
    }

    /// The measurement channel applied to a model point: the block-diagonal
    /// state and its block-diagonal derivatives.
    pub fn channel_point(&self, point: &ModelPoint) -> Result<ModelPoint> {
        let state = DensityMatrix::from_hermitian(self.channel_state(&point.state)?)?;
        let derivatives = point
            .derivatives
            .iter()
            .map(|d| {
                let blocks: Vec<_> = (0..self.num_outcomes())
                    .map(|i| (1.0, self.outcome_map(i, d)))
                    .collect();
                direct_sum(&blocks)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModelPoint::from_parts(
            point.theta.clone(),
            state,
            derivatives,
        ))
    }

    pub fn povm(&self) -> Povm {
        let elements = self
            .outcomes
            .iter()
            .map(|ops| {
                let mut e = ComplexMatrix::zeros(self.dim, self.dim);
                for k in ops {
                    e += k.adjoint() * k;
                }
                HermitianMatrix::hermitize(&e)
            })
            .collect();
        Povm { elements }
    }

    pub fn is_pure(&self) -> bool {
        self.outcomes.iter().all(|o| o.len() == 1)
    }

    /// Smallest singular value over all Kraus operators of a pure measurement.
    pub fn min_singular_value(&self) -> Result<f64> {
        if !self.is_pure() {
            return Err(Error::NotPure);
        }
        Ok(self
            .outcomes
            .iter()
            .map(|o| min_singular_value(&o[0]))
            .fold(f64::INFINITY, f64::min))
    }

    /// Pure with every `K_i` invertible (smallest singular value `> cond_tol`).
    pub fn is_reversible(&self, cond_tol: f64) -> Result<bool> {
        Ok(self.min_singular_value()? > cond_tol)
    }

    /// Flatten into a channel, forgetting which outcome occurred.
    pub fn as_channel(&self) -> KrausChannel {
        KrausChannel {
            dim: self.dim,
            ops: self.outcomes.iter().flatten().cloned().collect(),
        }
    }

    /// The family of outcome distributions and post-measurement states along a
    /// model point, with chain-rule derivatives.
    pub fn propagate(&self, point: &ModelPoint) -> Result<PostMeasurement> {
        self.check_dim(point.dim())?;
        let m = point.param_dim();
        let mut probabilities = Vec::with_capacity(self.num_outcomes());
        let mut dprobs = vec![Vec::with_capacity(self.num_outcomes()); m];
        let mut states = Vec::with_capacity(self.num_outcomes());
        for i in 0..self.num_outcomes() {
            let block = self.outcome_map(i, point.state.as_hermitian());
            let dblocks: Vec<_> = point
                .derivatives
                .iter()
                .map(|d| self.outcome_map(i, d))
                .collect();
            let p = block.trace();
            let dp: Vec<f64> = dblocks.iter().map(|b| trace(b.as_matrix()).re).collect();
            for (a, v) in dp.iter().enumerate() {
                dprobs[a].push(*v);
            }
            probabilities.push(p.max(0.0));
            if p <= PROB_TOL {
                states.push(None);
                continue;
            }
            let rho_i = block.scale(1.0 / p);
            // ∂ρ_i = (Σ_j K ∂ρ K† − ∂p_i ρ_i) / p_i
            let derivatives = dblocks
                .iter()
                .zip(&dp)
                .map(|(b, dpa)| (b - &rho_i.scale(*dpa)).scale(1.0 / p))
                .collect();
            let state = DensityMatrix::from_hermitian(rho_i)?;
            states.push(Some(ModelPoint::from_parts(
                point.theta.clone(),
                state,
                derivatives,
            )));
        }
        Ok(PostMeasurement {
            probabilities,
            dprobs,
            states,
        })
    }
}

/// Outcome distribution `p_i`, its derivatives `∂_a p_i` (indexed `[a][i]`), and
/// the post-measurement families `ρ_{θ,i}` (`None` for null outcomes).
#[derive(Debug, Clone)]
pub struct PostMeasurement {
    pub probabilities: Vec<f64>,
    pub dprobs: Vec<Vec<f64>>,
    pub states: Vec<Option<ModelPoint>>,
}

/// Seeded random measurement: `n_outcomes × ops_per_outcome` Kraus operators
/// sliced from a random `(N·d) × d` isometry.
pub fn random_measurement(
    dim: usize,
    n_outcomes: usize,
    ops_per_outcome: usize,
    seed: u64,
) -> Result<Measurement> {
    if dim == 0 || n_outcomes == 0 || ops_per_outcome == 0 {
        return Err(Error::InvalidArgument(
            "random_measurement arguments must be >= 1".into(),
        ));
    }
    let n = n_outcomes * ops_per_outcome;
    let v = random_isometry(&mut rng(seed), n * dim, dim);
    let outcomes = (0..n_outcomes)
        .map(|i| {
            (0..ops_per_outcome)
                .map(|j| {
                    let k = i * ops_per_outcome + j;
                    v.view((k * dim, 0), (dim, dim)).clone_owned()
                })
                .collect()
        })
        .collect();
    Ok(Measurement { dim, outcomes })
}

//! Classical Fisher information of outcome distributions and monotone quantum
//! Fisher information.
//!
//! A monotone metric is fixed by an operator monotone `f: (0,∞) → (0,∞)` with
//! `f(1) = 1`. Its superoperator `K_ρ = R_ρ f(L_ρ R_ρ⁻¹)` is diagonal in the
//! eigenbasis of `ρ = Σ p_k |k⟩⟨k|`: it scales `|k⟩⟨l|` by
//! `c_kl = p_l f(p_k / p_l)`. The Fisher matrix is then
//!
//! ```text
//! J_ab = tr(∂_a ρ K_ρ⁻¹(∂_b ρ)) = Σ_kl conj((∂_a ρ)_kl) (∂_b ρ)_kl / c_kl
//! ```
//!
//! with the derivatives expressed in the same eigenbasis.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{eigh, is_psd, max_abs, real, ComplexMatrix, DensityMatrix, HermitianMatrix};
use crate::measurement::{Measurement, PostMeasurement, PROB_TOL};
use crate::models::{evaluate, ModelPoint, StatisticalModel};

/// `|f(1) − 1|` allowed for user-supplied metrics.
pub const F_AT_ONE_TOL: f64 = 1e-12;
/// Below this `|x − 1|` the BKM function switches to its Taylor series.
pub const BKM_SERIES_RADIUS: f64 = 1e-4;

#[derive(Clone)]
enum MetricKind {
    Sld,
    Rld,
    RealRld,
    Bkm,
    Custom {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        symmetric: bool,
    },
}

/// A monotone quantum Fisher metric.
#[derive(Clone)]
pub struct MonotoneMetric {
    name: String,
    kind: MetricKind,
}

impl fmt::Debug for MonotoneMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneMetric")
            .field("name", &self.name)
            .field("symmetric", &self.is_symmetric())
            .finish()
    }
}

impl PartialEq for MonotoneMetric {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

fn bkm(x: f64) -> f64 {
    let u = x - 1.0;
    if u.abs() < BKM_SERIES_RADIUS {
        // u / ln(1+u) = 1 + u/2 − u²/12 + u³/24 − …
        1.0 + u / 2.0 - u * u / 12.0 + u * u * u / 24.0
    } else {
        u / x.ln()
    }
}

impl MonotoneMetric {
    /// Symmetric logarithmic derivative, `f(x) = (1+x)/2`.
    pub fn sld() -> Self {
        Self {
            name: "sld".into(),
            kind: MetricKind::Sld,
        }
    }

    /// Right logarithmic derivative, `f(x) = x`.
    pub fn rld() -> Self {
        Self {
            name: "rld".into(),
            kind: MetricKind::Rld,
        }
    }

    /// Real RLD, `f(x) = 2x/(x+1)`.
    pub fn real_rld() -> Self {
        Self {
            name: "real_rld".into(),
            kind: MetricKind::RealRld,
        }
    }

    /// Bogoliubov–Kubo–Mori, `f(x) = (x−1)/ln x`.
    pub fn bkm() -> Self {
        Self {
            name: "bkm".into(),
            kind: MetricKind::Bkm,
        }
    }

    /// SLD, BKM, real RLD, RLD.
    pub fn presets() -> Vec<Self> {
        vec![Self::sld(), Self::bkm(), Self::real_rld(), Self::rld()]
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "sld" => Ok(Self::sld()),
            "rld" => Ok(Self::rld()),
            "real_rld" => Ok(Self::real_rld()),
            "bkm" => Ok(Self::bkm()),
            other => Err(Error::UnknownMetric(other.to_string())),
        }
    }

    /// A user-supplied metric. Only `f(1) = 1` is checked; operator
    /// monotonicity is the caller's responsibility.
    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        symmetric: bool,
    ) -> Result<Self> {
        let at_one = f(1.0);
        if !((at_one - 1.0).abs() <= F_AT_ONE_TOL) {
            return Err(Error::InvalidArgument(format!(
                "metric function must satisfy f(1) = 1, got {at_one}"
            )));
        }
        Ok(Self {
            name: name.into(),
            kind: MetricKind::Custom {
                f: Arc::new(f),
                symmetric,
            },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn f(&self, x: f64) -> f64 {
        match &self.kind {
            MetricKind::Sld => (1.0 + x) / 2.0,
            MetricKind::Rld => x,
            MetricKind::RealRld => 2.0 * x / (x + 1.0),
            MetricKind::Bkm => bkm(x),
            MetricKind::Custom { f, .. } => f(x),
        }
    }

    /// Whether `x f(1/x) = f(x)`.
    pub fn is_symmetric(&self) -> bool {
        match &self.kind {
            MetricKind::Rld => false,
            MetricKind::Custom { symmetric, .. } => *symmetric,
            _ => true,
        }
    }

    /// Presets are known operator monotone; custom functions are not verified.
    pub fn is_trusted(&self) -> bool {
        !matches!(self.kind, MetricKind::Custom { .. })
    }

    fn is_sld(&self) -> bool {
        matches!(self.kind, MetricKind::Sld)
    }

    /// Eigenvalue of `K_ρ` on `|k⟩⟨l|`: `p_l f(p_k/p_l)`, for `p_k, p_l > 0`.
    pub fn kernel_coefficient(&self, p_k: f64, p_l: f64) -> f64 {
        p_l * self.f(p_k / p_l)
    }
}

/// An `m × m` Fisher information matrix. Hermitian; real symmetric for
/// classical Fisher information and symmetric metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherMatrix {
    pub matrix: ComplexMatrix,
    pub metric_name: String,
}

impl FisherMatrix {
    pub fn zeros(m: usize, metric_name: impl Into<String>) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(m, m),
            metric_name: metric_name.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Real part of the `(0, 0)` entry; the scalar Fisher information when `m = 1`.
    pub fn scalar(&self) -> f64 {
        self.matrix[(0, 0)].re
    }

    pub fn as_hermitian(&self) -> HermitianMatrix {
        HermitianMatrix::hermitize(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.as_hermitian().min_eigenvalue()
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        is_psd(&self.as_hermitian(), tol)
    }

    pub fn max_imaginary(&self) -> f64 {
        self.matrix.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }
}

/// `[J^C]_ab = Σ_{i: p_i > PROB_TOL} ∂_a p_i ∂_b p_i / p_i`.
///
/// `dprobs[a][i]` is `∂_a p_i`.
pub fn classical_fisher(probs: &[f64], dprobs: &[Vec<f64>]) -> Result<FisherMatrix> {
    if probs.iter().any(|p| !(*p >= -PROB_TOL)) {
        return Err(Error::NotADistribution("negative probability".into()));
    }
    let total: f64 = probs.iter().sum();
    if !((total - 1.0).abs() <= 1e-9) {
        return Err(Error::NotADistribution(format!(
            "probabilities sum to {total}"
        )));
    }
    for (a, dp) in dprobs.iter().enumerate() {
        if dp.len() != probs.len() {
            return Err(Error::DimensionMismatch {
                expected: probs.len(),
                found: dp.len(),
            });
        }
        let s: f64 = dp.iter().sum();
        if !(s.abs() <= 1e-8) {
            return Err(Error::NotADistribution(format!(
                "derivatives along axis {a} sum to {s:.3e}"
            )));
        }
    }
    let m = dprobs.len();
    let mut j = ComplexMatrix::zeros(m, m);
    let edge = PROB_TOL.sqrt();
    for (i, &p) in probs.iter().enumerate() {
        if p <= PROB_TOL {
            if dprobs.iter().any(|dp| dp[i].abs() > edge) {
                return Err(Error::SingularDistribution { outcome: i });
            }
            continue;
        }
        for a in 0..m {
            for b in 0..m {
                j[(a, b)] += real(dprobs[a][i] * dprobs[b][i] / p);
            }
        }
    }
    Ok(FisherMatrix {
        matrix: j,
        metric_name: "classical".into(),
    })
}

/// Quantum Fisher information of a model point.
pub fn quantum_fisher(point: &ModelPoint, metric: &MonotoneMetric) -> Result<FisherMatrix> {
    quantum_fisher_of(&point.state, &point.derivatives, metric)
}

/// Quantum Fisher information of `(ρ, {∂_a ρ})`.
///
/// Pairs `(k, l)` with both eigenvalues on the support use `c_kl`. For SLD a
/// pair also counts when `(p_k + p_l)/2` exceeds the support threshold. Every
/// other pair is dropped if the derivatives vanish there, and otherwise the
/// state is reported [`Error::RankDeficient`].
pub fn quantum_fisher_of(
    state: &DensityMatrix,
    derivatives: &[HermitianMatrix],
    metric: &MonotoneMetric,
) -> Result<FisherMatrix> {
    let d = state.dim();
    for dr in derivatives {
        if dr.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: dr.dim(),
            });
        }
    }
    let spec = eigh(state.as_hermitian());
    let p = &spec.eigenvalues;
    let tol = spec.default_support_tol();
    let rotated: Vec<ComplexMatrix> = derivatives
        .iter()
        .map(|dr| spec.to_eigenbasis(dr.as_matrix()))
        .collect();
    let scale = rotated.iter().map(max_abs).fold(1.0, f64::max);
    let kernel_tol = 1e-9 * scale;

    // inverse kernel coefficients, 0 for dropped pairs
    let mut inv_c = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        for l in 0..d {
            let coefficient = if p[k] > tol && p[l] > tol {
                Some(metric.kernel_coefficient(p[k], p[l]))
            } else if metric.is_sld() && (p[k] + p[l]) / 2.0 > tol {
                Some((p[k] + p[l]) / 2.0)
            } else {
                None
            };
            match coefficient {
                Some(c) if c > tol => inv_c[(k, l)] = real(1.0 / c),
                _ => {
                    if rotated.iter().any(|r| r[(k, l)].norm() > kernel_tol) {
                        return Err(Error::RankDeficient {
                            min_eigenvalue: spec.min(),
                        });
                    }
                }
            }
        }
    }

    let m = derivatives.len();
    let mut j = ComplexMatrix::zeros(m, m);
    for a in 0..m {
        for b in a..m {
            let mut acc = real(0.0);
            for k in 0..d {
                for l in 0..d {
                    acc += rotated[a][(k, l)].conj() * rotated[b][(k, l)] * inv_c[(k, l)];
                }
            }
            j[(a, b)] = acc;
            j[(b, a)] = acc.conj();
        }
        j[(a, a)].im = 0.0;
    }
    Ok(FisherMatrix {
        matrix: j,
        metric_name: metric.name().to_string(),
    })
}

/// Fisher information of one outcome's post-measurement family.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeFisher {
    pub probability: f64,
    /// `None` for null outcomes, which are excluded from the average.
    pub fisher: Option<FisherMatrix>,
}

/// `ΔJ^Q = J^Q − Σ_i p_i J'^Q_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisturbanceResult {
    pub j_quantum_before: FisherMatrix,
    pub per_outcome: Vec<OutcomeFisher>,
    pub delta: ComplexMatrix,
}

impl DisturbanceResult {
    /// `Σ_i p_i J'_i`.
    pub fn average_after(&self) -> ComplexMatrix {
        &self.j_quantum_before.matrix - &self.delta
    }

    pub fn delta_hermitian(&self) -> HermitianMatrix {
        HermitianMatrix::hermitize(&self.delta)
    }
}

/// Disturbance at a model point, from an already propagated measurement.
pub fn disturbance_from(
    point: &ModelPoint,
    post: &PostMeasurement,
    metric: &MonotoneMetric,
) -> Result<DisturbanceResult> {
    let before = quantum_fisher(point, metric)?;
    let mut delta = before.matrix.clone();
    let mut per_outcome = Vec::with_capacity(post.states.len());
    for (p, state) in post.probabilities.iter().zip(&post.states) {
        let fisher = match state {
            Some(s) => {
                let j = quantum_fisher(s, metric)?;
                delta -= j.matrix.scale(*p);
                Some(j)
            }
            None => None,
        };
        per_outcome.push(OutcomeFisher {
            probability: *p,
            fisher,
        });
    }
    Ok(DisturbanceResult {
        j_quantum_before: before,
        per_outcome,
        delta,
    })
}

pub fn disturbance_at(
    point: &ModelPoint,
    meas: &Measurement,
    metric: &MonotoneMetric,
) -> Result<DisturbanceResult> {
    let post = meas.propagate(point)?;
    disturbance_from(point, &post, metric)
}

/// Measurement-induced loss of quantum Fisher information at `theta`.
pub fn disturbance(
    model: &dyn StatisticalModel,
    meas: &Measurement,
    theta: &[f64],
    metric: &MonotoneMetric,
) -> Result<DisturbanceResult> {
    let point = evaluate(model, theta)?;
    disturbance_at(&point, meas, metric)
}

/// Classical Fisher information of the outcome distribution along the model.
pub fn measurement_classical_fisher(post: &PostMeasurement) -> Result<FisherMatrix> {
    classical_fisher(&post.probabilities, &post.dprobs)
}

/// Smallest disturbance among candidate metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct InfimumDisturbance {
    pub metric_name: String,
    pub value: ComplexMatrix,
    /// Set for `m ≥ 2`, where candidates are ranked by `tr ΔJ` because the
    /// Loewner order is only partial.
    pub trace_proxy: bool,
    /// `(metric, ranking score)` for every candidate, in input order.
    pub candidates: Vec<(String, f64)>,
}

pub fn infimum_disturbance(
    model: &dyn StatisticalModel,
    meas: &Measurement,
    theta: &[f64],
    metrics: &[MonotoneMetric],
) -> Result<InfimumDisturbance> {
    if metrics.is_empty() {
        return Err(Error::InvalidArgument(
            "infimum needs at least one metric".into(),
        ));
    }
    let point = evaluate(model, theta)?;
    let post = meas.propagate(&point)?;
    let trace_proxy = point.param_dim() >= 2;
    let mut best: Option<(usize, f64, ComplexMatrix)> = None;
    let mut candidates = Vec::with_capacity(metrics.len());
    for (idx, metric) in metrics.iter().enumerate() {
        let r = disturbance_from(&point, &post, metric)?;
        let score = r.delta.diagonal().iter().map(|z| z.re).sum::<f64>();
        candidates.push((metric.name().to_string(), score));
        if best.as_ref().is_none_or(|(_, s, _)| score < *s) {
            best = Some((idx, score, r.delta));
        }
    }
    let (idx, _, value) = best.expect("at least one metric");
    Ok(InfimumDisturbance {
        metric_name: metrics[idx].name().to_string(),
        value,
        trace_proxy,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{bloch_rotation_model, classical_binary_model, ConstantModel};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn preset_functions() {
        for m in MonotoneMetric::presets() {
            assert_abs_diff_eq!(m.f(1.0), 1.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(
            MonotoneMetric::bkm().f(2.0),
            1.0 / 2f64.ln(),
            epsilon = 1e-15
        );
        assert!(!MonotoneMetric::rld().is_symmetric());
        assert!(MonotoneMetric::bkm().is_symmetric());
        assert!(matches!(
            MonotoneMetric::from_name("XYZ"),
            Err(Error::UnknownMetric(_))
        ));
    }

    #[test]
    fn bkm_series_is_continuous() {
        let m = MonotoneMetric::bkm();
        for &u in &[0.99e-4, -0.99e-4, 1e-6, 3e-9] {
            let x: f64 = 1.0 + u;
            let series = m.f(x);
            // ln1p keeps the closed form accurate near 1 for the comparison
            let closed = u / u.ln_1p();
            assert_abs_diff_eq!(series, closed, epsilon = 1e-15);
        }
        for &x in &[1.0 + 1.01e-4, 1.0 - 1.01e-4] {
            assert_abs_diff_eq!(m.f(x), (x - 1.0) / f64::ln(x), epsilon = 1e-12);
        }
    }

    #[test]
    fn custom_metric_needs_f_one() {
        assert!(MonotoneMetric::custom("bad", |x| x + 0.5, true).is_err());
        let wy = MonotoneMetric::custom(
            "wigner_yanase",
            |x: f64| 0.25 * (1.0 + x.sqrt()).powi(2),
            true,
        )
        .unwrap();
        assert!(!wy.is_trusted());
    }

    #[test]
    fn classical_fisher_examples() {
        let j = classical_fisher(&[0.5, 0.5], &[vec![-0.5, 0.5]]).unwrap();
        assert_abs_diff_eq!(j.scalar(), 1.0, epsilon = 1e-15);
        let z = classical_fisher(&[0.2, 0.8], &[vec![0.0, 0.0]]).unwrap();
        assert_eq!(z.scalar(), 0.0);
        let j = classical_fisher(&[0.5, 0.5], &[vec![1.0, -1.0]]).unwrap();
        assert_abs_diff_eq!(j.scalar(), 4.0, epsilon = 1e-15);
    }

    #[test]
    fn classical_fisher_errors() {
        assert!(matches!(
            classical_fisher(&[1.0, 0.0], &[vec![-0.5, 0.5]]),
            Err(Error::SingularDistribution { outcome: 1 })
        ));
        assert!(classical_fisher(&[1.0, 0.0], &[vec![0.0, 0.0]]).is_ok());
        assert!(matches!(
            classical_fisher(&[0.6, 0.6], &[vec![0.0, 0.0]]),
            Err(Error::NotADistribution(_))
        ));
        assert!(matches!(
            classical_fisher(&[0.5, 0.5], &[vec![0.1, 0.0]]),
            Err(Error::NotADistribution(_))
        ));
    }

    #[test]
    fn classical_fisher_relabel_invariant() {
        let p = [0.1, 0.3, 0.6];
        let dp = vec![vec![0.2, -0.5, 0.3], vec![-0.1, 0.0, 0.1]];
        let a = classical_fisher(&p, &dp).unwrap();
        let perm = [2, 0, 1];
        let pp: Vec<f64> = perm.iter().map(|&i| p[i]).collect();
        let dpp: Vec<Vec<f64>> = dp
            .iter()
            .map(|v| perm.iter().map(|&i| v[i]).collect())
            .collect();
        let b = classical_fisher(&pp, &dpp).unwrap();
        assert!(max_abs(&(a.matrix - b.matrix)) < 1e-14);
    }

    #[test]
    fn commuting_family_reduces_to_classical() {
        let model = classical_binary_model();
        let point = evaluate(&model, &[PI / 2.0]).unwrap();
        for metric in MonotoneMetric::presets() {
            let j = quantum_fisher(&point, &metric).unwrap();
            assert_abs_diff_eq!(j.scalar(), 1.0, epsilon = 1e-12);
        }
    }

    /// `2 Σ_kl |(∂ρ)_kl|² / (p_k + p_l)` in the eigenbasis.
    fn sld_oracle(point: &ModelPoint) -> f64 {
        let s = point.state.eigh();
        let d = s.to_eigenbasis(point.derivatives[0].as_matrix());
        let mut acc = 0.0;
        for k in 0..s.dim() {
            for l in 0..s.dim() {
                acc += 2.0 * d[(k, l)].norm_sqr() / (s.eigenvalues[k] + s.eigenvalues[l]);
            }
        }
        acc
    }

    #[test]
    fn bloch_rotation_sld_is_r_squared() {
        let model = bloch_rotation_model(0.5).unwrap();
        for &t in &[0.0, 0.4, 1.9, -2.2] {
            let point = evaluate(&model, &[t]).unwrap();
            let j = quantum_fisher(&point, &MonotoneMetric::sld()).unwrap();
            assert_abs_diff_eq!(sld_oracle(&point), 0.25, epsilon = 1e-12);
            assert_abs_diff_eq!(j.scalar(), 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn constant_model_has_zero_information() {
        let model = ConstantModel::new(DensityMatrix::maximally_mixed(3), 2);
        let point = evaluate(&model, &[0.0, 0.0]).unwrap();
        for metric in MonotoneMetric::presets() {
            assert_eq!(
                max_abs(&quantum_fisher(&point, &metric).unwrap().matrix),
                0.0
            );
        }
    }

    #[test]
    fn rank_deficient_states() {
        // pure state rotating out of its support
        let psi = DensityMatrix::from_probabilities(&[1.0, 0.0]).unwrap();
        let d = HermitianMatrix::new(crate::linalg::pauli_x()).unwrap();
        let sld =
            quantum_fisher_of(&psi, std::slice::from_ref(&d), &MonotoneMetric::sld()).unwrap();
        assert_abs_diff_eq!(sld.scalar(), 4.0, epsilon = 1e-12);
        assert!(matches!(
            quantum_fisher_of(&psi, &[d], &MonotoneMetric::bkm()),
            Err(Error::RankDeficient { .. })
        ));
        // derivative confined to the support: every metric is finite
        let still = HermitianMatrix::zeros(2);
        for metric in MonotoneMetric::presets() {
            let j = quantum_fisher_of(&psi, std::slice::from_ref(&still), &metric).unwrap();
            assert_eq!(j.scalar(), 0.0);
        }
    }

    #[test]
    fn identity_measurement_does_not_disturb() {
        let model = bloch_rotation_model(0.6).unwrap();
        for metric in MonotoneMetric::presets() {
            let r = disturbance(&model, &Measurement::identity(2), &[0.8], &metric).unwrap();
            assert!(max_abs(&r.delta) < 1e-14);
        }
    }

    #[test]
    fn projective_measurement_on_classical_family() {
        let model = classical_binary_model();
        for metric in MonotoneMetric::presets() {
            let r = disturbance(&model, &Measurement::projective(2), &[1.2], &metric).unwrap();
            assert!(max_abs(&r.average_after()) < 1e-12);
            assert!(max_abs(&(r.delta - &r.j_quantum_before.matrix)) < 1e-12);
            assert_abs_diff_eq!(r.j_quantum_before.scalar(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn infimum_single_metric_and_identity() {
        let model = bloch_rotation_model(0.5).unwrap();
        let meas = Measurement::royer(PI / 2.0, PI / 2.0);
        let inf = infimum_disturbance(&model, &meas, &[0.3], &[MonotoneMetric::bkm()]).unwrap();
        assert_eq!(inf.metric_name, "bkm");
        assert!(!inf.trace_proxy);

        let inf = infimum_disturbance(
            &model,
            &Measurement::identity(2),
            &[0.3],
            &MonotoneMetric::presets(),
        )
        .unwrap();
        assert!(max_abs(&inf.value) < 1e-14);

        let all = infimum_disturbance(&model, &meas, &[0.3], &MonotoneMetric::presets()).unwrap();
        let sld = disturbance(&model, &meas, &[0.3], &MonotoneMetric::sld()).unwrap();
        assert!(all.value[(0, 0)].re <= sld.delta[(0, 0)].re + 1e-15);
        assert!(infimum_disturbance(&model, &meas, &[0.3], &[]).is_err());
    }
}

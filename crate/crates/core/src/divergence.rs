//! Relative entropies between distributions and between states, and the
//! divergence form of the information–disturbance tradeoff.
//!
//! Natural logarithms throughout. Infinite values are carried as
//! [`Extended::PosInfinity`] and never enter floating-point arithmetic.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigh, trace, DensityMatrix, HermitianMatrix, SpectralDecomposition};
use crate::measurement::{Measurement, PROB_TOL};
use crate::models::StatisticalModel;

/// Support leak `tr(P_σ^⊥ ρ)` above which `S(ρ‖σ) = +∞`.
pub const SUPPORT_LEAK_TOL: f64 = 1e-9;
/// Negative values down to this magnitude are rounded to 0 (Klein's inequality).
pub const KLEIN_TOL: f64 = 1e-10;
/// Default finite-difference step for local expansions.
pub const EXPANSION_DELTA: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceKind {
    Classical,
    QuantumRelative,
    BelavkinStaszewski,
}

impl DivergenceKind {
    pub fn name(self) -> &'static str {
        match self {
            DivergenceKind::Classical => "classical",
            DivergenceKind::QuantumRelative => "quantum_relative",
            DivergenceKind::BelavkinStaszewski => "belavkin_staszewski",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "classical" => Ok(Self::Classical),
            "quantum_relative" => Ok(Self::QuantumRelative),
            "belavkin_staszewski" => Ok(Self::BelavkinStaszewski),
            other => Err(Error::InvalidArgument(format!(
                "unknown divergence kind {other:?}"
            ))),
        }
    }
}

/// A non-negative extended real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    PosInfinity,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::PosInfinity => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Extended::Finite(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceValue {
    pub kind: DivergenceKind,
    pub value: Extended,
}

impl DivergenceValue {
    fn finite(kind: DivergenceKind, v: f64) -> Self {
        let v = if (-KLEIN_TOL..0.0).contains(&v) {
            0.0
        } else {
            v
        };
        Self {
            kind,
            value: Extended::Finite(v),
        }
    }

    fn infinite(kind: DivergenceKind) -> Self {
        Self {
            kind,
            value: Extended::PosInfinity,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        self.value.finite()
    }
}

fn check_distribution(p: &[f64], label: &str) -> Result<()> {
    if p.iter().any(|v| !(*v >= -PROB_TOL)) {
        return Err(Error::NotADistribution(format!(
            "{label} has a negative entry"
        )));
    }
    let s: f64 = p.iter().sum();
    if !((s - 1.0).abs() <= 1e-9) {
        return Err(Error::NotADistribution(format!("{label} sums to {s}")));
    }
    Ok(())
}

/// `Σ_i p_i ln(p_i / q_i)`.
pub fn classical_relative_entropy(p: &[f64], q: &[f64]) -> Result<DivergenceValue> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    check_distribution(p, "p")?;
    check_distribution(q, "q")?;
    let kind = DivergenceKind::Classical;
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= PROB_TOL {
            continue;
        }
        if qi <= PROB_TOL {
            return Ok(DivergenceValue::infinite(kind));
        }
        acc += pi * (pi / qi).ln();
    }
    Ok(DivergenceValue::finite(kind, acc))
}

fn check_same_dim(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    Ok(())
}

fn log_on_support(spec: &SpectralDecomposition, tol: f64) -> HermitianMatrix {
    HermitianMatrix::hermitize(&spec.map_values(|v| if v > tol { v.ln() } else { 0.0 }))
}

fn trace_product(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    trace(&(a.as_matrix() * b.as_matrix())).re
}

/// `tr ρ (ln ρ − ln σ)`, `+∞` when `supp ρ ⊄ supp σ`.
pub fn quantum_relative_entropy(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<DivergenceValue> {
    check_same_dim(rho, sigma)?;
    let kind = DivergenceKind::QuantumRelative;
    let s_sigma = sigma.eigh();
    let tol_sigma = s_sigma.default_support_tol();
    let kernel =
        HermitianMatrix::hermitize(&s_sigma.map_values(|v| if v > tol_sigma { 0.0 } else { 1.0 }));
    if trace_product(&kernel, rho.as_hermitian()) > SUPPORT_LEAK_TOL {
        return Ok(DivergenceValue::infinite(kind));
    }
    let s_rho = rho.eigh();
    let tol_rho = s_rho.default_support_tol();
    let neg_entropy: f64 = s_rho
        .eigenvalues
        .iter()
        .filter(|&&p| p > tol_rho)
        .map(|&p| p * p.ln())
        .sum();
    let cross = trace_product(rho.as_hermitian(), &log_on_support(&s_sigma, tol_sigma));
    Ok(DivergenceValue::finite(kind, neg_entropy - cross))
}

/// `tr ρ ln(ρ^{1/2} σ⁻¹ ρ^{1/2})` with the logarithm taken on the support of
/// its argument. `σ` must be full rank.
pub fn bs_relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DivergenceValue> {
    check_same_dim(rho, sigma)?;
    let s_sigma = sigma.eigh();
    let tol_sigma = s_sigma.default_support_tol();
    if s_sigma.min() <= tol_sigma {
        return Err(Error::SingularSigma {
            min_eigenvalue: s_sigma.min(),
        });
    }
    let sigma_inv = s_sigma.map_values(|v| 1.0 / v);
    let s_rho = rho.eigh();
    let tol_rho = s_rho.default_support_tol();
    let rho_half = s_rho.map_values(|v| if v > tol_rho { v.sqrt() } else { 0.0 });
    let x = HermitianMatrix::hermitize(&(&rho_half * sigma_inv * &rho_half));
    let s_x = eigh(&x);
    let log_x = log_on_support(&s_x, s_x.default_support_tol());
    Ok(DivergenceValue::finite(
        DivergenceKind::BelavkinStaszewski,
        trace_product(rho.as_hermitian(), &log_x),
    ))
}

/// Quantum divergence of the given kind.
pub fn quantum_divergence(
    kind: DivergenceKind,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<DivergenceValue> {
    match kind {
        DivergenceKind::QuantumRelative => quantum_relative_entropy(rho, sigma),
        DivergenceKind::BelavkinStaszewski => bs_relative_entropy(rho, sigma),
        DivergenceKind::Classical => Err(Error::InvalidArgument(
            "classical divergence needs probability vectors".into(),
        )),
    }
}

/// Both sides of `D^C(p‖q) ≤ D^Q(ρ‖σ) − Σ_i p_i D^Q(ρ_i‖σ_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceTradeoff {
    pub kind: DivergenceKind,
    pub lhs: Extended,
    pub before: Extended,
    /// `D^Q(ρ_i‖σ_i)` per outcome; `None` where `p_i` is null.
    pub outcome_terms: Vec<Option<Extended>>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    /// `None` when any term is infinite.
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
}

impl DivergenceTradeoff {
    pub fn infinite_terms(&self) -> bool {
        self.rhs.is_none()
    }

    /// `slack ≥ −tol`; vacuously true with infinite terms.
    pub fn holds(&self, tol: f64) -> bool {
        self.slack.is_none_or(|s| s >= -tol)
    }
}

pub fn divergence_tradeoff(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    meas: &Measurement,
    kind: DivergenceKind,
) -> Result<DivergenceTradeoff> {
    if kind == DivergenceKind::Classical {
        return Err(Error::InvalidArgument(
            "tradeoff needs a quantum divergence kind".into(),
        ));
    }
    check_same_dim(rho, sigma)?;
    let er = meas.apply(rho)?;
    let es = meas.apply(sigma)?;
    let p = er.probabilities();
    let q = es.probabilities();
    let lhs = classical_relative_entropy(&p, &q)?.value;
    let before = quantum_divergence(kind, rho, sigma)?.value;

    let mut outcome_terms = Vec::with_capacity(p.len());
    let mut weighted = Some(0.0);
    for (o_rho, o_sigma) in er.outcomes.iter().zip(&es.outcomes) {
        let Some(rho_i) = &o_rho.state else {
            outcome_terms.push(None);
            continue;
        };
        let term = match &o_sigma.state {
            Some(sigma_i) => quantum_divergence(kind, rho_i, sigma_i)?.value,
            None => Extended::PosInfinity,
        };
        weighted = match (weighted, term) {
            (Some(acc), Extended::Finite(v)) => Some(acc + o_rho.probability * v),
            _ => None,
        };
        outcome_terms.push(Some(term));
    }

    let (rhs, slack) = match (lhs, before, weighted) {
        (Extended::Finite(l), Extended::Finite(b), Some(w)) => (Some(b - w), Some(b - w - l)),
        _ => (None, None),
    };
    Ok(DivergenceTradeoff {
        kind,
        lhs,
        before,
        outcome_terms,
        p,
        q,
        rhs,
        slack,
    })
}

/// `2 D(ρ_θ ‖ ρ_{θ+δv}) / δ²` estimate of the metric induced by a divergence.
///
/// Diagonal entries use `v = e_a`; off-diagonal entries follow from
/// polarization with `v = e_a + e_b`.
pub fn local_expansion_metric(
    model: &dyn StatisticalModel,
    theta: &[f64],
    kind: DivergenceKind,
    delta: f64,
) -> Result<DMatrix<f64>> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let m = model.param_dim();
    let state = |t: &[f64]| -> Result<DensityMatrix> {
        if t.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: t.len(),
            });
        }
        if !model.domain().contains(t) {
            return Err(Error::OutOfDomain { theta: t.to_vec() });
        }
        DensityMatrix::new(model.state_matrix(t)?)
            .map_err(|e| Error::DegenerateModel(e.to_string()))
    };
    let base = state(theta)?;
    let along = |v: &[f64]| -> Result<f64> {
        let shifted: Vec<f64> = theta.iter().zip(v).map(|(t, vi)| t + delta * vi).collect();
        let d = quantum_divergence(kind, &base, &state(&shifted)?)?;
        let value = d.as_f64().ok_or_else(|| {
            Error::DegenerateModel("divergence between neighbouring states is infinite".into())
        })?;
        Ok(2.0 * value / (delta * delta))
    };
    let unit = |a: usize| -> Vec<f64> { (0..m).map(|k| if k == a { 1.0 } else { 0.0 }).collect() };

    let mut j = DMatrix::zeros(m, m);
    for a in 0..m {
        j[(a, a)] = along(&unit(a))?;
    }
    for a in 0..m {
        for b in (a + 1)..m {
            let v: Vec<f64> = (0..m)
                .map(|k| if k == a || k == b { 1.0 } else { 0.0 })
                .collect();
            let off = (along(&v)? - j[(a, a)] - j[(b, b)]) / 2.0;
            j[(a, b)] = off;
            j[(b, a)] = off;
        }
    }
    Ok(j)
}

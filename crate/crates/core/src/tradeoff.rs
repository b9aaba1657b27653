//! Certifiers for the information–disturbance relations.
//!
//! Every check works at a single parameter point and returns the numbers it
//! compared, so callers can report residuals rather than bare verdicts.

use crate::error::{Error, Result};
use crate::fisher::{
    disturbance_from, measurement_classical_fisher, quantum_fisher, FisherMatrix, MonotoneMetric,
};
use crate::linalg::{max_abs, ComplexMatrix, HermitianMatrix};
use crate::measurement::{KrausChannel, Measurement, COND_TOL};
use crate::models::{evaluate, ModelPoint, StatisticalModel};

pub use crate::measurement::random_channel;

/// Minimum-eigenvalue tolerance for Loewner verdicts.
pub const PSD_TOL: f64 = 1e-8;
/// Separating-property residual bound.
pub const SEPARATING_TOL: f64 = 1e-7;
/// RLD equality residual bound.
pub const RLD_EQUALITY_TOL: f64 = 1e-7;
/// Equality of classical Fisher information under purification.
pub const JC_EQUALITY_TOL: f64 = 1e-9;

/// `ΔJ − J^C` and its Loewner verdict at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffReport {
    pub theta: Vec<f64>,
    pub metric_name: String,
    pub j_classical: FisherMatrix,
    pub delta: ComplexMatrix,
    pub gap: ComplexMatrix,
    pub psd_verdict: bool,
    pub min_gap_eigenvalue: f64,
}

pub fn check_tradeoff_at(
    point: &ModelPoint,
    meas: &Measurement,
    metric: &MonotoneMetric,
) -> Result<TradeoffReport> {
    let post = meas.propagate(point)?;
    let j_classical = measurement_classical_fisher(&post)?;
    let dist = disturbance_from(point, &post, metric)?;
    let gap = &dist.delta - &j_classical.matrix;
    let min_gap_eigenvalue = HermitianMatrix::hermitize(&gap).min_eigenvalue();
    Ok(TradeoffReport {
        theta: point.theta.clone(),
        metric_name: metric.name().to_string(),
        j_classical,
        delta: dist.delta,
        gap,
        psd_verdict: min_gap_eigenvalue >= -PSD_TOL,
        min_gap_eigenvalue,
    })
}

/// `J^C ⪯ ΔJ^Q` at `theta`.
pub fn check_tradeoff(
    model: &dyn StatisticalModel,
    meas: &Measurement,
    theta: &[f64],
    metric: &MonotoneMetric,
) -> Result<TradeoffReport> {
    check_tradeoff_at(&evaluate(model, theta)?, meas, metric)
}

/// Both sides of the separating identity.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparatingReport {
    /// `J^Q` of the measurement-channel family, from the block-diagonal state.
    pub channel_fisher: FisherMatrix,
    /// `J^C + Σ_i p_i J'_i`.
    pub decomposed: ComplexMatrix,
    pub residual: f64,
}

pub fn check_separating_at(
    point: &ModelPoint,
    meas: &Measurement,
    metric: &MonotoneMetric,
) -> Result<SeparatingReport> {
    let channel_fisher = quantum_fisher(&meas.channel_point(point)?, metric)?;
    let post = meas.propagate(point)?;
    let j_classical = measurement_classical_fisher(&post)?;
    let dist = disturbance_from(point, &post, metric)?;
    let decomposed = j_classical.matrix + dist.average_after();
    let residual = max_abs(&(&channel_fisher.matrix - &decomposed));
    Ok(SeparatingReport {
        channel_fisher,
        decomposed,
        residual,
    })
}

/// `J^Q(E^meas(ρ_θ)) = J^C + Σ_i p_i J'_i`, compared through an explicit
/// direct-sum state.
pub fn check_separating(
    model: &dyn StatisticalModel,
    meas: &Measurement,
    theta: &[f64],
    metric: &MonotoneMetric,
) -> Result<SeparatingReport> {
    check_separating_at(&evaluate(model, theta)?, meas, metric)
}

/// `J^Q(ρ_θ) − J^Q(E(ρ_θ))` at a model point.
pub fn monotonicity_gap_at(
    point: &ModelPoint,
    channel: &KrausChannel,
    metric: &MonotoneMetric,
) -> Result<HermitianMatrix> {
    let before = quantum_fisher(point, metric)?;
    let after = quantum_fisher(&channel.apply_point(point)?, metric)?;
    Ok(HermitianMatrix::hermitize(&(before.matrix - after.matrix)))
}

/// Minimum eigenvalue of `J^Q(ρ_θ) − J^Q(E(ρ_θ))`.
pub fn check_monotonicity(
    model: &dyn StatisticalModel,
    channel: &KrausChannel,
    theta: &[f64],
    metric: &MonotoneMetric,
) -> Result<f64> {
    let gap = monotonicity_gap_at(&evaluate(model, theta)?, channel, metric)?;
    Ok(gap.min_eigenvalue())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RldEqualityReport {
    /// `‖ΔJ^RLD − J^C‖_max`.
    pub residual: f64,
    /// `‖J^RLD(ρ_θ) − J^RLD(E^meas(ρ_θ))‖_max`.
    pub intermediate_residual: f64,
    pub j_classical: FisherMatrix,
    pub delta: ComplexMatrix,
}

impl RldEqualityReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.residual <= tol && self.intermediate_residual <= tol
    }
}

/// RLD equality residuals without the purity/reversibility precondition.
/// Used to report, not assert, on measurements outside the sufficient class.
pub fn rld_equality_residuals_at(
    point: &ModelPoint,
    meas: &Measurement,
) -> Result<RldEqualityReport> {
    let rld = MonotoneMetric::rld();
    let post = meas.propagate(point)?;
    let j_classical = measurement_classical_fisher(&post)?;
    let dist = disturbance_from(point, &post, &rld)?;
    let residual = max_abs(&(&dist.delta - &j_classical.matrix));
    let after = quantum_fisher(&meas.channel_point(point)?, &rld)?;
    let intermediate_residual = max_abs(&(&dist.j_quantum_before.matrix - &after.matrix));
    Ok(RldEqualityReport {
        residual,
        intermediate_residual,
        j_classical,
        delta: dist.delta,
    })
}

pub fn check_rld_equality_at(point: &ModelPoint, meas: &Measurement) -> Result<RldEqualityReport> {
    if !meas.is_pure() {
        return Err(Error::NotPure);
    }
    let s = meas.min_singular_value()?;
    if s <= COND_TOL {
        return Err(Error::NotReversible {
            min_singular_value: s,
        });
    }
    rld_equality_residuals_at(point, meas)
}

/// `ΔJ^RLD = J^C` for a pure reversible measurement.
pub fn check_rld_equality(
    model: &dyn StatisticalModel,
    meas: &Measurement,
    theta: &[f64],
) -> Result<RldEqualityReport> {
    check_rld_equality_at(&evaluate(model, theta)?, meas)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub purified: Measurement,
    /// `‖J^C(impure) − J^C(pure)‖_max`.
    pub jc_residual: f64,
    /// Minimum eigenvalue of `ΔJ(impure) − ΔJ(pure)`.
    pub min_dominance_eigenvalue: f64,
}

impl DominanceReport {
    pub fn holds(&self, jc_tol: f64, psd_tol: f64) -> bool {
        self.jc_residual <= jc_tol && self.min_dominance_eigenvalue >= -psd_tol
    }
}

pub fn check_pure_dominance_at(
    meas_impure: &Measurement,
    point: &ModelPoint,
    metric: &MonotoneMetric,
) -> Result<DominanceReport> {
    if meas_impure.is_pure() {
        return Err(Error::InvalidArgument(
            "dominance check needs a measurement with several Kraus operators for some outcome"
                .into(),
        ));
    }
    let purified = meas_impure.povm().purify();
    let post_impure = meas_impure.propagate(point)?;
    let post_pure = purified.propagate(point)?;
    let jc_impure = measurement_classical_fisher(&post_impure)?;
    let jc_pure = measurement_classical_fisher(&post_pure)?;
    let d_impure = disturbance_from(point, &post_impure, metric)?;
    let d_pure = disturbance_from(point, &post_pure, metric)?;
    let diff = HermitianMatrix::hermitize(&(d_impure.delta - d_pure.delta));
    Ok(DominanceReport {
        purified,
        jc_residual: max_abs(&(jc_impure.matrix - jc_pure.matrix)),
        min_dominance_eigenvalue: diff.min_eigenvalue(),
    })
}

/// The purification `K_i = E_i^{1/2}` of an impure measurement extracts the
/// same classical information with no more disturbance.
pub fn check_pure_dominance(
    meas_impure: &Measurement,
    model: &dyn StatisticalModel,
    theta: &[f64],
    metric: &MonotoneMetric,
) -> Result<DominanceReport> {
    check_pure_dominance_at(meas_impure, &evaluate(model, theta)?, metric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::random_measurement;
    use crate::models::{bloch_rotation_model, classical_binary_model, random_model};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn identity_measurement_is_trivial() {
        let model = bloch_rotation_model(0.5).unwrap();
        for metric in MonotoneMetric::presets() {
            let r = check_tradeoff(&model, &Measurement::identity(2), &[0.4], &metric).unwrap();
            assert_eq!(r.j_classical.scalar(), 0.0);
            assert!(max_abs(&r.gap) < 1e-14);
            assert!(r.psd_verdict);
            let s = check_separating(&model, &Measurement::identity(2), &[0.4], &metric).unwrap();
            assert!(s.residual < 1e-14);
        }
        let r = check_rld_equality(&model, &Measurement::identity(2), &[0.4]).unwrap();
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn projective_measurement_saturates_on_classical_family() {
        let model = classical_binary_model();
        for metric in MonotoneMetric::presets() {
            let r =
                check_tradeoff(&model, &Measurement::projective(2), &[PI / 2.0], &metric).unwrap();
            assert!((r.j_classical.scalar() - 1.0).abs() < 1e-12);
            assert!(max_abs(&r.gap) < 1e-12);
        }
    }

    #[test]
    fn royer_rld_equality() {
        let model = bloch_rotation_model(0.5).unwrap();
        let meas = Measurement::royer(PI / 2.0, PI / 2.0);
        for &t in &[0.1, 0.9, 2.3] {
            let r = check_rld_equality(&model, &meas, &[t]).unwrap();
            assert!(r.holds(RLD_EQUALITY_TOL), "{r:?}");
            let s = check_separating(&model, &meas, &[t], &MonotoneMetric::bkm()).unwrap();
            assert!(s.residual <= SEPARATING_TOL);
        }
    }

    #[test]
    fn rld_preconditions() {
        let model = bloch_rotation_model(0.5).unwrap();
        assert_eq!(
            check_rld_equality(&model, &random_measurement(2, 2, 2, 1).unwrap(), &[0.3]),
            Err(Error::NotPure)
        );
        assert!(matches!(
            check_rld_equality(&model, &Measurement::royer(PI / 2.0, PI), &[0.3]),
            Err(Error::NotReversible { .. })
        ));
    }

    #[test]
    fn monotonicity_special_channels() {
        let model = random_model(2, 1, 3).unwrap();
        let unitary = random_channel(2, 1, 9).unwrap();
        let depol = KrausChannel::completely_depolarizing(2);
        let point = evaluate(&model, &[0.2]).unwrap();
        for metric in MonotoneMetric::presets() {
            let gap = monotonicity_gap_at(&point, &unitary, &metric).unwrap();
            assert!(max_abs(gap.as_matrix()) < 1e-9);
            let gap = check_monotonicity(&model, &depol, &[0.2], &metric).unwrap();
            let j = quantum_fisher(&point, &metric).unwrap();
            assert!((gap - j.min_eigenvalue()).abs() < 1e-12);
            assert!(gap >= 0.0);
        }
    }

    #[test]
    fn uniform_impure_measurement_dephases_nothing_here() {
        let s = FRAC_1_SQRT_2;
        let impure = Measurement::new(vec![vec![
            ComplexMatrix::identity(2, 2).scale(s),
            ComplexMatrix::identity(2, 2).scale(s),
        ]])
        .unwrap();
        let model = bloch_rotation_model(0.5).unwrap();
        let r = check_pure_dominance(&impure, &model, &[0.7], &MonotoneMetric::sld()).unwrap();
        assert!(r.jc_residual < 1e-15);
        assert!(r.min_dominance_eigenvalue >= -1e-12);
        assert!(r.purified.is_pure());
        assert!(check_pure_dominance(
            &Measurement::identity(2),
            &model,
            &[0.7],
            &MonotoneMetric::sld()
        )
        .is_err());
    }

    #[test]
    fn impure_rotation_mixture_is_strictly_worse() {
        // outcome kept, but a random unitary kick is applied half the time
        let u = random_channel(2, 1, 21).unwrap().operators()[0].clone();
        let s = FRAC_1_SQRT_2;
        let impure = Measurement::new(vec![vec![
            ComplexMatrix::identity(2, 2).scale(s),
            u.scale(s),
        ]])
        .unwrap();
        let model = bloch_rotation_model(0.5).unwrap();
        let r = check_pure_dominance(&impure, &model, &[0.7], &MonotoneMetric::sld()).unwrap();
        assert!(r.min_dominance_eigenvalue > 1e-6);
    }

    #[test]
    fn refining_an_outcome_changes_nothing() {
        let model = random_model(2, 1, 14).unwrap();
        let meas = random_measurement(2, 2, 1, 14).unwrap();
        let split = Measurement::new(vec![
            vec![meas.outcomes()[0][0].scale(FRAC_1_SQRT_2)],
            vec![meas.outcomes()[0][0].scale(FRAC_1_SQRT_2)],
            vec![meas.outcomes()[1][0].clone()],
        ])
        .unwrap();
        let point = evaluate(&model, &[0.5]).unwrap();
        for metric in MonotoneMetric::presets() {
            let a = check_separating_at(&point, &meas, &metric).unwrap();
            let b = check_separating_at(&point, &split, &metric).unwrap();
            assert!(max_abs(&(&a.channel_fisher.matrix - &b.channel_fisher.matrix)) < 1e-9);
            let ta = check_tradeoff_at(&point, &meas, &metric).unwrap();
            let tb = check_tradeoff_at(&point, &split, &metric).unwrap();
            assert_eq!(ta.psd_verdict, tb.psd_verdict);
        }
    }
}

//! Seeded randomized campaigns over the certifiers.
//!
//! Each trial draws its randomness from `trial_seed(campaign_seed, index)`, so
//! any failing trial can be replayed alone. Trials run in parallel; summaries
//! are aggregated in index order.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divergence::{
    divergence_tradeoff, local_expansion_metric, quantum_divergence, DivergenceKind,
    EXPANSION_DELTA,
};
use crate::error::Result;
use crate::fisher::{classical_fisher, quantum_fisher, MonotoneMetric};
use crate::linalg::{max_abs, HermitianMatrix};
use crate::measurement::{random_channel, random_measurement, Measurement};
use crate::models::{
    bloch_rotation_model, classical_binary_model, evaluate, evaluate_finite_difference,
    random_model, StatisticalModel, UnitaryOrbitModel, FD_STEP,
};
use crate::random::{random_density_matrix, rng, trial_seed};
use crate::tradeoff::{
    check_pure_dominance_at, check_rld_equality_at, check_separating_at, check_tradeoff_at,
    monotonicity_gap_at,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub psd: f64,
    pub separating: f64,
    pub rld_equality: f64,
    pub unitary_invariance: f64,
    pub metric_ordering: f64,
    pub jc_equality: f64,
    pub divergence: f64,
    pub expansion_relative: f64,
    pub sld_oracle: f64,
    pub derivative_agreement: f64,
    pub classical_fisher: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            psd: 1e-8,
            separating: 1e-7,
            rld_equality: 1e-7,
            unitary_invariance: 1e-9,
            metric_ordering: 1e-9,
            jc_equality: 1e-9,
            divergence: 1e-8,
            expansion_relative: 1e-2,
            sld_oracle: 1e-8,
            derivative_agreement: 1e-6,
            classical_fisher: 1e-10,
        }
    }
}

/// Outcome of one trial. `residual` is the quantity compared against the
/// campaign tolerance, oriented so that larger is worse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trial {
    pub residual: f64,
    pub pass: bool,
}

impl Trial {
    pub fn at_most(residual: f64, tol: f64) -> Self {
        Self {
            residual,
            pass: residual <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignSummary {
    pub name: String,
    pub n_trials: usize,
    pub n_pass: usize,
    /// Trials that raised an error instead of producing a residual.
    pub n_errors: usize,
    pub worst_residual: f64,
    pub failing_seeds: Vec<u64>,
}

impl CampaignSummary {
    pub fn passed(&self) -> bool {
        self.n_pass == self.n_trials
    }
}

/// Run `n_trials` independent trials; `trial` receives `(index, seed)`.
pub fn run_campaign<F>(name: &str, campaign_seed: u64, n_trials: usize, trial: F) -> CampaignSummary
where
    F: Fn(usize, u64) -> Result<Trial> + Sync,
{
    let results: Vec<(u64, Result<Trial>)> = (0..n_trials)
        .into_par_iter()
        .map(|k| {
            let seed = trial_seed(campaign_seed, k as u64);
            (seed, trial(k, seed))
        })
        .collect();
    let mut summary = CampaignSummary {
        name: name.to_string(),
        n_trials,
        n_pass: 0,
        n_errors: 0,
        worst_residual: 0.0,
        failing_seeds: Vec::new(),
    };
    for (seed, r) in results {
        match r {
            Ok(t) => {
                if t.residual.is_finite() {
                    summary.worst_residual = summary.worst_residual.max(t.residual);
                }
                if t.pass {
                    summary.n_pass += 1;
                } else {
                    summary.failing_seeds.push(seed);
                }
            }
            Err(_) => {
                summary.n_errors += 1;
                summary.failing_seeds.push(seed);
            }
        }
    }
    summary
}

/// Trial counts and switches for the full suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub qubit_instances: usize,
    pub qutrit_instances: usize,
    pub monotonicity_trials: usize,
    pub ordering_trials: usize,
    pub dominance_trials: usize,
    pub divergence_trials: usize,
    pub derivative_trials: usize,
    pub tolerances: Tolerances,
    /// Harness self-test: certify `ΔJ − J^C ⪯ 0` instead of `⪰ 0`.
    pub negate_tradeoff: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            qubit_instances: 200,
            qutrit_instances: 50,
            monotonicity_trials: 100,
            ordering_trials: 100,
            dominance_trials: 100,
            divergence_trials: 100,
            derivative_trials: 20,
            tolerances: Tolerances::default(),
            negate_tradeoff: false,
        }
    }
}

impl SuiteConfig {
    /// Set every randomized trial count to `n`. Fixed grids are unaffected.
    pub fn with_trials(mut self, n: usize) -> Self {
        self.qubit_instances = n;
        self.qutrit_instances = n;
        self.monotonicity_trials = n;
        self.ordering_trials = n;
        self.dominance_trials = n;
        self.divergence_trials = n;
        self.derivative_trials = n;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub campaigns: Vec<CampaignSummary>,
    pub all_pass: bool,
}

/// Sub-seed for campaign `index`, so campaigns do not share instances unless
/// they are meant to.
fn campaign_seed(seed: u64, index: u64) -> u64 {
    trial_seed(seed ^ 0xC3A5_C85C_97CB_3127, index)
}

fn uniform_theta<R: Rng + ?Sized>(rng: &mut R, m: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..m).map(|_| rng.random_range(lo..hi)).collect()
}

/// Random (model, measurement, θ) used by the inequality and separating
/// campaigns.
pub fn tradeoff_instance(
    dim: usize,
    seed: u64,
) -> Result<(UnitaryOrbitModel, Measurement, Vec<f64>)> {
    let mut r = rng(seed);
    let m = r.random_range(1..=2);
    let n_outcomes = r.random_range(2..=3);
    let ops = r.random_range(1..=2);
    let model = random_model(dim, m, r.random())?;
    let meas = random_measurement(dim, n_outcomes, ops, r.random())?;
    let theta = uniform_theta(&mut r, m, -PI, PI);
    Ok((model, meas, theta))
}

fn instance_dim(cfg: &SuiteConfig, k: usize) -> usize {
    if k < cfg.qubit_instances {
        2
    } else {
        3
    }
}

pub fn tradeoff_campaign(cfg: &SuiteConfig) -> CampaignSummary {
    let tol = cfg.tolerances.psd;
    let n = cfg.qubit_instances + cfg.qutrit_instances;
    run_campaign(
        "tradeoff_inequality",
        campaign_seed(cfg.seed, 1),
        n,
        |k, seed| {
            let (model, meas, theta) = tradeoff_instance(instance_dim(cfg, k), seed)?;
            let point = evaluate(&model, &theta)?;
            let mut worst = f64::NEG_INFINITY;
            for metric in MonotoneMetric::presets() {
                let report = check_tradeoff_at(&point, &meas, &metric)?;
                let violation = if cfg.negate_tradeoff {
                    // largest eigenvalue of the gap: violation of gap ⪯ 0
                    -HermitianMatrix::hermitize(&-report.gap).min_eigenvalue()
                } else {
                    -report.min_gap_eigenvalue
                };
                worst = worst.max(violation);
            }
            Ok(Trial::at_most(worst, tol))
        },
    )
}

pub fn separating_campaign(cfg: &SuiteConfig) -> CampaignSummary {
    let tol = cfg.tolerances.separating;
    let n = cfg.qubit_instances + cfg.qutrit_instances;
    // same seeds as the inequality campaign, hence the same instances
    run_campaign(
        "separating_property",
        campaign_seed(cfg.seed, 1),
        n,
        |k, seed| {
            let (model, meas, theta) = tradeoff_instance(instance_dim(cfg, k), seed)?;
            let point = evaluate(&model, &theta)?;
            let mut worst: f64 = 0.0;
            for metric in MonotoneMetric::presets() {
                worst = worst.max(check_separating_at(&point, &meas, &metric)?.residual);
            }
            Ok(Trial::at_most(worst, tol))
        },
    )
}

pub const ROYER_THETA_GRID: [f64; 5] = [0.8, 1.15, 1.5, 1.85, 2.2];
pub const ROYER_SIGMA_GRID: [f64; 5] = [0.2, 0.45, 0.7, 0.95, 1.2];
pub const RLD_RADII: [f64; 3] = [0.3, 0.5, 0.8];

/// `θ_m/2 ± σ_m/4` hits a multiple of π/2, where a Royer operator is singular.
pub fn royer_excluded(theta_m: f64, sigma_m: f64) -> bool {
    let near = |x: f64| {
        let q = x / (PI / 2.0);
        (q - q.round()).abs() < 1e-9
    };
    near(theta_m / 2.0 + sigma_m / 4.0) || near(theta_m / 2.0 - sigma_m / 4.0)
}

pub fn rld_equality_campaign(cfg: &SuiteConfig) -> CampaignSummary {
    let tol = cfg.tolerances.rld_equality;
    let per_radius = ROYER_THETA_GRID.len() * ROYER_SIGMA_GRID.len();
    let n = RLD_RADII.len() * per_radius;
    run_campaign("rld_equality", campaign_seed(cfg.seed, 3), n, |k, seed| {
        let r = RLD_RADII[k / per_radius];
        let g = k % per_radius;
        let theta_m = ROYER_THETA_GRID[g / ROYER_SIGMA_GRID.len()];
        let sigma_m = ROYER_SIGMA_GRID[g % ROYER_SIGMA_GRID.len()];
        let model = bloch_rotation_model(r)?;
        let theta = uniform_theta(&mut rng(seed), 1, -PI, PI);
        let report = check_rld_equality_at(
            &evaluate(&model, &theta)?,
            &Measurement::royer(theta_m, sigma_m),
        )?;
        Ok(Trial::at_most(
            report.residual.max(report.intermediate_residual),
            tol,
        ))
    })
}

/// The Royer grid again, on random qubit models where `J^C ≠ 0`. On the Bloch
/// rotation family the diagonal Royer operators extract no information, so
/// both sides of the equality vanish there.
pub fn rld_equality_random_campaign(cfg: &SuiteConfig) -> CampaignSummary {
    let tol = cfg.tolerances.rld_equality;
    let n = ROYER_THETA_GRID.len() * ROYER_SIGMA_GRID.len();
    run_campaign(
        "rld_equality_random_models",
        campaign_seed(cfg.seed, 14),
        n,
        |k, seed| {
            let theta_m = ROYER_THETA_GRID[k / ROYER_SIGMA_GRID.len()];
            let sigma_m = ROYER_SIGMA_GRID[k % ROYER_SIGMA_GRID.len()];
            let point = random_qubit_point(seed)?;
            let report = check_rld_equality_at(&point, &Measurement::royer(theta_m, sigma_m))?;
            Ok(Trial::at_most(
                report.residual.max(report.intermediate_residual),
                tol,
            ))
        },
    )
}

fn random_qubit_point(seed: u64) -> Result<crate::models::ModelPoint> {
    let mut r = rng(seed);
    let m = r.random_range(1..=2);
    let model = random_model(2, m, r.random())?;
    let theta = uniform_theta(&mut r, m, -PI, PI);
    evaluate(&model, &theta)
}

pub fn monotonicity_campaign(cfg: &SuiteConfig) -> CampaignSummary {
    let tol = cfg.tolerances.psd;
    run_campaign(
        "monotonicity",
        campaign_seed(cfg.seed, 4),
        cfg.monotonicity_trials,
        |_, seed| {
            let point = random_qubit_point(seed)?;
            let mut r = rng(seed ^ 1);
            let channel = random_channel(2, r.random_range(2..=4), r.random())?;
            let mut worst = f64::NEG_INFINITY;
            for metric in MonotoneMetric::presets() {
                worst =
                    worst.max(-monotonicity_gap_at(&point, &channel, &metric)?.min_eigenvalue());
            }
            Ok(Trial::at_most(worst, tol))
        },
    )
}

pub fn unitary_invariance_campaign(cfg: &SuiteConfig) -> CampaignSummary {
    let tol = cfg.tolerances.unitary_invariance;
    run_campaign(
        "unitary_invariance",
        campaign_seed(cfg.seed, 5),
        cfg.monotonicity_trials,
        |_, seed| {
            let point = random_qubit_point(seed)?;
            let channel = random_channel(2, 1, seed ^ 1)?;
            let mut worst: f64 = 0.0;
            for metric in MonotoneMetric::presets() {
                worst = worst.max(max_abs(
                    monotonicity_gap_at(&point, &channel, &metric)?.as_matrix(),
                ));
            }
            Ok(Trial::at_most(worst, tol))
        },
    )
}

pub fn metric_ordering_campaign(cfg: &SuiteConfig) -> CampaignSummary {
    let tol = cfg.tolerances.metric_ordering;
    run_campaign(
        "metric_ordering",
        campaign_seed(cfg.seed, 6),
        cfg.ordering_trials,
        |_, seed| {
            let mut r = rng(seed);
            let dim = r.random_range(2..=3);
            let m = r.random_range(1..=2);
            let model = random_model(dim, m, r.random())?;
            let point = evaluate(&model, &uniform_theta(&mut r, m, -PI, PI))?;
            let sld = quantum_fisher(&point, &MonotoneMetric::sld())?.as_hermitian();
            let bkm = quantum_fisher(&point, &MonotoneMetric::bkm())?.as_hermitian();
            let real_rld = quantum_fisher(&point, &MonotoneMetric::real_rld())?.as_hermitian();
            let lower = -(&bkm - &sld).min_eigenvalue();
            let upper = -(&real_rld - &bkm).min_eigenvalue();
            Ok(Trial::at_most(lower.max(upper), tol))
        },
    )
}

pub const COMMUTING_GRID_POINTS: usize = 25;

pub fn commuting_coincidence_campaign(cfg: &SuiteConfig) -> CampaignSummary {
    let tol = cfg.tolerances.metric_ordering;
    let model = classical_binary_model();
    let grid = model.domain().interior_grid(COMMUTING_GRID_POINTS);
    run_campaign(
        "commuting_coincidence",
        campaign_seed(cfg.seed, 7),
        grid.len(),
        |k, _| {
            let point = evaluate(&model, &grid[k])?;
            let values = MonotoneMetric::presets()
                .iter()
                .map(|metric| quantum_fisher(&point, metric))
                .collect::<Result<Vec<_>>>()?;
            let mut worst: f64 = 0.0;
            for a in &values {
                for b in &values {
                    worst = worst.max(max_abs(&(&a.matrix - &b.matrix)));
                }
            }
            Ok(Trial::at_most(worst, tol))
        },
    )
}

pub fn pure_dominance_campaign(cfg: &SuiteConfig) -> CampaignSummary {
    let tol = cfg.tolerances;
    run_campaign(
        "pure_dominance",
        campaign_seed(cfg.seed, 8),
        cfg.dominance_trials,
        |_, seed| {
            let point = random_qubit_point(seed)?;
            let meas = random_measurement(2, 2, 2, seed ^ 1)?;
            let report = check_pure_dominance_at(&meas, &point, &MonotoneMetric::sld())?;
            Ok(Trial {
                residual: report.jc_residual.max(-report.min_dominance_eigenvalue),
                pass: report.holds(tol.jc_equality, tol.psd),
            })
        },
    )
}

pub fn divergence_campaign(cfg: &SuiteConfig) -> CampaignSummary {
    let tol = cfg.tolerances.divergence;
    run_campaign(
        "divergence_tradeoff",
        campaign_seed(cfg.seed, 9),
        cfg.divergence_trials,
        |_, seed| {
            let mut r = rng(seed);
            let rho = random_density_matrix(&mut r, 2);
            let sigma = random_density_matrix(&mut r, 2);
            let royer = Measurement::royer(
                r.random_range(0.05..PI - 0.05),
                r.random_range(0.05..PI - 0.05),
            );
            let generic =
                random_measurement(2, r.random_range(2..=3), r.random_range(1..=2), r.random())?;
            let mut worst = f64::NEG_INFINITY;
            for meas in [&royer, &generic] {
                for kind in [
                    DivergenceKind::QuantumRelative,
                    DivergenceKind::BelavkinStaszewski,
                ] {
                    let t = divergence_tradeoff(&rho, &sigma, meas, kind)?;
                    // an infinite term would make the check vacuous; full-rank pairs must not produce one
                    let slack = t.slack.unwrap_or(f64::NEG_INFINITY);
                    worst = worst.max(-slack);
                }
            }
            let sq = quantum_divergence(DivergenceKind::QuantumRelative, &rho, &sigma)?.as_f64();
            let sbs =
                quantum_divergence(DivergenceKind::BelavkinStaszewski, &rho, &sigma)?.as_f64();
            match (sq, sbs) {
                (Some(sq), Some(sbs)) => worst = worst.max(sq - sbs),
                _ => worst = f64::INFINITY,
            }
            Ok(Trial::at_most(worst, tol))
        },
    )
}

pub const EXPANSION_BLOCH_THETAS: [f64; 4] = [-2.0, 0.3, 1.1, 2.5];
pub const EXPANSION_CLASSICAL_THETAS: [f64; 4] = [0.4, 1.0, PI / 2.0, 2.2];

fn expansion_error(
    model: &dyn StatisticalModel,
    theta: &[f64],
    exact_classical: bool,
) -> Result<f64> {
    let point = evaluate(model, theta)?;
    let mut worst: f64 = 0.0;
    for (kind, metric) in [
        (DivergenceKind::QuantumRelative, MonotoneMetric::bkm()),
        (
            DivergenceKind::BelavkinStaszewski,
            MonotoneMetric::real_rld(),
        ),
    ] {
        let estimate = local_expansion_metric(model, theta, kind, EXPANSION_DELTA)?;
        let target = quantum_fisher(&point, &metric)?;
        for a in 0..estimate.nrows() {
            for b in 0..estimate.ncols() {
                let t = if exact_classical {
                    1.0
                } else {
                    target.matrix[(a, b)].re
                };
                let scale = t.abs().max(f64::MIN_POSITIVE);
                worst = worst.max((estimate[(a, b)] - t).abs() / scale);
            }
        }
    }
    Ok(worst)
}

pub fn local_expansion_campaign(cfg: &SuiteConfig) -> CampaignSummary {
    let tol = cfg.tolerances.expansion_relative;
    let nb = EXPANSION_BLOCH_THETAS.len();
    let n = nb + EXPANSION_CLASSICAL_THETAS.len();
    run_campaign("local_expansion", campaign_seed(cfg.seed, 10), n, |k, _| {
        let err = if k < nb {
            expansion_error(
                &bloch_rotation_model(0.5)?,
                &[EXPANSION_BLOCH_THETAS[k]],
                false,
            )?
        } else {
            expansion_error(
                &classical_binary_model(),
                &[EXPANSION_CLASSICAL_THETAS[k - nb]],
                true,
            )?
        };
        Ok(Trial::at_most(err, tol))
    })
}

pub fn sld_oracle_campaign(cfg: &SuiteConfig) -> CampaignSummary {
    let tol = cfg.tolerances.sld_oracle;
    run_campaign(
        "sld_bloch_oracle",
        campaign_seed(cfg.seed, 11),
        9,
        |k, seed| {
            let r = (k + 1) as f64 / 10.0;
            let theta = uniform_theta(&mut rng(seed), 1, -PI, PI);
            let j = quantum_fisher(
                &evaluate(&bloch_rotation_model(r)?, &theta)?,
                &MonotoneMetric::sld(),
            )?;
            Ok(Trial::at_most((j.scalar() - r * r).abs(), tol))
        },
    )
}

pub fn derivative_agreement_campaign(cfg: &SuiteConfig) -> CampaignSummary {
    let tol = cfg.tolerances.derivative_agreement;
    run_campaign(
        "derivative_agreement",
        campaign_seed(cfg.seed, 12),
        cfg.derivative_trials,
        |k, seed| {
            let mut r = rng(seed);
            let margin = 10.0 * FD_STEP;
            let (model, theta): (Box<dyn StatisticalModel>, Vec<f64>) = if k % 3 == 0 {
                let model = bloch_rotation_model(r.random_range(0.1..0.9))?;
                let theta = uniform_theta(&mut r, 1, -PI, PI);
                (Box::new(model), theta)
            } else {
                let dim = r.random_range(2..=3);
                let m = r.random_range(1..=2);
                let model = random_model(dim, m, r.random())?;
                let theta = uniform_theta(&mut r, m, -PI + margin, PI - margin);
                (Box::new(model), theta)
            };
            let analytic = evaluate(model.as_ref(), &theta)?;
            let numeric = evaluate_finite_difference(model.as_ref(), &theta, FD_STEP)?;
            let worst = analytic
                .derivatives
                .iter()
                .zip(&numeric.derivatives)
                .map(|(a, b)| max_abs(&(a.as_matrix() - b.as_matrix())))
                .fold(0.0, f64::max);
            Ok(Trial::at_most(worst, tol))
        },
    )
}

pub const CLASSICAL_FISHER_GRID_POINTS: usize = 50;

pub fn classical_fisher_oracle_campaign(cfg: &SuiteConfig) -> CampaignSummary {
    let tol = cfg.tolerances.classical_fisher;
    let model = classical_binary_model();
    let domain = model.domain();
    let (lo, hi) = (domain.lower[0], domain.upper[0]);
    let n = CLASSICAL_FISHER_GRID_POINTS;
    run_campaign(
        "classical_fisher_oracle",
        campaign_seed(cfg.seed, 13),
        n,
        |k, _| {
            let theta = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            let point = evaluate(&model, &[theta])?;
            let probs: Vec<f64> = (0..2).map(|i| point.state.as_matrix()[(i, i)].re).collect();
            let dprobs = vec![(0..2)
                .map(|i| point.derivatives[0].as_matrix()[(i, i)].re)
                .collect()];
            let j = classical_fisher(&probs, &dprobs)?;
            Ok(Trial::at_most((j.scalar() - 1.0).abs(), tol))
        },
    )
}

/// Every campaign, in a fixed order.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let campaigns = vec![
        tradeoff_campaign(cfg),
        separating_campaign(cfg),
        rld_equality_campaign(cfg),
        rld_equality_random_campaign(cfg),
        monotonicity_campaign(cfg),
        unitary_invariance_campaign(cfg),
        metric_ordering_campaign(cfg),
        commuting_coincidence_campaign(cfg),
        pure_dominance_campaign(cfg),
        divergence_campaign(cfg),
        local_expansion_campaign(cfg),
        sld_oracle_campaign(cfg),
        derivative_agreement_campaign(cfg),
        classical_fisher_oracle_campaign(cfg),
    ];
    let all_pass = campaigns.iter().all(CampaignSummary::passed);
    SuiteReport {
        seed: cfg.seed,
        campaigns,
        all_pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn summary_bookkeeping() {
        let s = run_campaign("t", 5, 6, |k, _| match k {
            0 => Err(Error::NotPure),
            1 => Ok(Trial::at_most(2.0, 1.0)),
            _ => Ok(Trial::at_most(0.5, 1.0)),
        });
        assert_eq!(s.n_trials, 6);
        assert_eq!(s.n_pass, 4);
        assert_eq!(s.n_errors, 1);
        assert_eq!(s.worst_residual, 2.0);
        assert_eq!(s.failing_seeds, vec![trial_seed(5, 0), trial_seed(5, 1)]);
        assert!(!s.passed());
    }

    #[test]
    fn royer_grid_avoids_singular_points() {
        for &t in &ROYER_THETA_GRID {
            for &s in &ROYER_SIGMA_GRID {
                assert!(!royer_excluded(t, s));
            }
        }
        assert!(royer_excluded(PI / 2.0, PI));
    }

    #[test]
    fn smoke_suite_passes_and_is_deterministic() {
        let cfg = SuiteConfig::default().with_trials(2);
        let a = run_suite(&cfg);
        for c in &a.campaigns {
            assert!(c.passed(), "{c:?}");
        }
        assert_eq!(a, run_suite(&cfg));
    }

    #[test]
    fn negated_check_fails() {
        let cfg = SuiteConfig {
            negate_tradeoff: true,
            ..SuiteConfig::default().with_trials(2)
        };
        assert!(!tradeoff_campaign(&cfg).passed());
    }
}

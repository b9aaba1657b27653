//! Job configuration: JSON schema and resolution into core objects.

use std::collections::BTreeMap;

use infodist::campaign::Tolerances;
use infodist::divergence::DivergenceKind;
use infodist::linalg::{ComplexMatrix, C64};
use infodist::measurement::{random_measurement, Measurement};
use infodist::models::{
    bloch_rotation_model, classical_binary_model, random_model, SampledModel, StatisticalModel,
};
use infodist::MonotoneMetric;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// Matrix entry: `[re, im]`, or a bare real number.
#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

impl Entry {
    fn value(self) -> C64 {
        match self {
            Entry::Complex([re, im]) => C64::new(re, im),
            Entry::Real(re) => C64::new(re, 0.0),
        }
    }
}

pub type MatrixJson = Vec<Vec<Entry>>;

pub fn matrix_from_json(rows: &MatrixJson, what: &str) -> Result<ComplexMatrix, CliError> {
    let n = rows.len();
    if n == 0 {
        return Err(CliError::schema(format!("{what}: empty matrix")));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(CliError::schema(format!("{what}: ragged rows")));
    }
    Ok(ComplexMatrix::from_fn(n, cols, |i, j| rows[i][j].value()))
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sample {
    pub theta: Vec<f64>,
    pub rho: MatrixJson,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub builtin: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    pub samples: Option<Vec<Sample>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSpec {
    pub builtin: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    pub kraus: Option<Vec<Vec<MatrixJson>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ThetaSpec {
    Points(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    #[serde(default = "default_scan_parameter")]
    pub parameter: String,
    pub values: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub points: Option<usize>,
}

fn default_scan_parameter() -> String {
    "sigma_m".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionSpec {
    pub theta: Option<ThetaSpec>,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivergenceSpec {
    pub rho: Option<MatrixJson>,
    pub sigma: Option<MatrixJson>,
    pub kinds: Option<Vec<String>>,
    pub local_expansion: Option<ExpansionSpec>,
    pub random_pairs: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub model: Option<ModelSpec>,
    pub measurement: Option<MeasurementSpec>,
    pub theta: Option<ThetaSpec>,
    pub metrics: Option<Vec<String>>,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub scan: Option<ScanSpec>,
    pub divergence: Option<DivergenceSpec>,
}

impl JobConfig {
    pub fn parse(bytes: &[u8]) -> Result<Self, CliError> {
        let cfg: JobConfig =
            serde_json::from_slice(bytes).map_err(|e| CliError::schema(format!("config: {e}")))?;
        cfg.check_tolerances()?;
        Ok(cfg)
    }

    fn check_tolerances(&self) -> Result<(), CliError> {
        let t = serde_json::to_value(self.tolerances).expect("tolerances serialize");
        for (k, v) in t.as_object().expect("object") {
            match v.as_f64() {
                Some(x) if x >= 0.0 && x.is_finite() => {}
                _ => {
                    return Err(CliError::schema(format!(
                        "tolerances.{k} must be a finite non-negative number"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn metrics(&self) -> Result<Vec<MonotoneMetric>, CliError> {
        match &self.metrics {
            None => Ok(MonotoneMetric::presets()),
            Some(names) if names.is_empty() => Err(CliError::schema("metrics: empty list")),
            Some(names) => names
                .iter()
                .map(|n| MonotoneMetric::from_name(n).map_err(|e| CliError::schema(e.to_string())))
                .collect(),
        }
    }

    pub fn model_spec(&self) -> Result<&ModelSpec, CliError> {
        self.model
            .as_ref()
            .ok_or_else(|| CliError::schema("config needs a \"model\" section"))
    }

    pub fn measurement_spec(&self) -> Result<&MeasurementSpec, CliError> {
        self.measurement
            .as_ref()
            .ok_or_else(|| CliError::schema("config needs a \"measurement\" section"))
    }
}

fn param_f64(
    params: &BTreeMap<String, Value>,
    key: &str,
    default: Option<f64>,
) -> Result<f64, CliError> {
    match params.get(key) {
        Some(v) => v
            .as_f64()
            .ok_or_else(|| CliError::schema(format!("params.{key} must be a number"))),
        None => default.ok_or_else(|| CliError::schema(format!("params.{key} is required"))),
    }
}

fn param_usize(
    params: &BTreeMap<String, Value>,
    key: &str,
    default: Option<usize>,
) -> Result<usize, CliError> {
    match params.get(key) {
        Some(v) => v.as_u64().map(|x| x as usize).ok_or_else(|| {
            CliError::schema(format!("params.{key} must be a non-negative integer"))
        }),
        None => default.ok_or_else(|| CliError::schema(format!("params.{key} is required"))),
    }
}

fn check_params(
    params: &BTreeMap<String, Value>,
    allowed: &[&str],
    owner: &str,
) -> Result<(), CliError> {
    for k in params.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(CliError::schema(format!(
                "{owner}: unknown parameter \"{k}\""
            )));
        }
    }
    Ok(())
}

impl ModelSpec {
    /// Build the model; `job_seed` fills in a missing `seed` for random models.
    pub fn build(&self, job_seed: u64) -> Result<Box<dyn StatisticalModel>, CliError> {
        match (&self.builtin, &self.samples) {
            (Some(_), Some(_)) => Err(CliError::schema(
                "model: give either \"builtin\" or \"samples\", not both",
            )),
            (None, None) => Err(CliError::schema("model: needs \"builtin\" or \"samples\"")),
            (None, Some(samples)) => {
                let parsed = samples
                    .iter()
                    .enumerate()
                    .map(|(k, s)| {
                        Ok((
                            s.theta.clone(),
                            matrix_from_json(&s.rho, &format!("samples[{k}].rho"))?,
                        ))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(Box::new(
                    SampledModel::new(parsed).map_err(CliError::from_core)?,
                ))
            }
            (Some(name), None) => {
                let p = &self.params;
                match name.as_str() {
                    "bloch_rotation" => {
                        check_params(p, &["r"], "bloch_rotation")?;
                        let r = param_f64(p, "r", None)?;
                        Ok(Box::new(
                            bloch_rotation_model(r).map_err(|e| CliError::schema(e.to_string()))?,
                        ))
                    }
                    "classical_binary" => {
                        check_params(p, &[], "classical_binary")?;
                        Ok(Box::new(classical_binary_model()))
                    }
                    "random" => {
                        check_params(p, &["dim", "param_dim", "seed"], "random")?;
                        let dim = param_usize(p, "dim", Some(2))?;
                        let m = param_usize(p, "param_dim", Some(1))?;
                        let seed = match p.get("seed") {
                            Some(_) => param_usize(p, "seed", None)? as u64,
                            None => job_seed,
                        };
                        Ok(Box::new(
                            random_model(dim, m, seed)
                                .map_err(|e| CliError::schema(e.to_string()))?,
                        ))
                    }
                    other => Err(CliError::schema(format!(
                        "model: unknown builtin \"{other}\""
                    ))),
                }
            }
        }
    }
}

impl MeasurementSpec {
    /// Build without enforcing `Σ K†K = I`, so that `validate` can report
    /// the residual. Other commands call `check_normalized` afterwards.
    pub fn build_unchecked(&self, dim: usize, job_seed: u64) -> Result<Measurement, CliError> {
        match (&self.builtin, &self.kraus) {
            (Some(_), Some(_)) => Err(CliError::schema(
                "measurement: give either \"builtin\" or \"kraus\", not both",
            )),
            (None, None) => Err(CliError::schema(
                "measurement: needs \"builtin\" or \"kraus\"",
            )),
            (None, Some(outcomes)) => {
                let ops = outcomes
                    .iter()
                    .enumerate()
                    .map(|(i, ks)| {
                        ks.iter()
                            .enumerate()
                            .map(|(j, k)| matrix_from_json(k, &format!("kraus[{i}][{j}]")))
                            .collect::<Result<Vec<_>, CliError>>()
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Measurement::unchecked(ops).map_err(|e| CliError::schema(e.to_string()))
            }
            (Some(name), None) => {
                let p = &self.params;
                match name.as_str() {
                    "royer" => {
                        check_params(p, &["theta_m", "sigma_m"], "royer")?;
                        Ok(Measurement::royer(
                            param_f64(p, "theta_m", None)?,
                            param_f64(p, "sigma_m", None)?,
                        ))
                    }
                    "identity" => {
                        check_params(p, &["dim"], "identity")?;
                        Ok(Measurement::identity(param_usize(p, "dim", Some(dim))?))
                    }
                    "projective" => {
                        check_params(p, &["dim"], "projective")?;
                        Ok(Measurement::projective(param_usize(p, "dim", Some(dim))?))
                    }
                    "random" => {
                        check_params(p, &["dim", "outcomes", "ops_per_outcome", "seed"], "random")?;
                        let seed = match p.get("seed") {
                            Some(_) => param_usize(p, "seed", None)? as u64,
                            None => job_seed,
                        };
                        random_measurement(
                            param_usize(p, "dim", Some(dim))?,
                            param_usize(p, "outcomes", Some(2))?,
                            param_usize(p, "ops_per_outcome", Some(1))?,
                            seed,
                        )
                        .map_err(|e| CliError::schema(e.to_string()))
                    }
                    other => Err(CliError::schema(format!(
                        "measurement: unknown builtin \"{other}\""
                    ))),
                }
            }
        }
    }
}

/// Evaluation points. A nested list is a list of points. A flat list is a list
/// of scalar points when `m = 1`, and a single point otherwise.
pub fn theta_points(
    spec: Option<&ThetaSpec>,
    model: &dyn StatisticalModel,
) -> Result<Vec<Vec<f64>>, CliError> {
    let m = model.param_dim();
    let points = match spec {
        None => {
            let d = model.domain();
            vec![d
                .lower
                .iter()
                .zip(&d.upper)
                .map(|(lo, hi)| 0.5 * (lo + hi))
                .collect()]
        }
        Some(ThetaSpec::Points(p)) => p.clone(),
        Some(ThetaSpec::Flat(v)) if m == 1 => v.iter().map(|&t| vec![t]).collect(),
        Some(ThetaSpec::Flat(v)) => vec![v.clone()],
    };
    if points.is_empty() {
        return Err(CliError::schema("theta: no points given"));
    }
    for p in &points {
        if p.len() != m {
            return Err(CliError::schema(format!(
                "theta: point {p:?} has {} coordinates, model has {m} parameters",
                p.len()
            )));
        }
    }
    Ok(points)
}

pub fn divergence_kinds(names: Option<&Vec<String>>) -> Result<Vec<DivergenceKind>, CliError> {
    let Some(names) = names else {
        return Ok(vec![
            DivergenceKind::QuantumRelative,
            DivergenceKind::BelavkinStaszewski,
        ]);
    };
    names
        .iter()
        .map(|n| match DivergenceKind::from_name(n) {
            Ok(DivergenceKind::Classical) => Err(CliError::schema(
                "divergence.kinds: only quantum divergences are allowed",
            )),
            Ok(k) => Ok(k),
            Err(e) => Err(CliError::schema(e.to_string())),
        })
        .collect()
}

impl ScanSpec {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        match (&self.values, self.start, self.stop, self.points) {
            (Some(v), None, None, None) if !v.is_empty() => Ok(v.clone()),
            (None, Some(a), Some(b), Some(n)) if n >= 2 => Ok((0..n)
                .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
                .collect()),
            (None, Some(a), Some(_), Some(1)) => Ok(vec![a]),
            _ => Err(CliError::schema(
                "scan: give a non-empty \"values\" list, or \"start\", \"stop\" and \"points\"",
            )),
        }
    }
}

//! Command implementations. Each returns whether every asserted check passed.

use std::fs;

use infodist::campaign::{divergence_campaign, royer_excluded, run_suite, SuiteConfig, Tolerances};
use infodist::divergence::{
    divergence_tradeoff, local_expansion_metric, DivergenceKind, Extended, EXPANSION_DELTA,
};
use infodist::fisher::quantum_fisher;
use infodist::linalg::{
    hermiticity_deviation, trace, ComplexMatrix, DensityMatrix, HermitianMatrix, EIGENVALUE_FLOOR,
    HERMITICITY_TOL, TRACE_TOL,
};
use infodist::measurement::{COND_TOL, NORMALIZATION_TOL};
use infodist::models::{derivative_traces, evaluate, StatisticalModel};
use infodist::tradeoff::{
    check_rld_equality_at, check_separating_at, check_tradeoff_at, rld_equality_residuals_at,
};
use infodist::{Measurement, MonotoneMetric};
use serde_json::{json, Value};

use crate::config::{
    divergence_kinds, matrix_from_json, matrix_to_json, theta_points, JobConfig, MatrixJson,
};
use crate::report::{config_hash, csv_bytes, emit, fmt_f64, fmt_opt, json_f64, Envelope};
use crate::{Cli, CliError, Command, Format};

/// Inputs shared by every command after flags are merged into the config.
pub struct Job {
    pub command: Command,
    pub config: JobConfig,
    pub config_sha256: String,
    pub seed: u64,
    pub tolerances: Tolerances,
}

pub fn load_job(cli: &Cli) -> Result<Job, CliError> {
    let (config, bytes) = match &cli.config {
        Some(path) => {
            let bytes = fs::read(path)
                .map_err(|e| CliError::schema(format!("cannot read {}: {e}", path.display())))?;
            (JobConfig::parse(&bytes)?, bytes)
        }
        None if cli.command == Command::Randsuite => (JobConfig::default(), Vec::new()),
        None => {
            return Err(CliError::schema(format!(
                "{} needs --config",
                cli.command.name()
            )))
        }
    };
    let mut tolerances = config.tolerances;
    if let Some(tol) = cli.tol {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(CliError::schema(
                "--tol must be a finite non-negative number",
            ));
        }
        tolerances.psd = tol;
    }
    Ok(Job {
        command: cli.command,
        seed: cli.seed.or(config.seed).unwrap_or(0),
        config,
        config_sha256: config_hash(&bytes),
        tolerances,
    })
}

pub fn execute(cli: &Cli) -> Result<bool, CliError> {
    let job = load_job(cli)?;
    let format = cli.format.unwrap_or(match cli.command {
        Command::Scan => Format::Csv,
        _ => Format::Json,
    });
    let output = match cli.command {
        Command::Validate => validate(&job)?,
        Command::Tradeoff => tradeoff(&job)?,
        Command::Scan => scan(&job)?,
        Command::Divergence => divergence(&job, cli.trials)?,
        Command::Randsuite => randsuite(&job, cli.trials, cli.inject_negated_check)?,
    };
    let bytes = match format {
        Format::Json => output.envelope(&job).to_json(),
        Format::Csv => match output.csv {
            Some(csv) => csv,
            None => {
                return Err(CliError::schema(format!(
                    "{} has no CSV output",
                    cli.command.name()
                )))
            }
        },
    };
    emit(cli.out.as_deref(), &bytes)?;
    Ok(output.pass)
}

pub struct Output {
    pub pass: bool,
    pub results: Value,
    pub csv: Option<Vec<u8>>,
}

impl Output {
    pub fn envelope(&self, job: &Job) -> Envelope {
        Envelope {
            command: job.command.name().to_string(),
            config_sha256: job.config_sha256.clone(),
            seed: job.seed,
            tolerances: job.tolerances,
            pass: self.pass,
            results: self.results.clone(),
        }
    }
}

fn status(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn matrix_value(m: &ComplexMatrix) -> Value {
    json!(matrix_to_json(m))
}

fn extended_value(x: Extended) -> Value {
    match x {
        Extended::Finite(v) => json_f64(v),
        Extended::PosInfinity => json!("inf"),
    }
}

fn model_and_measurement(job: &Job) -> Result<(Box<dyn StatisticalModel>, Measurement), CliError> {
    let model = job.config.model_spec()?.build(job.seed)?;
    let meas = job
        .config
        .measurement_spec()?
        .build_unchecked(model.dim(), job.seed)?;
    if meas.dim() != model.dim() {
        return Err(CliError::schema(format!(
            "measurement acts on dimension {}, model has dimension {}",
            meas.dim(),
            model.dim()
        )));
    }
    let residual = meas.normalization_residual();
    if residual > NORMALIZATION_TOL {
        return Err(CliError::failure(format!(
            "Kraus operators are not normalized: residual {residual:.3e} exceeds {NORMALIZATION_TOL:e}"
        )));
    }
    Ok((model, meas))
}

struct StateCheck {
    hermiticity: f64,
    trace_residual: f64,
    min_eigenvalue: f64,
}

impl StateCheck {
    fn of(m: &ComplexMatrix) -> Result<Self, CliError> {
        if !m.is_square() {
            return Err(CliError::schema(format!(
                "state is {}x{}, not square",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self {
            hermiticity: hermiticity_deviation(m),
            trace_residual: (trace(m) - 1.0).norm(),
            min_eigenvalue: HermitianMatrix::hermitize(m).min_eigenvalue(),
        })
    }

    fn pass(&self) -> bool {
        self.hermiticity <= HERMITICITY_TOL
            && self.trace_residual <= TRACE_TOL
            && self.min_eigenvalue >= -EIGENVALUE_FLOOR
    }

    fn value(&self) -> Value {
        json!({
            "hermiticity_deviation": json_f64(self.hermiticity),
            "trace_residual": json_f64(self.trace_residual),
            "min_eigenvalue": json_f64(self.min_eigenvalue),
            "pass": self.pass(),
        })
    }
}

fn check_state_json(rows: &MatrixJson, label: &str, pass: &mut bool) -> Result<Value, CliError> {
    let check = StateCheck::of(&matrix_from_json(rows, label)?)?;
    eprintln!(
        "{} {label}: hermiticity {:.3e}, trace residual {:.3e}, min eigenvalue {:.3e}",
        status(check.pass()),
        check.hermiticity,
        check.trace_residual,
        check.min_eigenvalue
    );
    *pass &= check.pass();
    Ok(check.value())
}

pub fn validate(job: &Job) -> Result<Output, CliError> {
    let cfg = &job.config;
    let mut pass = true;
    let mut results = serde_json::Map::new();
    results.insert(
        "metrics".into(),
        json!(cfg
            .metrics()?
            .iter()
            .map(|m| m.name().to_string())
            .collect::<Vec<_>>()),
    );

    let mut model_dim = None;
    if let Some(spec) = &cfg.model {
        let mut entry = serde_json::Map::new();
        if let Some(samples) = &spec.samples {
            let checks = samples
                .iter()
                .enumerate()
                .map(|(k, s)| check_state_json(&s.rho, &format!("samples[{k}].rho"), &mut pass))
                .collect::<Result<Vec<_>, _>>()?;
            entry.insert("samples".into(), json!(checks));
        }
        if pass {
            let model = spec.build(job.seed)?;
            model_dim = Some(model.dim());
            let mut points = Vec::new();
            for theta in theta_points(cfg.theta.as_ref(), model.as_ref())? {
                match evaluate(model.as_ref(), &theta) {
                    Ok(point) => {
                        let check = StateCheck::of(point.state.as_matrix())?;
                        let traces = derivative_traces(&point);
                        let worst = traces.iter().fold(0.0f64, |m, t| m.max(t.abs()));
                        let ok = check.pass() && worst <= model.derivative_source().trace_tol();
                        eprintln!(
                            "{} model at theta {theta:?}: derivative trace residual {worst:.3e}",
                            status(ok)
                        );
                        pass &= ok;
                        points.push(json!({
                            "theta": theta,
                            "state": check.value(),
                            "derivative_trace_residual": json_f64(worst),
                            "pass": ok,
                        }));
                    }
                    Err(e) => {
                        eprintln!("FAIL model at theta {theta:?}: {e}");
                        pass = false;
                        points
                            .push(json!({ "theta": theta, "error": e.to_string(), "pass": false }));
                    }
                }
            }
            entry.insert("dim".into(), json!(model.dim()));
            entry.insert("param_dim".into(), json!(model.param_dim()));
            entry.insert("points".into(), json!(points));
        }
        results.insert("model".into(), Value::Object(entry));
    }

    if let Some(spec) = &cfg.measurement {
        let meas = spec.build_unchecked(model_dim.unwrap_or(2), job.seed)?;
        let residual = meas.normalization_residual();
        let normalized = residual <= NORMALIZATION_TOL;
        eprintln!(
            "{} measurement normalization residual {residual:.3e}",
            status(normalized)
        );
        pass &= normalized;
        let mut entry = json!({
            "dim": meas.dim(),
            "num_outcomes": meas.num_outcomes(),
            "normalization_residual": json_f64(residual),
            "pure": meas.is_pure(),
            "pass": normalized,
        });
        if meas.is_pure() {
            let s = meas.min_singular_value()?;
            entry["min_singular_value"] = json_f64(s);
            entry["reversible"] = json!(s > COND_TOL);
        }
        if let Some(d) = model_dim {
            if d != meas.dim() {
                eprintln!(
                    "FAIL measurement dimension {} differs from model dimension {d}",
                    meas.dim()
                );
                pass = false;
                entry["pass"] = json!(false);
            }
        }
        results.insert("measurement".into(), entry);
    }

    if let Some(div) = &cfg.divergence {
        let mut entry = serde_json::Map::new();
        if let Some(rho) = &div.rho {
            entry.insert(
                "rho".into(),
                check_state_json(rho, "divergence.rho", &mut pass)?,
            );
        }
        if let Some(sigma) = &div.sigma {
            entry.insert(
                "sigma".into(),
                check_state_json(sigma, "divergence.sigma", &mut pass)?,
            );
        }
        divergence_kinds(div.kinds.as_ref())?;
        results.insert("divergence".into(), Value::Object(entry));
    }
    if let Some(scan) = &cfg.scan {
        scan.values()?;
    }

    Ok(Output {
        pass,
        results: Value::Object(results),
        csv: None,
    })
}

const TRADEOFF_HEADER: [&str; 9] = [
    "point_index",
    "theta",
    "metric",
    "j_classical_trace",
    "delta_trace",
    "min_gap_eigenvalue",
    "psd_verdict",
    "separating_residual",
    "rld_equality_residual",
];

pub fn tradeoff(job: &Job) -> Result<Output, CliError> {
    let (model, meas) = model_and_measurement(job)?;
    let metrics = job.config.metrics()?;
    let tol = job.tolerances;
    let rld_applicable = meas.is_pure() && meas.min_singular_value()? > COND_TOL;
    let mut pass = true;
    let mut points = Vec::new();
    let mut rows = Vec::new();

    for (k, theta) in theta_points(job.config.theta.as_ref(), model.as_ref())?
        .into_iter()
        .enumerate()
    {
        let point = evaluate(model.as_ref(), &theta)?;

        let (rld_value, rld_residual) = if meas.is_pure() {
            let report = if rld_applicable {
                check_rld_equality_at(&point, &meas)
            } else {
                rld_equality_residuals_at(&point, &meas)
            };
            match report {
                Ok(r) => {
                    let ok = r.holds(tol.rld_equality);
                    if rld_applicable {
                        pass &= ok;
                    }
                    (
                        json!({
                            "asserted": rld_applicable,
                            "residual": json_f64(r.residual),
                            "intermediate_residual": json_f64(r.intermediate_residual),
                            "pass": ok,
                        }),
                        Some(r.residual),
                    )
                }
                Err(e) => {
                    pass &= !rld_applicable;
                    (
                        json!({ "asserted": rld_applicable, "error": e.to_string() }),
                        None,
                    )
                }
            }
        } else {
            (Value::Null, None)
        };

        let mut entries = Vec::new();
        for metric in &metrics {
            let report = check_tradeoff_at(&point, &meas, metric)?;
            let verdict = report.min_gap_eigenvalue >= -tol.psd;
            let sep = check_separating_at(&point, &meas, metric);
            let (sep_value, sep_residual, sep_ok) = match &sep {
                Ok(s) => (
                    json_f64(s.residual),
                    Some(s.residual),
                    s.residual <= tol.separating,
                ),
                Err(e) => (json!({ "error": e.to_string() }), None, false),
            };
            pass &= verdict && sep_ok;
            eprintln!(
                "{} theta {theta:?} {}: min gap eigenvalue {:.3e}, separating residual {}",
                status(verdict && sep_ok),
                metric.name(),
                report.min_gap_eigenvalue,
                sep_residual.map_or("error".to_string(), |r| format!("{r:.3e}"))
            );
            let j_quantum = quantum_fisher(&point, metric)?;
            entries.push(json!({
                "metric": metric.name(),
                "j_quantum": matrix_value(&j_quantum.matrix),
                "j_classical": matrix_value(&report.j_classical.matrix),
                "delta": matrix_value(&report.delta),
                "gap": matrix_value(&report.gap),
                "min_gap_eigenvalue": json_f64(report.min_gap_eigenvalue),
                "psd_verdict": verdict,
                "separating_residual": sep_value,
                "separating_pass": sep_ok,
            }));
            rows.push(vec![
                k.to_string(),
                theta
                    .iter()
                    .map(|t| fmt_f64(*t))
                    .collect::<Vec<_>>()
                    .join(";"),
                metric.name().to_string(),
                fmt_f64(report.j_classical.matrix.trace().re),
                fmt_f64(report.delta.trace().re),
                fmt_f64(report.min_gap_eigenvalue),
                verdict.to_string(),
                fmt_opt(sep_residual),
                fmt_opt(rld_residual),
            ]);
        }
        points.push(json!({
            "theta": theta,
            "metrics": entries,
            "rld_equality": rld_value,
        }));
    }
    Ok(Output {
        pass,
        results: json!({
            "measurement": { "num_outcomes": meas.num_outcomes(), "pure": meas.is_pure(), "reversible": rld_applicable },
            "points": points,
        }),
        csv: Some(csv_bytes(&TRADEOFF_HEADER, &rows)?),
    })
}

pub const SCAN_HEADER: [&str; 8] = [
    "scan_value",
    "j_classical",
    "delta_sld",
    "delta_bkm",
    "delta_realrld",
    "delta_rld_re",
    "gap_min_eig_sld",
    "rld_equality_residual",
];

pub fn scan(job: &Job) -> Result<Output, CliError> {
    let cfg = &job.config;
    let scan = cfg
        .scan
        .as_ref()
        .ok_or_else(|| CliError::schema("scan needs a \"scan\" section"))?;
    let values = scan.values()?;
    let spec = cfg.measurement_spec()?;
    if spec.builtin.as_deref() != Some("royer") {
        return Err(CliError::schema(
            "scan sweeps a Royer measurement: measurement.builtin must be \"royer\"",
        ));
    }
    let fixed_key = match scan.parameter.as_str() {
        "sigma_m" => "theta_m",
        "theta_m" => "sigma_m",
        other => {
            return Err(CliError::schema(format!(
                "scan: unknown parameter \"{other}\""
            )))
        }
    };
    let fixed = spec
        .params
        .get(fixed_key)
        .and_then(Value::as_f64)
        .ok_or_else(|| {
            CliError::schema(format!("scan: measurement.params.{fixed_key} is required"))
        })?;
    let model = cfg.model_spec()?.build(job.seed)?;
    if model.dim() != 2 || model.param_dim() != 1 {
        return Err(CliError::schema(
            "scan needs a qubit model with one parameter",
        ));
    }
    let thetas = theta_points(cfg.theta.as_ref(), model.as_ref())?;
    if thetas.len() != 1 {
        return Err(CliError::schema("scan takes a single theta"));
    }
    let point = evaluate(model.as_ref(), &thetas[0])?;
    let tol = job.tolerances;
    let presets = [
        MonotoneMetric::sld(),
        MonotoneMetric::bkm(),
        MonotoneMetric::real_rld(),
        MonotoneMetric::rld(),
    ];

    let mut pass = true;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for &v in &values {
        let (theta_m, sigma_m) = if scan.parameter == "sigma_m" {
            (fixed, v)
        } else {
            (v, fixed)
        };
        let meas = Measurement::royer(theta_m, sigma_m);
        let reports = presets
            .iter()
            .map(|m| check_tradeoff_at(&point, &meas, m))
            .collect::<Result<Vec<_>, _>>()?;
        let psd_ok = reports.iter().all(|r| r.min_gap_eigenvalue >= -tol.psd);
        let rld = if royer_excluded(theta_m, sigma_m) || meas.min_singular_value()? <= COND_TOL {
            None
        } else {
            Some(check_rld_equality_at(&point, &meas)?)
        };
        let rld_ok = rld.as_ref().is_none_or(|r| r.holds(tol.rld_equality));
        pass &= psd_ok && rld_ok;
        let scalar = |m: &ComplexMatrix| m[(0, 0)].re;
        let row = [
            v,
            scalar(&reports[0].j_classical.matrix),
            scalar(&reports[0].delta),
            scalar(&reports[1].delta),
            scalar(&reports[2].delta),
            scalar(&reports[3].delta),
            reports[0].min_gap_eigenvalue,
        ];
        let mut cells: Vec<String> = row.iter().map(|x| fmt_f64(*x)).collect();
        cells.push(fmt_opt(rld.as_ref().map(|r| r.residual)));
        rows.push(cells);
        let mut obj = serde_json::Map::new();
        for (name, x) in SCAN_HEADER.iter().zip(row) {
            obj.insert((*name).to_string(), json_f64(x));
        }
        obj.insert(
            "rld_equality_residual".into(),
            rld.as_ref().map_or(Value::Null, |r| json_f64(r.residual)),
        );
        obj.insert(
            "rld_intermediate_residual".into(),
            rld.as_ref()
                .map_or(Value::Null, |r| json_f64(r.intermediate_residual)),
        );
        obj.insert("pass".into(), json!(psd_ok && rld_ok));
        json_rows.push(Value::Object(obj));
    }
    eprintln!(
        "{} scan over {} with {} points",
        status(pass),
        scan.parameter,
        values.len()
    );
    Ok(Output {
        pass,
        results: json!({ "parameter": scan.parameter, "theta": thetas[0], "rows": json_rows }),
        csv: Some(csv_bytes(&SCAN_HEADER, &rows)?),
    })
}

fn divergence_target(kind: DivergenceKind) -> MonotoneMetric {
    match kind {
        DivergenceKind::BelavkinStaszewski => MonotoneMetric::real_rld(),
        _ => MonotoneMetric::bkm(),
    }
}

pub fn divergence(job: &Job, trials_flag: Option<usize>) -> Result<Output, CliError> {
    let cfg = &job.config;
    let spec = cfg
        .divergence
        .as_ref()
        .ok_or_else(|| CliError::schema("divergence needs a \"divergence\" section"))?;
    let kinds = divergence_kinds(spec.kinds.as_ref())?;
    let tol = job.tolerances;
    let mut pass = true;
    let mut results = serde_json::Map::new();
    let mut did_something = false;

    match (&spec.rho, &spec.sigma) {
        (Some(rho), Some(sigma)) => {
            did_something = true;
            let rho = DensityMatrix::new(matrix_from_json(rho, "divergence.rho")?)?;
            let sigma = DensityMatrix::new(matrix_from_json(sigma, "divergence.sigma")?)?;
            let meas = cfg
                .measurement_spec()?
                .build_unchecked(rho.dim(), job.seed)?;
            let residual = meas.normalization_residual();
            if residual > NORMALIZATION_TOL {
                return Err(CliError::failure(format!(
                    "Kraus operators are not normalized: residual {residual:.3e}"
                )));
            }
            let mut entries = Vec::new();
            let mut before = Vec::new();
            for &kind in &kinds {
                let t = divergence_tradeoff(&rho, &sigma, &meas, kind)?;
                let ok = t.holds(tol.divergence);
                pass &= ok;
                eprintln!(
                    "{} {} tradeoff: slack {}",
                    status(ok),
                    kind.name(),
                    t.slack
                        .map_or("n/a (infinite term)".to_string(), |s| format!("{s:.3e}"))
                );
                before.push((kind, t.before));
                entries.push(json!({
                    "kind": kind.name(),
                    "lhs": extended_value(t.lhs),
                    "before": extended_value(t.before),
                    "outcome_terms": t.outcome_terms.iter().map(|o| o.map_or(Value::Null, extended_value)).collect::<Vec<_>>(),
                    "p": t.p.iter().map(|x| json_f64(*x)).collect::<Vec<_>>(),
                    "q": t.q.iter().map(|x| json_f64(*x)).collect::<Vec<_>>(),
                    "rhs": t.rhs.map_or(Value::Null, json_f64),
                    "slack": t.slack.map_or(Value::Null, json_f64),
                    "pass": ok,
                }));
            }
            let find = |k| before.iter().find(|(kind, _)| *kind == k).map(|(_, v)| *v);
            let ordering = match (
                find(DivergenceKind::QuantumRelative),
                find(DivergenceKind::BelavkinStaszewski),
            ) {
                (Some(Extended::Finite(sq)), Some(Extended::Finite(sbs))) => {
                    let ok = sbs - sq >= -tol.divergence;
                    pass &= ok;
                    eprintln!("{} S^BS - S^Q = {:.3e}", status(ok), sbs - sq);
                    json!({ "difference": json_f64(sbs - sq), "pass": ok })
                }
                _ => Value::Null,
            };
            results.insert(
                "pair".into(),
                json!({ "tradeoffs": entries, "bs_minus_quantum": ordering }),
            );
        }
        (None, None) => {}
        _ => {
            return Err(CliError::schema(
                "divergence: give both \"rho\" and \"sigma\", or neither",
            ))
        }
    }

    if let Some(exp) = &spec.local_expansion {
        did_something = true;
        let model = cfg.model_spec()?.build(job.seed)?;
        let delta = exp.delta.unwrap_or(EXPANSION_DELTA);
        let thetas = theta_points(exp.theta.as_ref().or(cfg.theta.as_ref()), model.as_ref())?;
        let mut entries = Vec::new();
        for theta in thetas {
            let point = evaluate(model.as_ref(), &theta)?;
            for &kind in &kinds {
                let estimate = local_expansion_metric(model.as_ref(), &theta, kind, delta)?;
                let metric = divergence_target(kind);
                let target = quantum_fisher(&point, &metric)?;
                let mut worst: f64 = 0.0;
                for a in 0..estimate.nrows() {
                    for b in 0..estimate.ncols() {
                        let t = target.matrix[(a, b)].re;
                        worst = worst
                            .max((estimate[(a, b)] - t).abs() / t.abs().max(f64::MIN_POSITIVE));
                    }
                }
                let ok = worst <= tol.expansion_relative;
                pass &= ok;
                eprintln!(
                    "{} theta {theta:?} {} expansion vs {}: relative error {worst:.3e}",
                    status(ok),
                    kind.name(),
                    metric.name()
                );
                let est: Vec<Vec<Value>> = (0..estimate.nrows())
                    .map(|a| {
                        (0..estimate.ncols())
                            .map(|b| json_f64(estimate[(a, b)]))
                            .collect()
                    })
                    .collect();
                entries.push(json!({
                    "theta": theta,
                    "kind": kind.name(),
                    "metric": metric.name(),
                    "delta": json_f64(delta),
                    "estimate": est,
                    "target": matrix_value(&target.matrix),
                    "relative_error": json_f64(worst),
                    "pass": ok,
                }));
            }
        }
        results.insert("local_expansion".into(), json!(entries));
    }

    if let Some(n) = trials_flag.or(spec.random_pairs) {
        did_something = true;
        let suite = SuiteConfig {
            seed: job.seed,
            divergence_trials: n,
            tolerances: tol,
            ..SuiteConfig::default()
        };
        let summary = divergence_campaign(&suite);
        eprintln!(
            "{} random pairs: {}/{} passed, worst residual {:.3e}",
            status(summary.passed()),
            summary.n_pass,
            summary.n_trials,
            summary.worst_residual
        );
        pass &= summary.passed();
        results.insert("random_pairs".into(), json!(summary));
    }

    if !did_something {
        return Err(CliError::schema(
            "divergence: give \"rho\"/\"sigma\", \"local_expansion\" or \"random_pairs\"",
        ));
    }
    Ok(Output {
        pass,
        results: Value::Object(results),
        csv: None,
    })
}

const SUITE_HEADER: [&str; 6] = [
    "campaign",
    "n_trials",
    "n_pass",
    "n_errors",
    "worst_residual",
    "failing_seeds",
];

pub fn randsuite(job: &Job, trials_flag: Option<usize>, negate: bool) -> Result<Output, CliError> {
    let mut suite = SuiteConfig {
        seed: job.seed,
        tolerances: job.tolerances,
        negate_tradeoff: negate,
        ..SuiteConfig::default()
    };
    if let Some(n) = trials_flag.or(job.config.trials) {
        if n == 0 {
            return Err(CliError::schema("trials must be at least 1"));
        }
        suite = suite.with_trials(n);
    }
    let report = run_suite(&suite);
    let mut rows = Vec::new();
    for c in &report.campaigns {
        eprintln!(
            "{} {}: {}/{} passed, worst residual {:.3e}",
            status(c.passed()),
            c.name,
            c.n_pass,
            c.n_trials,
            c.worst_residual
        );
        rows.push(vec![
            c.name.clone(),
            c.n_trials.to_string(),
            c.n_pass.to_string(),
            c.n_errors.to_string(),
            fmt_f64(c.worst_residual),
            c.failing_seeds
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(";"),
        ]);
    }
    Ok(Output {
        pass: report.all_pass,
        results: json!({ "campaigns": report.campaigns }),
        csv: Some(csv_bytes(&SUITE_HEADER, &rows)?),
    })
}

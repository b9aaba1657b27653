use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

const FRAC_PI_2: &str = "1.5707963267948966";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_infodist"))
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str], config: Option<&Path>) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    if let Some(c) = config {
        cmd.arg("--config").arg(c);
    }
    cmd.output().unwrap()
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn royer_config() -> String {
    format!(
        r#"{{
  "model": {{"builtin": "bloch_rotation", "params": {{"r": 0.5}}}},
  "measurement": {{"builtin": "royer", "params": {{"theta_m": {FRAC_PI_2}, "sigma_m": {FRAC_PI_2}}}}},
  "theta": [0.3, 1.7],
  "metrics": ["sld", "bkm", "real_rld", "rld"]
}}"#
    )
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", &royer_config());
    assert_eq!(run(&["validate"], Some(&good)).status.code(), Some(0));

    let bad_kraus = write(
        dir.path(),
        "bad.json",
        r#"{"measurement": {"kraus": [[ [[1.0005, 0], [0, 1.0005]] ]]}}"#,
    );
    let out = run(&["validate"], Some(&bad_kraus));
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("normalization residual 1.000e-3"),
        "{stderr}"
    );
    let report = json_out(&out);
    let residual = report["results"]["measurement"]["normalization_residual"]
        .as_f64()
        .unwrap();
    assert!((residual - 1.00025e-3).abs() < 1e-9);

    let malformed = write(dir.path(), "malformed.json", "{ \"model\": ");
    assert_eq!(run(&["validate"], Some(&malformed)).status.code(), Some(2));
    let unknown_field = write(dir.path(), "unknown.json", r#"{"modle": {}}"#);
    assert_eq!(
        run(&["validate"], Some(&unknown_field)).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["validate"], Some(&dir.path().join("missing.json")))
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["validate"], None).status.code(), Some(2));
}

#[test]
fn validate_reports_bad_samples() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "samples.json",
        r#"{"model": {"samples": [
            {"theta": [0.0], "rho": [[[0.6, 0], [0, 0]], [[0, 0], [0.6, 0]]]},
            {"theta": [0.1], "rho": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}
        ]}}"#,
    );
    let out = run(&["validate"], Some(&cfg));
    assert_eq!(out.status.code(), Some(1));
    let report = json_out(&out);
    assert_eq!(
        report["results"]["model"]["samples"][0]["pass"],
        Value::Bool(false)
    );
    assert_eq!(
        report["results"]["model"]["samples"][1]["pass"],
        Value::Bool(true)
    );
}

#[test]
fn tradeoff_royer_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "royer.json", &royer_config());
    let out = run(&["tradeoff"], Some(&cfg));
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = json_out(&out);
    assert_eq!(report["pass"], Value::Bool(true));
    let points = report["results"]["points"].as_array().unwrap();
    assert_eq!(points.len(), 2);
    for p in points {
        for m in p["metrics"].as_array().unwrap() {
            assert!(m["min_gap_eigenvalue"].as_f64().unwrap() >= -1e-8);
            assert!(m["separating_residual"].as_f64().unwrap() <= 1e-7);
        }
        assert_eq!(p["rld_equality"]["asserted"], Value::Bool(true));
        assert!(p["rld_equality"]["residual"].as_f64().unwrap() <= 1e-7);
    }
    assert_eq!(report["config_sha256"].as_str().unwrap().len(), 64);
    assert!(report["tolerances"]["psd"].is_number());
    assert!(report["seed"].is_number());
}

#[test]
fn tradeoff_identity_is_all_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "id.json",
        r#"{"model": {"builtin": "bloch_rotation", "params": {"r": 0.5}}, "measurement": {"builtin": "identity"}, "theta": [0.7]}"#,
    );
    let out = run(&["tradeoff"], Some(&cfg));
    assert_eq!(out.status.code(), Some(0));
    let report = json_out(&out);
    for m in report["results"]["points"][0]["metrics"]
        .as_array()
        .unwrap()
    {
        for key in ["j_classical", "delta", "gap"] {
            let flat: Vec<f64> = m[key]
                .as_array()
                .unwrap()
                .iter()
                .flat_map(|row| {
                    row.as_array()
                        .unwrap()
                        .iter()
                        .flat_map(|z| z.as_array().unwrap().iter())
                })
                .map(|v| v.as_f64().unwrap())
                .collect();
            assert!(flat.iter().all(|v| v.abs() < 1e-14), "{key}: {flat:?}");
        }
    }
}

#[test]
fn unknown_metric_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "xyz.json",
        r#"{"model": {"builtin": "classical_binary"}, "measurement": {"builtin": "identity"}, "metrics": ["XYZ"]}"#,
    );
    let out = run(&["tradeoff"], Some(&cfg));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("XYZ"));
}

#[test]
fn unnormalized_kraus_fails_tradeoff() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "k.json",
        r#"{"model": {"builtin": "classical_binary"}, "measurement": {"kraus": [[ [[0.9, 0], [0, 0.9]] ]]}}"#,
    );
    assert_eq!(run(&["tradeoff"], Some(&cfg)).status.code(), Some(1));
}

#[test]
fn tradeoff_csv_format() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "royer.json", &royer_config());
    let out = run(&["tradeoff", "--format", "csv"], Some(&cfg));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("point_index,theta,metric,"));
    assert_eq!(lines.count(), 8);
}

#[test]
fn scan_sigma_sweep() {
    let dir = tempfile::tempdir().unwrap();
    // theta_m = pi/6 makes theta_m/2 - sigma_m/4 vanish at grid point 10
    let cfg = write(
        dir.path(),
        "scan.json",
        r#"{"model": {"builtin": "random", "params": {"dim": 2, "param_dim": 1, "seed": 3}},
            "measurement": {"builtin": "royer", "params": {"theta_m": 0.5235987755982988}},
            "theta": [0.9],
            "scan": {"parameter": "sigma_m", "start": 0.0, "stop": 1.5707963267948966, "points": 16}}"#,
    );
    let out = run(&["scan"], Some(&cfg));
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "scan_value",
            "j_classical",
            "delta_sld",
            "delta_bkm",
            "delta_realrld",
            "delta_rld_re",
            "gap_min_eig_sld",
            "rld_equality_residual"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 16);
    let cell = |r: &csv::StringRecord, i: usize| r[i].parse::<f64>().unwrap();
    assert!(cell(&rows[0], 1).abs() < 1e-15);
    for (k, r) in rows.iter().enumerate() {
        assert!(cell(r, 6) >= -1e-8);
        if k == 10 {
            assert_eq!(&r[7], "");
        } else {
            assert!(cell(r, 7) <= 1e-7);
        }
        // 17 significant digits: d.dddddddddddddddde±x
        let mantissa = r[1].split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.len(), 18, "{}", &r[1]);
    }
    assert!(cell(&rows[15], 1) > 0.0);
}

#[test]
fn scan_requires_royer() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "scan.json",
        r#"{"model": {"builtin": "bloch_rotation", "params": {"r": 0.5}},
            "measurement": {"builtin": "identity"},
            "scan": {"values": [0.1, 0.2]}}"#,
    );
    assert_eq!(run(&["scan"], Some(&cfg)).status.code(), Some(2));
}

#[test]
fn divergence_equal_states_have_zero_slack() {
    let dir = tempfile::tempdir().unwrap();
    let rho = r#"[[[0.7, 0.0], [0.1, -0.2]], [[0.1, 0.2], [0.3, 0.0]]]"#;
    let cfg = write(
        dir.path(),
        "div.json",
        &format!(
            r#"{{"measurement": {{"builtin": "royer", "params": {{"theta_m": 1.2, "sigma_m": 0.8}}}},
                "divergence": {{"rho": {rho}, "sigma": {rho}}}}}"#
        ),
    );
    let out = run(&["divergence"], Some(&cfg));
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = json_out(&out);
    for t in report["results"]["pair"]["tradeoffs"].as_array().unwrap() {
        assert!(t["slack"].as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn divergence_local_expansion_and_random_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "exp.json",
        r#"{"model": {"builtin": "bloch_rotation", "params": {"r": 0.5}},
            "divergence": {"local_expansion": {"theta": [0.3, 2.0]}, "random_pairs": 100}}"#,
    );
    let out = run(&["divergence"], Some(&cfg));
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = json_out(&out);
    let entries = report["results"]["local_expansion"].as_array().unwrap();
    assert_eq!(entries.len(), 4);
    for e in entries {
        assert!(e["relative_error"].as_f64().unwrap() <= 0.01);
    }
    assert_eq!(
        report["results"]["random_pairs"]["n_pass"],
        Value::from(100)
    );
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "q.json",
        r#"{"model": {"builtin": "random", "params": {"dim": 3, "param_dim": 2}},
            "measurement": {"builtin": "random", "params": {"outcomes": 3, "ops_per_outcome": 2}},
            "theta": [[0.4, -1.1], [2.0, 0.5]]}"#,
    );
    let a = run(&["tradeoff", "--seed", "9"], Some(&cfg));
    let b = run(&["tradeoff", "--seed", "9"], Some(&cfg));
    let c = run(&["tradeoff", "--seed", "10"], Some(&cfg));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(json_out(&a)["seed"], Value::from(9));
}

#[test]
fn config_hash_tracks_config_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", &royer_config());
    let b = write(dir.path(), "b.json", &format!("{}\n", royer_config()));
    let ha = json_out(&run(&["validate"], Some(&a)))["config_sha256"].clone();
    let hb = json_out(&run(&["validate"], Some(&b)))["config_sha256"].clone();
    assert_ne!(ha, hb);
}

#[test]
fn tol_flag_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "royer.json", &royer_config());
    let report = json_out(&run(&["tradeoff", "--tol", "1e-6"], Some(&cfg)));
    assert_eq!(report["tolerances"]["psd"].as_f64(), Some(1e-6));
}

#[test]
fn randsuite_smoke_mode() {
    let start = Instant::now();
    let out = run(&["randsuite", "--trials", "1"], None);
    assert!(start.elapsed() <= Duration::from_secs(5));
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = json_out(&out);
    assert_eq!(report["pass"], Value::Bool(true));
    for c in report["results"]["campaigns"].as_array().unwrap() {
        assert!(c["n_pass"].as_u64() <= c["n_trials"].as_u64());
        assert!(c["failing_seeds"].as_array().unwrap().is_empty());
    }
}

#[test]
fn randsuite_injected_bug_fails() {
    let out = run(
        &["randsuite", "--trials", "2", "--inject-negated-check"],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    let report = json_out(&out);
    let first = &report["results"]["campaigns"][0];
    assert_eq!(first["name"], Value::from("tradeoff_inequality"));
    assert_eq!(
        first["failing_seeds"].as_array().unwrap().len() as u64,
        first["n_trials"].as_u64().unwrap() - first["n_pass"].as_u64().unwrap()
    );
}

#[test]
fn randsuite_reads_config_and_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "suite.json", r#"{"seed": 77, "trials": 3}"#);
    let out_path = dir.path().join("report.json");
    let out = bin()
        .args(["randsuite", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_slice(&std::fs::read(&out_path).unwrap()).unwrap();
    assert_eq!(report["seed"], Value::from(77));
    assert_eq!(
        report["results"]["campaigns"][0]["n_trials"],
        Value::from(6)
    );
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(
        run(&["randsuite", "--format", "xml"], None).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["randsuite", "--tol", "-1"], None).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["randsuite", "--trials", "0"], None).status.code(),
        Some(2)
    );
}

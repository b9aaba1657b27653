//! Report envelopes and deterministic JSON/CSV serialization.

use std::fs;
use std::io::Write;
use std::path::Path;

use infodist::campaign::Tolerances;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

pub fn config_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub pass: bool,
    pub results: Value,
}

impl Envelope {
    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("report serializes");
        out.push(b'\n');
        out
    }
}

/// Round-trip-exact formatting: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// JSON number, or a string for non-finite values (JSON has no infinities).
pub fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::from(fmt_f64(x))
    }
}

pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)
        .map_err(|e| CliError::failure(e.to_string()))?;
    for row in rows {
        w.write_record(row)
            .map_err(|e| CliError::failure(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::failure(e.to_string()))
}

pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| CliError::schema(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::failure(format!("cannot write report: {e}"))),
    }
}

//! Command-line front end: JSON job configs in, JSON/CSV reports out.
//!
//! Exit codes: 0 when every asserted check passes, 1 when one fails, 2 for
//! usage and schema errors.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use infodist::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn schema(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn failure(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_FAIL,
            message: message.into(),
        }
    }

    /// Argument-shape errors are the caller's fault (exit 2); everything else
    /// is a violated mathematical precondition (exit 1).
    pub fn from_core(e: Error) -> Self {
        match e {
            Error::UnknownMetric(_)
            | Error::InvalidArgument(_)
            | Error::DimensionMismatch { .. }
            | Error::NotSquare { .. } => Self::schema(e.to_string()),
            _ => Self::failure(e.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::from_core(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check model, measurement and state invariants.
    Validate,
    /// Certify the information–disturbance inequality at each θ and metric.
    Tradeoff,
    /// Sweep a Royer measurement parameter and emit one row per grid point.
    Scan,
    /// Divergence tradeoff and local expansions.
    Divergence,
    /// Run every randomized certification campaign.
    Randsuite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Tradeoff => "tradeoff",
            Command::Scan => "scan",
            Command::Divergence => "divergence",
            Command::Randsuite => "randsuite",
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "infodist",
    version,
    about = "Information–disturbance certifiers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON job configuration (optional for randsuite).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Report destination; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Override the Loewner (PSD) tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Harness self-test: certify the negated inequality, which must fail.
    #[arg(long, global = true, hide = true)]
    pub inject_negated_check: bool,
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(&cli) {
        Ok(pass) => {
            if pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

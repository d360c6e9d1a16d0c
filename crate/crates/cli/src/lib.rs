//! Command-line front end: certificates, bound transfers and the sequence example as JSON reports.

pub mod commands;
pub mod description;
pub mod human;
pub mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use cframe::FrameError;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable overriding the positivity tolerance.
pub const TOLERANCE_ENV: &str = "CFRAME_TOLERANCE";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid description: {0}")]
    Validation(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Parse { .. } => "parse",
            CliError::Validation(_) => "validation",
            CliError::Usage(_) => "usage",
            CliError::Frame(FrameError::NotIncluded { .. }) => "not_included",
            CliError::Frame(_) => "frame",
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Frame(FrameError::NotIncluded { .. }) => EXIT_NEGATIVE,
            _ => EXIT_ERROR,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cframe", version, about = "Controlled operator frame certificates")]
pub struct Cli {
    /// Print a text table instead of JSON.
    #[arg(long, global = true)]
    pub human: bool,
    /// Seed for all sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of random vectors per sampled check.
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal bounds, status and sampled residuals.
    Certify { file: PathBuf },
    /// Optimal lower and upper bounds only.
    Bounds { file: PathBuf },
    /// Frame operator blocks and classification.
    FrameOperator { file: PathBuf },
    /// Derive and verify bounds of a transformed system.
    Transform { kind: TransformKind, file: PathBuf },
    /// The truncated weighted sequence example.
    Example {
        #[arg(long, default_value_t = 101)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 3.0)]
        beta: f64,
    },
    /// Deterministic battery of randomized checks.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformKind {
    /// `{T_i Q}` with `K' = Q*K`.
    Q,
    /// Optimal bounds of `{T_i Q}` against the invertible-`Q` brackets.
    Invq,
    /// Transport along a homomorphism.
    Hom,
    /// Solve `T X = T'`.
    Douglas,
    /// Transfer to `U` with `R(U) ⊆ R(K)`.
    Range,
}

/// Tolerances and sampling used for a run; embedded in every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    /// Overrides the positivity tolerance of loaded systems when set.
    #[serde(skip)]
    pub eps_override: Option<f64>,
    pub eps_pos: f64,
    pub eps_nz: f64,
    pub tight_tol: f64,
    pub verify_tol: f64,
    pub samples: usize,
    pub seed: u64,
}

/// A finished command: the report body and whether its verdict is positive.
pub struct Outcome {
    pub result: serde_json::Value,
    pub positive: bool,
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorBody>,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
}

fn tolerance_from_env() -> Result<Option<f64>, CliError> {
    match std::env::var(TOLERANCE_ENV) {
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(Some(t)),
            _ => Err(CliError::Usage(format!("{TOLERANCE_ENV} must be a positive number, got '{v}'"))),
        },
        Err(_) => Ok(None),
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Certify { .. } => "certify".into(),
        Command::Bounds { .. } => "bounds".into(),
        Command::FrameOperator { .. } => "frame-operator".into(),
        Command::Transform { kind, .. } => {
            format!("transform {}", kind.to_possible_value().expect("no skipped variants").get_name())
        }
        Command::Example { .. } => "example".into(),
        Command::Selftest => "selftest".into(),
    }
}

/// Run with the given arguments, writing the report to `out`; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let eps_override = match tolerance_from_env() {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return EXIT_USAGE;
        }
    };
    let config = RunConfig {
        eps_override,
        eps_pos: eps_override.unwrap_or(cframe::DEFAULT_EPS_POS),
        eps_nz: cframe::DEFAULT_EPS_NZ,
        tight_tol: cframe::frames::DEFAULT_TIGHT_TOL,
        verify_tol: cframe::VerifyConfig::default().tol,
        samples: cli.samples,
        seed: cli.seed,
    };
    let name = command_name(&cli.command);
    let mut used = config;
    let (body, code) = match commands::dispatch(&cli.command, &mut used) {
        Ok(o) => (
            Report { command: &name, config: used, result: Some(o.result), error: None },
            if o.positive { EXIT_OK } else { EXIT_NEGATIVE },
        ),
        Err(e) => {
            let residual = match &e {
                CliError::Frame(FrameError::NotIncluded { residual }) => Some(*residual),
                _ => None,
            };
            let code = e.exit_code();
            let error = ErrorBody { kind: e.kind(), message: e.to_string(), residual };
            (Report { command: &name, config: used, result: None, error: Some(error) }, code)
        }
    };
    let value = serde_json::to_value(&body).expect("reports serialize");
    let text = if cli.human {
        human::render(&value)
    } else {
        serde_json::to_string_pretty(&value).expect("reports serialize") + "\n"
    };
    if out.write_all(text.as_bytes()).is_err() {
        return EXIT_ERROR;
    }
    code
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 I/O error. Data goes to `--out` or standard output; diagnostics go to
//! standard error.

pub mod format;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{approximation_report, compare_radix};
use crate::circuit::{
    build_qft_circuit, circuit_to_matrix, dft_matrix, KeepDepth, DEFAULT_DIM_CAP,
};
use crate::error::QftError;
use crate::numerics::{register_size, StateVector, DEFAULT_POWER_ITERATIONS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qudit-qft",
    version,
    about = "Radix-q QFT circuits, simulation and error bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Write the (possibly pruned) QFT matrix.
    GenMatrix(CommonArgs),
    /// Check the exact circuit against the DFT matrix.
    Verify(CommonArgs),
    /// Run the circuit on a state read from --in or on a basis state.
    Apply(ApplyArgs),
    /// Tabulate measured phase errors against both bounds.
    Bounds(CommonArgs),
    /// Compare register sizing between radix 2 and radix q.
    CompareRadix(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub radix: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub digits: u64,
    /// Largest denominator exponent kept, or "unbounded".
    #[arg(long, default_value = "unbounded", value_parser = parse_keep_depth)]
    pub keep_depth: KeepDepth,
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long = "out")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 1e-10, value_parser = parse_tolerance)]
    pub tolerance: f64,
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    pub dim_cap: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ApplyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Use the basis state with this index instead of reading --in.
    #[arg(long)]
    pub basis: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn parse_keep_depth(s: &str) -> Result<KeepDepth, String> {
    match s {
        "unbounded" | "inf" => Ok(KeepDepth::Unbounded),
        _ => {
            let d: usize = s
                .parse()
                .map_err(|_| format!("expected a positive integer or \"unbounded\", got {s:?}"))?;
            KeepDepth::limit(d).map_err(|e| e.to_string())
        }
    }
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(t.is_finite() && t > 0.0) {
        return Err(format!("tolerance must be positive and finite, got {s}"));
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    GenMatrix,
    Verify,
    Apply,
    Bounds,
    CompareRadix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub radix: usize,
    pub digits: usize,
    pub keep_depth: KeepDepth,
    pub input_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
    pub tolerance: f64,
    pub dim_cap: usize,
    pub basis: Option<usize>,
}

impl RunConfig {
    /// Config with the default tolerance, cap and keep depth.
    pub fn new(command: CommandKind, radix: usize, digits: usize) -> Self {
        Self {
            command,
            radix,
            digits,
            keep_depth: KeepDepth::Unbounded,
            input_path: None,
            output_path: None,
            format: None,
            tolerance: 1e-10,
            dim_cap: DEFAULT_DIM_CAP,
            basis: None,
        }
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn dimension(&self) -> Result<usize, CliError> {
        Ok(register_size(self.radix, self.digits)?)
    }

    fn check_cap(&self) -> Result<usize, CliError> {
        let dim = self.dimension()?;
        if dim > self.dim_cap {
            return Err(QftError::DimensionCapExceeded {
                dim,
                cap: self.dim_cap,
            }
            .into());
        }
        Ok(dim)
    }
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let (command, common, basis) = match cli.command {
            CliCommand::GenMatrix(c) => (CommandKind::GenMatrix, c, None),
            CliCommand::Verify(c) => (CommandKind::Verify, c, None),
            CliCommand::Apply(a) => (CommandKind::Apply, a.common, a.basis),
            CliCommand::Bounds(c) => (CommandKind::Bounds, c, None),
            CliCommand::CompareRadix(c) => (CommandKind::CompareRadix, c, None),
        };
        Self {
            command,
            radix: common.radix as usize,
            digits: common.digits as usize,
            keep_depth: common.keep_depth,
            input_path: common.input,
            output_path: common.output,
            format: common.format,
            tolerance: common.tolerance,
            dim_cap: common.dim_cap,
            basis,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("malformed state file {path}: {reason}")]
    MalformedState { path: String, reason: String },
    #[error("state norm violation: {0}")]
    NormViolation(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("i/o error on {path}: {reason}")]
    Io { path: String, reason: String },
    #[error(transparent)]
    Qft(#[from] QftError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Qft(QftError::PhaseMismatch(_)) => EXIT_VERIFY_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

/// Result of one command: the data to emit, whether all checks passed, and
/// any diagnostics for standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub data: String,
    pub passed: bool,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn ok(data: String) -> Self {
        Self {
            data,
            passed: true,
            diagnostics: Vec::new(),
        }
    }
}

pub fn cmd_gen_matrix(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.check_cap()?;
    let circuit = build_qft_circuit(cfg.radix, cfg.digits, cfg.keep_depth)?;
    let matrix = circuit_to_matrix(&circuit, cfg.dim_cap)?;
    let data = match cfg.format_or(Format::Json) {
        Format::Json => format::matrix_json(&matrix),
        Format::Csv => format::matrix_csv(&matrix),
    };
    Ok(Outcome::ok(data))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproximationSummary {
    pub keep_depth: usize,
    pub gate_count: usize,
    pub dft_distance: f64,
    pub spectral_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub radix: usize,
    pub digits: usize,
    pub tolerance: f64,
    pub dft_distance: f64,
    pub unitarity_residual: f64,
    pub gate_count: usize,
    pub expected_gate_count: usize,
    pub chrestenson_count: usize,
    /// Informational, present when a keep depth was given.
    pub approximation: Option<ApproximationSummary>,
}

impl VerifyReport {
    // negated so that NaN counts as a violation
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.dft_distance <= self.tolerance) {
            out.push(format!(
                "dft distance {} exceeds tolerance {}",
                self.dft_distance, self.tolerance
            ));
        }
        if !(self.unitarity_residual <= self.tolerance) {
            out.push(format!(
                "unitarity residual {} exceeds tolerance {}",
                self.unitarity_residual, self.tolerance
            ));
        }
        if self.gate_count != self.expected_gate_count || self.chrestenson_count != self.digits {
            out.push(format!(
                "gate count {} ({} Chrestenson), expected {} ({})",
                self.gate_count, self.chrestenson_count, self.expected_gate_count, self.digits
            ));
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn render_text(&self) -> String {
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        let mut out = String::new();
        let _ = writeln!(out, "radix={} digits={}", self.radix, self.digits);
        let _ = writeln!(
            out,
            "dft_distance={} {}",
            format::fmt_f64(self.dft_distance),
            verdict(self.dft_distance <= self.tolerance)
        );
        let _ = writeln!(
            out,
            "unitarity_residual={} {}",
            format::fmt_f64(self.unitarity_residual),
            verdict(self.unitarity_residual <= self.tolerance)
        );
        let _ = writeln!(
            out,
            "gate_count={} expected={} chrestenson={} {}",
            self.gate_count,
            self.expected_gate_count,
            self.chrestenson_count,
            verdict(
                self.gate_count == self.expected_gate_count
                    && self.chrestenson_count == self.digits
            )
        );
        if let Some(a) = &self.approximation {
            let _ = writeln!(
                out,
                "approximate keep_depth={} gates={} dft_distance={} spectral_distance={}",
                a.keep_depth,
                a.gate_count,
                format::fmt_f64(a.dft_distance),
                format::fmt_f64(a.spectral_distance)
            );
        }
        let _ = writeln!(out, "result={}", verdict(self.passed()));
        out
    }
}

pub fn verify_report(cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    let dim = cfg.check_cap()?;
    let exact = build_qft_circuit(cfg.radix, cfg.digits, KeepDepth::Unbounded)?;
    let compiled = circuit_to_matrix(&exact, cfg.dim_cap)?;
    let dft = dft_matrix(dim)?;
    let approximation = match cfg.keep_depth {
        KeepDepth::Unbounded => None,
        KeepDepth::Limit(d) => {
            let pruned = build_qft_circuit(cfg.radix, cfg.digits, cfg.keep_depth)?;
            let approx = circuit_to_matrix(&pruned, cfg.dim_cap)?;
            Some(ApproximationSummary {
                keep_depth: d,
                gate_count: pruned.gate_count(),
                dft_distance: approx.max_entry_distance(&dft)?,
                spectral_distance: dft.sub(&approx)?.spectral_norm(DEFAULT_POWER_ITERATIONS)?,
            })
        }
    };
    Ok(VerifyReport {
        radix: cfg.radix,
        digits: cfg.digits,
        tolerance: cfg.tolerance,
        dft_distance: compiled.max_entry_distance(&dft)?,
        unitarity_residual: compiled
            .unitarity_residual()
            .expect("compiled circuits are square"),
        gate_count: exact.gate_count(),
        expected_gate_count: cfg.digits * (cfg.digits + 1) / 2,
        chrestenson_count: exact.chrestenson_count(),
        approximation,
    })
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let report = verify_report(cfg)?;
    let data = match cfg.format {
        Some(Format::Json) => format::to_json(&report),
        Some(Format::Csv) => {
            return Err(CliError::Usage(
                "verify writes a text or json summary, not csv".into(),
            ))
        }
        None => report.render_text(),
    };
    Ok(Outcome {
        data,
        passed: report.passed(),
        diagnostics: report.violations(),
    })
}

fn read_input_state(cfg: &RunConfig) -> Result<StateVector, CliError> {
    match (&cfg.input_path, cfg.basis) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give either --in or --basis, not both".into(),
        )),
        (None, None) => Err(CliError::Usage("apply needs --in or --basis".into())),
        (None, Some(index)) => {
            let dim = cfg.dimension()?;
            if index >= dim {
                return Err(CliError::ShapeMismatch(format!(
                    "basis index {index} outside register of size {dim}"
                )));
            }
            Ok(StateVector::basis(cfg.radix, cfg.digits, index)?)
        }
        (Some(path), None) => {
            let shown = path.display().to_string();
            let text = fs::read_to_string(path).map_err(|e| CliError::Io {
                path: shown.clone(),
                reason: e.to_string(),
            })?;
            let file = format::parse_state_json(&text).map_err(|e| CliError::MalformedState {
                path: shown.clone(),
                reason: e.to_string(),
            })?;
            if file.radix != cfg.radix || file.digits != cfg.digits {
                return Err(CliError::ShapeMismatch(format!(
                    "{shown} holds a {}^{} state but the circuit is {}^{}",
                    file.radix, file.digits, cfg.radix, cfg.digits
                )));
            }
            file.into_state().map_err(|e| match e {
                QftError::NormViolation(n) => {
                    CliError::NormViolation(format!("{shown}: squared norm {n}"))
                }
                QftError::DimensionMismatch(msg) => {
                    CliError::ShapeMismatch(format!("{shown}: {msg}"))
                }
                other => CliError::MalformedState {
                    path: shown.clone(),
                    reason: other.to_string(),
                },
            })
        }
    }
}

pub fn cmd_apply(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let input = read_input_state(cfg)?;
    let circuit = build_qft_circuit(cfg.radix, cfg.digits, cfg.keep_depth)?;
    let output = crate::circuit::apply_circuit(&circuit, &input)?;
    let norm = output.norm();
    if (norm - 1.0).abs() > cfg.tolerance {
        return Err(CliError::NormViolation(format!("output norm {norm}")));
    }
    let data = match cfg.format_or(Format::Json) {
        Format::Json => format::state_json(&output),
        Format::Csv => format::state_csv(&output),
    };
    Ok(Outcome::ok(data))
}

pub fn cmd_bounds(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.check_cap()?;
    let rows = approximation_report(cfg.radix, cfg.digits, cfg.keep_depth)?;
    let mut diagnostics = Vec::new();
    let mut passed = true;
    for r in &rows {
        if r.phase_wrap_flagged() {
            diagnostics.push(format!(
                "target_digit {}: bound_new {} >= pi, bounds not checked",
                r.target_digit, r.bound_new
            ));
        } else if !r.satisfies_bounds() {
            passed = false;
            diagnostics.push(format!(
                "target_digit {}: bounds violated: {r:?}",
                r.target_digit
            ));
        }
    }
    let data = match cfg.format_or(Format::Csv) {
        Format::Csv => format::bounds_csv(&rows),
        Format::Json => format::bounds_json(&rows),
    };
    Ok(Outcome {
        data,
        passed,
        diagnostics,
    })
}

pub fn cmd_compare_radix(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rows = compare_radix(cfg.radix, cfg.digits)?;
    let data = match cfg.format_or(Format::Csv) {
        Format::Csv => format::compare_csv(&rows),
        Format::Json => format::compare_json(&rows),
    };
    Ok(Outcome::ok(data))
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        CommandKind::GenMatrix => cmd_gen_matrix(cfg),
        CommandKind::Verify => cmd_verify(cfg),
        CommandKind::Apply => cmd_apply(cfg),
        CommandKind::Bounds => cmd_bounds(cfg),
        CommandKind::CompareRadix => cmd_compare_radix(cfg),
    }
}

/// Runs a command, writes its data and diagnostics, and returns the exit code.
pub fn execute(cfg: &RunConfig) -> i32 {
    let outcome = match run(cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    for d in &outcome.diagnostics {
        eprintln!("{d}");
    }
    match &cfg.output_path {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.data) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_IO;
            }
        }
        None => print!("{}", outcome.data),
    }
    if outcome.passed {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

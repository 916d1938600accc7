//! Batch front-end: parse problem descriptors, run solves and sweeps, emit
//! machine-readable reports and plot-ready CSV.
//!
//! Exit codes: 0 success, 2 input/validation error, 3 solver failure,
//! 4 internal consistency failure. Failures print a structured error JSON
//! on stdout; artifact files are written atomically (temp + rename) so a
//! failed run leaves no partial outputs.

mod classify;
mod config;
mod kirwan;
mod oracle;
mod report;
mod solve;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vortex_core::VortexError;

#[derive(Parser)]
#[command(name = "vortex", version, about = "Abelian vortices on the plane: solver, classifiers, ring arithmetic")]
struct Cli {
    /// JSON config file with grid and solver overrides (flags win).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Concurrent sample solves in `sweep`.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default, Clone)]
struct GridArgs {
    /// Truncation radius (default: 8 (1 + max root radius)).
    #[arg(long)]
    r_max: Option<f64>,
    /// Radial nodes (default 256).
    #[arg(long)]
    n_r: Option<usize>,
    /// Angular nodes, even, ≥ 16 (default 128).
    #[arg(long)]
    n_theta: Option<usize>,
    /// Radial grading exponent (default 1.5).
    #[arg(long)]
    gamma: Option<f64>,
    /// Residual sup-norm target (default 1e-10).
    #[arg(long)]
    tol_residual: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the Kazdan-Warner equation for a pair file; write the h-field
    /// CSV and the observables JSON.
    Solve {
        /// NPair JSON: { "n": int, "polys": [ [ [re, im], ... ] ] }.
        pair_file: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Solve the radial oracle ODE for ψ = z^d; write r,h,dh_dr CSV.
    Oracle {
        /// Vortex degree, 0 ≤ d ≤ 30.
        d: i64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Classify a coords file (Uhlenbeck stratum), a d1-limit file, or a
    /// bubble-sequence file; print the verdict JSON with evidence.
    Classify { input_file: PathBuf },
    /// Apply the quantum Kirwan map to an expression in u and q.
    Kirwan {
        /// Expression such as "u^3" or "q - u^2".
        expression: String,
        /// Rank N of the target C^N (quotient P^{N-1}).
        #[arg(long)]
        n: usize,
    },
    /// Solve a degenerating family after recentring/rescaling each member;
    /// tabulate convergence and the bubbling verdict.
    Sweep {
        /// Family JSON: { "samples": [ { "lambda", "z", "pair" } ] }.
        family_file: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
}

/// Structured failure: exit code plus a machine-readable payload.
pub struct CliError {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl CliError {
    fn new(code: u8, kind: &str, message: impl Into<String>) -> Self {
        CliError {
            code,
            kind: kind.into(),
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(2, "input", message)
    }
}

impl From<VortexError> for CliError {
    fn from(err: VortexError) -> Self {
        let (code, kind) = match &err {
            VortexError::InvalidInput(_) | VortexError::MixedN { .. } => (2, "input"),
            VortexError::InconclusiveTrend | VortexError::EmptyW => (2, "inconclusive"),
            VortexError::RootFindingFailed { .. }
            | VortexError::NewtonStalled { .. }
            | VortexError::LinearSolveFailed { .. }
            | VortexError::BoundaryInvalid
            | VortexError::OracleDiverged { .. } => (3, "solver"),
            VortexError::DerivativeMismatch { .. } | VortexError::EvInfMismatch { .. } => {
                (4, "consistency")
            }
        };
        CliError::new(code, kind, err.to_string())
    }
}


fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve { pair_file, grid } => solve::run(&cli, pair_file, grid),
        Command::Oracle { d, grid } => oracle::run(&cli, *d, grid),
        Command::Classify { input_file } => classify::run(input_file),
        Command::Kirwan { expression, n } => kirwan::run(expression, *n),
        Command::Sweep { family_file, grid } => sweep::run(&cli, family_file, grid),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            println!(
                "{}",
                serde_json::json!({
                    "error": {
                        "code": err.code,
                        "kind": err.kind,
                        "message": err.message,
                    }
                })
            );
            ExitCode::from(err.code)
        }
    }
}

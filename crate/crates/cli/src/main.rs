//! `lateral`: inertia, Schur complements, eigenvalue-branch Hessians and nodal counts
//! on magnetic graphs, from JSON input files.

mod commands;
mod surface;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lateral_core::{Error, ErrorCategory};

#[derive(Parser, Debug)]
#[command(name = "lateral", version, about = "Morse indices of eigenvalue branches under lateral perturbation")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Relative zero tolerance: eigenvalues within tol·max(1, ρ) of zero count as zero.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Finite-difference step (default 1e-4; 1e-3 radians for `graph`).
    #[arg(long, global = true)]
    pub fd_step: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inertia (i₋, i₀, i₊) of a Hermitian matrix, optionally shifted.
    Inertia {
        file: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        shift: f64,
    },
    /// Schur complement M/D, where D is the block on the indices not in --first.
    Schur {
        file: PathBuf,
        /// 0-based indices of the first (kept) block.
        #[arg(long, value_delimiter = ',', required = true)]
        first: Vec<usize>,
    },
    /// Inertia additivity report for a block split.
    Haynsworth {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        first: Vec<usize>,
    },
    /// Spectral shift σ = i₋(S − λ°) − i₋(H₀ − λ°) of a perturbation family.
    Shift { file: PathBuf },
    /// The operator Q and both sides of the index and nullity identities.
    Hessian { file: PathBuf },
    /// Eigenvalues of S + t K₀* Ω K₀ on a grid of t.
    Flow {
        file: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        tmin: f64,
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        tmax: f64,
        #[arg(long, default_value_t = 301)]
        steps: usize,
    },
    /// The branch through λ° on K₀ + s₁K₁ + s₂K₂ over a square grid.
    Surface {
        file: PathBuf,
        /// Direction K₁ (complex matrix JSON); seeded real Gaussian when omitted.
        #[arg(long)]
        dir1: Option<PathBuf>,
        #[arg(long)]
        dir2: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        range: f64,
        /// Odd m ≥ 3; the grid has 2m + 1 points per axis.
        #[arg(long, default_value_t = 5)]
        grid: usize,
    },
    /// Nodal surplus against the Morse index of λₙ(H(α)) at the reference phases.
    Graph {
        file: PathBuf,
        /// 1-based eigenvalue position.
        #[arg(long, conflicts_with = "all")]
        level: Option<usize>,
        #[arg(long)]
        all: bool,
    },
    /// Runs the randomized property suites and prints pass/fail counts.
    Selftest {
        /// Small suite sizes.
        #[arg(long)]
        quick: bool,
        /// Write one random valid perturbation family to this file and exit.
        #[arg(long)]
        write_family: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    /// A core error tied to a location, e.g. a grid point.
    At(String, Error),
    Usage(String),
    Io(std::io::Error),
    /// A theorem check failed on input that meets its hypotheses.
    Falsified(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        let category = |e: &Error| match e.category() {
            ErrorCategory::Parse => 2,
            ErrorCategory::Invariant => 3,
            ErrorCategory::Numerical => 4,
        };
        match self {
            CliError::Core(e) | CliError::At(_, e) => category(e),
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Falsified(_) => 5,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::At(place, e) => write!(f, "{place}: {e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Falsified(m) => write!(f, "theorem check failed: {m}"),
        }
    }
}

/// Output of a command: the text for stdout (or `--out`) and an optional verdict that
/// turns into a nonzero exit after the output is written.
pub struct Emitted {
    pub text: String,
    pub verdict: Result<(), CliError>,
}

impl Emitted {
    pub fn ok(text: String) -> Self {
        Emitted { text, verdict: Ok(()) }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = &cli.config;
    if !(cfg.tol > 0.0 && cfg.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", cfg.tol)));
    }
    if let Some(h) = cfg.fd_step {
        if !(h > 0.0 && h.is_finite()) {
            return Err(CliError::Usage(format!("--fd-step must be positive, got {h}")));
        }
    }
    let emitted = match &cli.command {
        Command::Inertia { file, shift } => commands::inertia(cfg, file, *shift)?,
        Command::Schur { file, first } => commands::schur(cfg, file, first)?,
        Command::Haynsworth { file, first } => commands::haynsworth(cfg, file, first)?,
        Command::Shift { file } => commands::shift(cfg, file)?,
        Command::Hessian { file } => commands::hessian(cfg, file)?,
        Command::Flow { file, tmin, tmax, steps } => commands::flow(cfg, file, *tmin, *tmax, *steps)?,
        Command::Surface { file, dir1, dir2, range, grid } => {
            surface::run(cfg, file, dir1.as_deref(), dir2.as_deref(), *range, *grid)?
        }
        Command::Graph { file, level, all: _ } => commands::graph(cfg, file, *level)?,
        Command::Selftest { quick, write_family } => commands::selftest(cfg, *quick, write_family.as_deref())?,
    };
    match &cfg.out {
        Some(path) => fs::write(path, &emitted.text)?,
        None => std::io::stdout().lock().write_all(emitted.text.as_bytes())?,
    }
    emitted.verdict
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

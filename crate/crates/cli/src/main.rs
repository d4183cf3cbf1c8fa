//! `strata`: trace trajectory structures, build graphs and chord diagrams,
//! query the Stasheff fan and scan parameter slices.

mod commands;
mod config;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use config::RunConfig;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or degenerate input; exit code 2.
    #[error("{0}")]
    Input(String),
    /// A numerical stage failed; exit code 3.
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Input(format!("{}: {e}", path.display()))
    }
}

impl From<strata::Error> for CliError {
    fn from(e: strata::Error) -> Self {
        use strata::Error::*;
        match e {
            DegenerateInput(_)
            | Precondition(_)
            | InvalidCriticalPoint(_)
            | GeneralPositionViolated(_)
            | InconsistentDiagram(_)
            | InvalidDiagonal(..)
            | BudgetExceeded(_) => CliError::Input(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "strata", version, about = "Spectral networks of rational quadratic differentials")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized queries; `STRATA_SEED` overrides the file value.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    step_tolerance: Option<f64>,
    #[arg(long, global = true)]
    capture: Option<f64>,
    #[arg(long, global = true)]
    escape: Option<f64>,
    #[arg(long, global = true)]
    short_tolerance: Option<f64>,
    #[arg(long, global = true)]
    max_steps: Option<usize>,
}

#[derive(Args, Clone)]
pub struct DiffArgs {
    /// Degree of the numerator.
    #[arg(long)]
    pub k: usize,
    /// `a_0 .. a_{k-1}` as "re,im;re,im;...".
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
    #[arg(long, value_enum, default_value_t = FamilyArg::Rational)]
    pub family: FamilyArg,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Rational,
    Polynomial,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum OrientationArg {
    #[value(alias = "horizontal")]
    H,
    #[value(alias = "vertical")]
    V,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Trace critical trajectories; writes structure JSON and SVG.
    Trace {
        #[command(flatten)]
        diff: DiffArgs,
        #[arg(long, value_enum, default_value_t = OrientationArg::H)]
        orientation: OrientationArg,
    },
    /// Admissible graphs of both orientations and the extended graph.
    Graph {
        #[command(flatten)]
        diff: DiffArgs,
    },
    /// Weighted chord diagrams of both orientations.
    Diagram {
        #[command(flatten)]
        diff: DiffArgs,
    },
    /// Triangulations of the (n+1)-gon and faces of the Stasheff fan.
    Stasheff {
        #[arg(long)]
        n: usize,
        /// Number of triangulations (the default query).
        #[arg(long)]
        count: bool,
        /// List every triangulation by its diagonals.
        #[arg(long)]
        list: bool,
        /// Size of the flip graph.
        #[arg(long)]
        flips: bool,
        /// Fan face of a balanced weight given as "f0,f1,...,fn".
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        /// Fan faces of this many seeded random balanced weights.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Scan a two-parameter slice for walls.
    Scan {
        /// Slice specification (JSON).
        #[arg(long, conflicts_with = "demo", required_unless_present = "demo")]
        spec: Option<PathBuf>,
        /// Use the bundled k = 2 demo slice.
        #[arg(long)]
        demo: bool,
        /// Print the specification instead of scanning.
        #[arg(long)]
        print_spec: bool,
    },
    /// Quick end-to-end checks of the library.
    Selftest,
}

fn run_config(g: &GlobalArgs) -> Result<RunConfig, CliError> {
    let mut c = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Ok(s) = std::env::var("STRATA_SEED") {
        c.seed = s
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("STRATA_SEED is not an unsigned integer: {s:?}")))?;
    }
    if let Some(v) = g.seed {
        c.seed = v;
    }
    if let Some(v) = &g.out {
        c.out = v.clone();
    }
    if let Some(v) = g.step_tolerance {
        c.step_tolerance = v;
    }
    if let Some(v) = g.capture {
        c.capture = v;
    }
    if let Some(v) = g.escape {
        c.escape = v;
    }
    if let Some(v) = g.short_tolerance {
        c.short_tolerance = v;
    }
    if let Some(v) = g.max_steps {
        c.max_steps = v;
    }
    c.validate()?;
    Ok(c)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = run_config(&cli.global)?;
    match cli.command {
        Command::Trace { diff, orientation } => commands::trace(&cfg, &diff, orientation),
        Command::Graph { diff } => commands::graph(&cfg, &diff),
        Command::Diagram { diff } => commands::diagram(&cfg, &diff),
        Command::Stasheff { n, count, list, flips, weight, random } => {
            commands::stasheff(&cfg, n, count, list, flips, weight.as_deref(), random)
        }
        Command::Scan { spec, demo: _, print_spec } => commands::scan(&cfg, spec.as_deref(), print_spec),
        Command::Selftest => commands::selftest(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

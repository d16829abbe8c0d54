mod commands;
mod config;
mod error;
mod output;
mod state_file;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use naqc_core::coherence::MeasureKind;

use crate::config::Settings;
use crate::error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "naqc", version, about = "Average local quantum coherence under steering")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// θ grid points for frame optimization
    #[arg(long, global = true)]
    grid_theta: Option<usize>,
    /// φ grid points for frame optimization
    #[arg(long, global = true)]
    grid_phi: Option<usize>,
    /// Density-matrix validation tolerance
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MeasureArg {
    L1,
    Relent,
}

impl MeasureArg {
    pub fn kind(self) -> MeasureKind {
        match self {
            MeasureArg::L1 => MeasureKind::L1,
            MeasureArg::Relent => MeasureKind::RelativeEntropy,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BoundArg {
    Lhs,
    Sqi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Coherence,
    Lhs,
    Sqi,
    Quantum,
    Qudit,
    Mub,
    F,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate S and the pattern decomposition for one state
    Compute {
        /// State file: {"dims": [dA, dB], "matrix": [[[re, im], ...], ...]}
        #[arg(long, conflicts_with = "werner", required_unless_present = "werner")]
        state: Option<PathBuf>,
        /// Werner state with singlet weight P
        #[arg(long, value_name = "P")]
        werner: Option<f64>,
        #[arg(long, value_enum, default_value = "l1")]
        measure: MeasureArg,
        /// Maximize over the measurement frame (two-qubit states)
        #[arg(long)]
        optimize: bool,
        /// distinct, same-setting, j-eq-k, i-eq-k or full
        #[arg(long, default_value = "distinct")]
        pattern: String,
    },
    /// Optimized S along the Werner family, as CSV
    Scan {
        #[arg(long, value_enum, default_value = "l1")]
        measure: MeasureArg,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add the s_ijk_over_2 and s_full_over_9 columns
        #[arg(long)]
        patterns: bool,
    },
    /// Smallest Werner weight violating a bound
    Threshold {
        #[arg(long, value_enum, default_value = "l1")]
        measure: MeasureArg,
        #[arg(long, value_enum, default_value = "lhs")]
        bound: BoundArg,
    },
    /// Randomized checks of the bounds
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Dump a complete family of mutually unbiased bases
    Mub {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Qubit frame polar angle
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
        /// Qubit frame azimuth
        #[arg(long, allow_negative_numbers = true)]
        phi: Option<f64>,
    },
}

fn settings(global: &GlobalOpts) -> CliResult<Settings> {
    let mut s = Settings::load()?;
    if let Some(v) = global.grid_theta {
        s.grid_theta = v;
    }
    if let Some(v) = global.grid_phi {
        s.grid_phi = v;
    }
    if let Some(v) = global.tolerance {
        s.tolerance = v;
    }
    s.check()?;
    Ok(s)
}

fn run(cli: Cli) -> CliResult<()> {
    let mut s = settings(&cli.global)?;
    match cli.command {
        Command::Compute {
            state,
            werner,
            measure,
            optimize,
            pattern,
        } => commands::compute(&s, state.as_deref(), werner, measure, optimize, &pattern),
        Command::Scan {
            measure,
            steps,
            out,
            patterns,
        } => commands::scan(&s, measure, steps, out.as_deref(), patterns),
        Command::Threshold { measure, bound } => commands::threshold(&s, measure, bound),
        Command::Verify {
            suite,
            trials,
            seed,
        } => {
            if let Some(t) = trials {
                s.trials = t;
            }
            if let Some(v) = seed {
                s.seed = v;
            }
            s.check()?;
            verify::run(suite, s.trials, s.seed)
        }
        Command::Mub { dim, theta, phi } => commands::mub(dim, theta, phi),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

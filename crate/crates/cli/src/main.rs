//! `covest`: optimal designs, integral checks, scaling tables and simulations.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use output::Format;

/// Seed used by `simulate` when none is given.
pub const DEFAULT_SEED: u64 = 12345;

#[derive(Debug, Parser)]
#[command(
    name = "covest",
    version,
    about = "Covariant phase and SU(2) estimation"
)]
struct Cli {
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Directory that receives reports when --output is absent.
    #[arg(long, global = true, env = "COVEST_OUT_DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Bdm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    External,
    SelfEntangled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    Phase,
    Su2,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal or sine-profile input for n uses of a phase shift.
    PhaseOpt {
        #[arg(short, long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Optimal block design for n uses of an SU(2) action.
    Su2Design {
        #[arg(short, long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::External)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check the character integrals against their closed forms.
    VerifyIntegrals {
        #[arg(long, default_value_t = 30)]
        kmax: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Monte Carlo replay of an optimal design.
    Simulate {
        #[arg(long, value_enum)]
        protocol: ProtocolArg,
        #[arg(short, long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Reference resources for the SU(2) protocol.
        #[arg(long, value_enum, default_value_t = Mode::External)]
        mode: Mode,
        #[arg(long, default_value_t = covest::sim::DEFAULT_GRID_SIZE)]
        grid_size: usize,
        #[arg(long, default_value_t = covest::sim::DEFAULT_WORKERS)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Errors and asymptotes for n = step, 2·step, …, max_n.
    Scaling {
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verification,
    Io(std::io::Error),
}

impl From<covest::Error> for Failure {
    fn from(e: covest::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let sink = output::Sink::new(cli.output, cli.out_dir);
    let (report, passed) = match cli.command {
        Command::PhaseOpt { n, method, format } => (commands::phase_opt(n, method, format)?, true),
        Command::Su2Design { n, mode, format } => (commands::su2_design(n, mode, format)?, true),
        Command::VerifyIntegrals { kmax, tol, format } => {
            commands::verify_integrals(kmax, tol, format)?
        }
        Command::Simulate {
            protocol,
            n,
            trials,
            seed,
            mode,
            grid_size,
            workers,
            format,
        } => commands::simulate(
            commands::SimulateArgs {
                protocol,
                n,
                trials,
                seed,
                mode,
                grid_size,
                workers,
            },
            format,
        )?,
        Command::Scaling {
            max_n,
            step,
            format,
        } => (commands::scaling(max_n, step, format)?, true),
    };
    sink.emit(&report)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(2),
    }
}

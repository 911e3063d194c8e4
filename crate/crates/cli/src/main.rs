mod check;
mod common;
mod gen;
mod measure;
mod sweep;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use common::{CliResult, EXIT_USAGE};

/// Gaussian-state entanglement toolkit.
///
/// Exit codes: 0 success, 1 usage or i/o, 2 unphysical input, 3 bad
/// partition, 4 numeric failure, 5 property violation.
#[derive(Debug, Parser)]
#[command(name = "gaussent", version)]
struct Cli {
    /// Tolerance override; falls back to $GAUSSENT_TOL, then per-command defaults.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a covariance matrix as CM JSON.
    Gen(gen::GenArgs),
    /// Evaluate one measure on a CM JSON file.
    Measure(measure::MeasureArgs),
    /// Tabulate a measure over a parameter grid as CSV.
    Sweep(sweep::SweepArgs),
    /// Fuzz an invariant over seeded random inputs.
    Check(check::CheckArgs),
}

fn dispatch(cli: &Cli) -> CliResult<u8> {
    match &cli.command {
        Command::Gen(args) => gen::run(args).map(|()| 0),
        Command::Measure(args) => measure::run(args, cli.tol).map(|()| 0),
        Command::Sweep(args) => sweep::run(args).map(|()| 0),
        Command::Check(args) => check::run(args, cli.tol),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}

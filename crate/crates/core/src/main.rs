// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use predsieve::cli::{execute, exit, Experiment};

/// Open-system oscillator dynamics and the predictability sieve.
#[derive(Parser)]
#[command(name = "predsieve", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = "predsieve-out")]
    out: PathBuf,

    /// Exit with status 3 if the run is numerically degraded.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Propagate a Gaussian state under the configured environment.
    Propagate,
    /// Scan squeezed states for minimal entropy production.
    Sieve,
    /// Average the Caldeira-Leggett generator and fit it to the optical master equation.
    AverageCheck,
    /// Certify (or refute) complete positivity of a generator.
    CpCheck,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let experiment = match cli.command {
        Command::Propagate => Experiment::Propagate,
        Command::Sieve => Experiment::Sieve,
        Command::AverageCheck => Experiment::AverageCheck,
        Command::CpCheck => Experiment::CpCheck,
    };
    let Some(config) = cli.config else {
        eprintln!("error: --config <PATH> is required");
        return ExitCode::from(exit::CONFIG);
    };
    ExitCode::from(execute(experiment, &config, &cli.out, cli.strict))
}

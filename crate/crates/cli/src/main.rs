use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use spinstat::report::{self, Command, OutputFormat, RunConfig};

/// Verifies the spin-statistics exchange phase built from rotation operators.
#[derive(Parser, Debug)]
#[command(name = "spinstat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Exchange phase (-1)^{2s} for every 2s up to the maximum.
    PhaseTable(Opts),
    /// Run every invariant suite.
    VerifyAll(Opts),
    /// Tilted spin basis: angle tables, Gram matrices, tilt transfer.
    Tilted(Opts),
}

#[derive(Args, Debug)]
struct Opts {
    /// Largest twice-spin (2s) to cover, at most 16.
    #[arg(long = "twice-spin-max", default_value_t = 8)]
    twice_spin_max: u32,
    /// Pass/fail tolerance.
    #[arg(long = "tol", default_value_t = spinstat::DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random point pairs per spin.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Text => OutputFormat::Text,
        }
    }
}

fn config(command: Command, o: Opts) -> RunConfig {
    RunConfig {
        command,
        twice_spin_max: o.twice_spin_max,
        tolerance: o.tol,
        random_seed: o.seed,
        geometry_trials: o.trials,
        output_path: o.out,
        output_format: o.format.into(),
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let cfg = match cli.command {
        Cmd::PhaseTable(o) => config(Command::PhaseTable, o),
        Cmd::VerifyAll(o) => config(Command::VerifyAll, o),
        Cmd::Tilted(o) => config(Command::Tilted, o),
    };
    let report = report::run(&cfg).with_context(|| format!("{} failed", cfg.command.name()))?;
    let body = report.render(cfg.output_format)?;
    match &cfg.output_path {
        Some(path) => {
            fs::write(path, body).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout()
            .lock()
            .write_all(body.as_bytes())
            .context("writing stdout")?,
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

//! `orlicz`: runs computations, estimates, inequality checks and sweeps from a TOML config.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Command, Overrides, RunConfig};
use error::CliResult;
use output::{unix_now, OutDir};

#[derive(Debug, Parser)]
#[command(
    name = "orlicz",
    version,
    about = "Dual Orlicz functionals: compute, estimate, verify, sweep"
)]
struct Args {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `out` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Root seed; overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated check ids or numbers (verify only).
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    /// Trials per check (verify only).
    #[arg(long)]
    trials: Option<usize>,
    /// Grid resolution; overrides `[grid] resolution`.
    #[arg(long)]
    grid: Option<usize>,
}

fn run(args: Args) -> CliResult<usize> {
    let started = unix_now();
    let mut cfg = RunConfig::load(&args.config)?;
    cfg.apply(Overrides {
        out: args.out,
        seed: args.seed,
        checks: args.checks,
        trials: args.trials,
        grid: args.grid,
    })?;
    let config_text = cfg.to_text()?;
    let mut out = OutDir::create(&cfg.out_dir())?;
    let failures = match cfg.command {
        Command::Compute => commands::compute(&cfg, &mut out)?,
        Command::Estimate => commands::estimate_cmd(&cfg, &mut out)?,
        Command::Verify => commands::verify(&cfg, &mut out)?,
        Command::Sweep => commands::sweep(&cfg, &mut out)?,
    };
    out.finish(cfg.command.name(), cfg.seed, &config_text, started)?;
    Ok(failures)
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failed) => {
            eprintln!("error: {}", error::CliError::ChecksFailed(failed));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod config;
mod error;
mod quotes;
mod table;

use args::Cli;
use error::{CliError, Result};

/// Caps the worker pool at `SABR_THREADS` when set.
fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("SABR_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("SABR_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::usage(format!("configuring {n} threads: {e}")))
}

fn main_inner(cli: Cli) -> Result<()> {
    init_threads()?;
    let config = cli.command.resolve()?;
    if cli.command.common().print_config {
        print!("{}", config.to_toml()?);
        return Ok(());
    }
    commands::run(&config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lsabr: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

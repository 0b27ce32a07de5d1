//! `awave`: batch commands over the awave-core models. Every command is
//! deterministic given its flags and seed. Exit codes: 0 success, 1 a check
//! failed, 2 usage or parameter error.

mod cli;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::commands::{Outcome, UsageError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::BsPrice(a) => commands::bs_price::run(a),
        Command::WaveSurface(a) => commands::wave_surface::run(a),
        Command::Residual(a) => commands::residual::run(a),
        Command::Fit(a) => commands::fit::run(a),
        Command::Manakov(a) => commands::manakov::run(a),
        Command::Hebb(a) => commands::hebb::run(a),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    use awave_core::Error;
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidModulus(_) | Error::InvalidParameter { .. } | Error::LengthMismatch { .. })
        | Some(Error::DerivativeModeUnavailable) => 2,
        _ => 1,
    }
}

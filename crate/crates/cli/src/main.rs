//! `cayley`: command-line front end to the experiment drivers and samplers.

mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e
                .downcast_ref::<cayley_core::Error>()
                .is_some_and(commands::is_usage_error)
                || e.downcast_ref::<commands::UsageError>().is_some();
            ExitCode::from(if usage { 2 } else { 3 })
        }
    }
}

//! `qsphere`: runs the verification suites and dumps plot-ready tables.
//!
//! Exit status is 0 when every report passes, 1 when some verdict is FAIL
//! and 2 for configuration errors.

mod args;
mod dump;
mod output;
mod run;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        None | Some(Command::Run) => run::run(&cli.opts),
        Some(Command::Dump { what, operator }) => {
            dump::dump(&cli.opts, *what, operator).map(|()| true)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

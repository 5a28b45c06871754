//! `eii`: rates, population maps and oracle checks for a strongly driven qubit.
//!
//! Exit codes: 0 ok, 1 numeric failure or oracle disagreement, 2 invalid
//! input, 3 inconclusive oracle.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Rates(a) => commands::rates(&a),
        Command::Pattern(a) => commands::pattern(&a),
        Command::Transient(a) => commands::transient(&a),
        Command::Resonances(a) => commands::resonances(&a),
        Command::Oracle(a) => commands::oracle(&a),
        Command::Scenarios(a) => commands::scenarios(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}

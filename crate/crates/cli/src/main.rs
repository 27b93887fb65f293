//! `webtorsion` command-line front-end.
//!
//! Exit codes: 0 success, 2 input error, 3 evaluation or sampling failure,
//! 4 the reducibility criteria disagree.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Evaluation(String),
    Disagreement(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Evaluation(_) => 3,
            CliError::Disagreement(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Evaluation(m) | CliError::Disagreement(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err((out, err)) => {
            if let Some(out) = out {
                print!("{out}");
            }
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

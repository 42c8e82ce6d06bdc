mod args;
mod commands;
mod output;

use std::fmt;
use std::io;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Exit 1 is reserved for infeasible problems, 2 for bad input.
#[derive(Debug)]
pub enum CliError {
    Infeasible,
    Input(String),
    Io(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn at(path: &Path, e: impl fmt::Display) -> Self {
        CliError::Input(format!("{}: {e}", path.display()))
    }

    pub fn io(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }

    pub fn io_at(path: &Path, e: io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl From<reqsel::Error> for CliError {
    fn from(e: reqsel::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Infeasible) => {
            eprintln!("reqsel: no feasible selection");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("reqsel: error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("reqsel: I/O error: {msg}");
            ExitCode::from(2)
        }
    }
}

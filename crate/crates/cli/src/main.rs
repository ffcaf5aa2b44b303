//! `ramsey`: command-line driver for ramsey-core.
//!
//! Exit statuses: 0 success or PASS, 1 FAIL, 2 INCONCLUSIVE (including an
//! exhausted search budget), 64 usage error.

mod cli;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::cli::Cli;
use crate::config::RunConfig;

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

/// Bad flags, config entries or argument values.
#[derive(Debug)]
pub struct UsageError(pub String);

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(ramsey_core::Error),
    Io(std::io::Error),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<ramsey_core::Error> for Failure {
    fn from(e: ramsey_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        use ramsey_core::Error as E;
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Core(E::Domain { .. } | E::Parse(_)) => EXIT_USAGE,
            Failure::Core(E::Budget(_)) => EXIT_INCONCLUSIVE,
            Failure::Core(_) | Failure::Io(_) => EXIT_FAIL,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage: {m}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

/// Rendered output and the status to exit with.
pub struct Outcome {
    pub body: String,
    pub exit: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let run = || -> Result<u8, Failure> {
        let cfg = RunConfig::resolve(&cli.global)?;
        let out = commands::run(&cli.command, &cfg)?;
        output::emit(&out.body, cfg.output.as_deref())?;
        Ok(out.exit)
    };
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

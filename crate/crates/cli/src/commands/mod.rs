mod bound;
mod clique_demo;
mod crossover;
mod optimize;
mod ramsey_exact;
mod table;
mod verify;

use ramsey_core::bounds::MulticolorTarget;
use ramsey_core::numeric::parse_rational;
use ramsey_core::ExactReal;
use rug::{Float, Rational};

use crate::cli::Command;
use crate::config::RunConfig;
use crate::{Failure, Outcome, UsageError};

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, Failure> {
    match cmd {
        Command::Verify(a) => verify::run(a, cfg),
        Command::Bound(a) => bound::run(a, cfg),
        Command::Table(a) => table::run(a, cfg),
        Command::Optimize(a) => optimize::run(a, cfg),
        Command::Crossover => crossover::run(cfg),
        Command::CliqueDemo(a) => clique_demo::run(a, cfg),
        Command::RamseyExact(a) => ramsey_exact::run(a, cfg),
    }
}

pub(crate) fn rational(flag: &str, s: &str) -> Result<Rational, UsageError> {
    parse_rational(s).map_err(|e| UsageError(format!("--{flag}: {e}")))
}

/// `--l` or `--l-parts` as a target.
pub(crate) fn targets(l: u32, parts: Option<&str>) -> Result<MulticolorTarget, Failure> {
    let parts = match parts {
        None => vec![l],
        Some(s) => s
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| UsageError(format!("--l-parts: expected comma-separated integers, got `{s}`")))?,
    };
    Ok(MulticolorTarget::new(parts)?)
}

/// `digits` significant digits and the precision tag, e.g. `3.79920 (p128)`.
pub(crate) fn real(v: &ExactReal, digits: usize) -> String {
    format!("{:.*}", digits, v)
}

/// A decimal string from a report, shortened, with its precision tag.
pub(crate) fn decimal(value: &str, precision: u32, digits: usize) -> String {
    match Float::parse(value) {
        Ok(p) => real(&ExactReal::new(Float::with_val(precision, p)), digits),
        Err(_) => format!("{value} (p{precision})"),
    }
}

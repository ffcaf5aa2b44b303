use std::fmt::Write;

use ramsey_core::bounds::crossover_exponent;
use ramsey_core::numeric::Point;
use ramsey_core::stage::{correction, rational_to_decimal, stage_profile};
use ramsey_core::{ExactReal, ExponentStage};
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::rational;
use crate::cli::TableArgs;
use crate::config::RunConfig;
use crate::output::{self, Format};
use crate::{Failure, Outcome, UsageError};

const DIGITS: usize = 12;

pub const COLUMNS: [&str; 9] = ["lambda", "F", "Fprime", "G", "M", "X", "Y", "psi", "ratio_exponent"];

/// One λ row; `ratio_exponent` is the growth rate of the two-colour
/// corollary bound over Erdős–Szekeres along `l = λk`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub lambda: String,
    #[serde(rename = "F")]
    pub f: String,
    #[serde(rename = "Fprime")]
    pub fprime: String,
    #[serde(rename = "G")]
    pub g: String,
    #[serde(rename = "M")]
    pub m: String,
    #[serde(rename = "X")]
    pub x: String,
    #[serde(rename = "Y")]
    pub y: String,
    pub psi: String,
    pub ratio_exponent: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub stage: ExponentStage,
    pub rows: Vec<Row>,
}

fn d(v: &ExactReal) -> String {
    v.to_decimal_digits(DIGITS)
}

pub fn run(a: &TableArgs, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let chain = ExponentStage::paper_chain();
    let stage = chain
        .get(a.stage)
        .cloned()
        .ok_or_else(|| UsageError(format!("--stage must be 0..={}", chain.len() - 1)))?;
    let step = rational("grid", &a.grid)?;
    if !(step > 0 && step <= 1) {
        return Err(UsageError("--grid must lie in (0, 1]".into()).into());
    }
    let count = (Rational::from(1) / step.clone()).floor().numer().to_usize().unwrap_or(usize::MAX);
    let prec = cfg.precision;
    let mut rows = Vec::with_capacity(count);
    for i in 1..=count {
        let lam_q = step.clone() * i as u64;
        let lam = ExactReal::from_rational(&lam_q, prec);
        let p = stage_profile(&stage, &lam)?;
        let point = Point(Float::with_val(prec, lam.value()));
        let g = ExactReal::new(correction(&stage.beta, &point).0);
        let ratio = ExactReal::new(crossover_exponent(&point).0);
        rows.push(Row {
            lambda: rational_to_decimal(&lam_q),
            f: d(&p.f),
            fprime: d(&p.fprime),
            g: d(&g),
            m: d(&p.m),
            x: d(&p.x),
            y: d(&p.y),
            psi: d(&p.psi),
            ratio_exponent: d(&ratio),
        });
    }
    let table = Table { stage, rows };
    let body = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => output::csv(&COLUMNS, table.rows.iter().map(fields)),
        Format::Json => output::json("table", cfg.seed, cfg.precision, &table),
        Format::Text => text(&table),
    };
    Ok(Outcome { body, exit: 0 })
}

fn fields(r: &Row) -> [String; 9] {
    [&r.lambda, &r.f, &r.fprime, &r.g, &r.m, &r.x, &r.y, &r.psi, &r.ratio_exponent].map(String::clone)
}

fn text(t: &Table) -> String {
    let mut out = format!(
        "stage {}: alpha = {}, beta = {}\n",
        t.stage.index,
        t.stage.alpha,
        rational_to_decimal(&t.stage.beta)
    );
    let short = |s: &str| s.parse::<f64>().map_or_else(|_| s.to_string(), |v| format!("{v:.6}"));
    let _ = writeln!(out, "{}", COLUMNS.map(|c| format!("{c:>14}")).join(""));
    for r in &t.rows {
        let _ = writeln!(out, "{}", fields(r).map(|c| format!("{:>14}", short(&c))).join(""));
    }
    out
}

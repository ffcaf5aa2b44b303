use std::fmt::Write;

use ramsey_core::region::ProvenAlpha;
use ramsey_core::stage::rational_to_decimal;
use ramsey_core::verifier::{
    paper_chain_pairs, verify_chain, verify_stage, ChainReport, ConditionResult, Margin, VerificationReport,
};
use ramsey_core::{Alpha, ExponentStage};
use rug::Rational;
use serde::{Deserialize, Serialize};

use super::{decimal, rational};
use crate::cli::VerifyArgs;
use crate::config::RunConfig;
use crate::output::{self, Format};
use crate::{Failure, Outcome, UsageError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "report", rename_all = "snake_case")]
pub enum VerifyResult {
    Stage(VerificationReport),
    Chain(ChainReport),
}

fn parse_chain(s: &str) -> Result<Vec<(Alpha, Rational)>, Failure> {
    s.split(',')
        .map(|part| {
            let (a, b) = part
                .trim()
                .rsplit_once(':')
                .ok_or_else(|| UsageError(format!("--chain: expected alpha:beta, got `{part}`")))?;
            Ok((Alpha::parse(a)?, rational("chain", b)?))
        })
        .collect()
}

pub fn run(a: &VerifyArgs, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let format = cfg.format.unwrap_or(Format::Text);
    let result = if let Some(beta) = &a.beta {
        let alpha = Alpha::parse(a.alpha.as_deref().unwrap_or("0"))?;
        let stage = ExponentStage::new(alpha, rational("beta", beta)?, 0)?;
        let report = verify_stage(&stage, &[ProvenAlpha::erdos_szekeres()], &cfg.policy)?;
        VerifyResult::Stage(if cfg.no_timing { report.without_timing() } else { report })
    } else {
        let pairs = match &a.chain {
            Some(s) => parse_chain(s)?,
            None => paper_chain_pairs(),
        };
        let report = verify_chain(&pairs, &cfg.policy)?;
        VerifyResult::Chain(if cfg.no_timing { report.without_timing() } else { report })
    };
    let status = match &result {
        VerifyResult::Stage(r) => r.status,
        VerifyResult::Chain(r) => r.status,
    };
    let body = match format {
        Format::Json => output::json("verify", cfg.seed, cfg.precision, &result),
        Format::Text => text(&result),
        Format::Csv => csv(&result),
    };
    Ok(Outcome {
        body,
        exit: status.exit_code() as u8,
    })
}

fn margin(m: &Option<Margin>) -> String {
    match m {
        Some(m) => format!(
            "{} at lambda in [{}, {}]",
            decimal(&m.value, m.precision, 6),
            short(&m.lambda.lo),
            short(&m.lambda.hi)
        ),
        None => "-".into(),
    }
}

fn short(s: &str) -> String {
    s.parse::<f64>().map_or_else(|_| s.to_string(), |v| format!("{v:.6e}"))
}

fn condition(out: &mut String, name: &str, c: &ConditionResult) {
    let _ = writeln!(out, "  {name:<26} {:<12} {}", c.status.to_string(), c.detail);
}

fn stage_text(out: &mut String, r: &VerificationReport) {
    let _ = writeln!(
        out,
        "stage {}: alpha = {}, beta = {}  {}",
        r.stage_index,
        r.alpha,
        rational_to_decimal(&r.beta),
        r.status
    );
    condition(out, "F' > 0", &r.fprime_positive);
    condition(out, "Y on the proven frontier", &r.condition1_membership);
    condition(out, "psi >= floor", &r.condition2_psi);
    condition(out, "psi' >= floor near 0", &r.near_zero_derivative);
    let _ = writeln!(out, "  psi margin:  {}", margin(&r.psi_margin));
    let _ = writeln!(out, "  psi' margin: {}", margin(&r.psi_prime_margin));
    let _ = writeln!(
        out,
        "  cells: {} ({} main, {} near zero), deepest level {}, {} ms",
        r.subintervals, r.main_subintervals, r.near_subintervals, r.deepest_level, r.wall_time_ms
    );
    if let Some(w) = &r.witness {
        let _ = writeln!(
            out,
            "  witness: {} on lambda in [{}, {}], enclosure [{}, {}]",
            w.quantity,
            short(&w.lambda.lo),
            short(&w.lambda.hi),
            short(&w.enclosure.lo),
            short(&w.enclosure.hi)
        );
    }
    for a in &r.assumptions {
        let _ = writeln!(out, "  assumes: {a}");
    }
}

fn text(result: &VerifyResult) -> String {
    let mut out = String::new();
    match result {
        VerifyResult::Stage(r) => stage_text(&mut out, r),
        VerifyResult::Chain(c) => {
            for s in &c.stages {
                stage_text(&mut out, &s.report);
                if let Some(d) = &s.domination {
                    let _ = writeln!(out, "  hands on alpha = {} ({})", d.alpha, d.status);
                }
            }
            if let Some(b) = &c.diagonal_base {
                let _ = writeln!(out, "diagonal base: {}", decimal(&b.value, b.precision, 8));
            }
            let _ = writeln!(out, "chain: {} ({} ms)", c.status, c.wall_time_ms);
        }
    }
    out
}

fn row(r: &VerificationReport, domination: String) -> Vec<String> {
    let m = |m: &Option<Margin>| m.as_ref().map(|m| m.value.clone()).unwrap_or_default();
    vec![
        r.stage_index.to_string(),
        r.alpha.to_string(),
        rational_to_decimal(&r.beta),
        r.status.to_string(),
        m(&r.psi_margin),
        m(&r.psi_prime_margin),
        r.subintervals.to_string(),
        domination,
        r.wall_time_ms.to_string(),
    ]
}

fn csv(result: &VerifyResult) -> String {
    let header = [
        "stage",
        "alpha",
        "beta",
        "status",
        "psi_margin",
        "psi_prime_margin",
        "subintervals",
        "domination",
        "wall_time_ms",
    ];
    let rows: Vec<Vec<String>> = match result {
        VerifyResult::Stage(r) => vec![row(r, String::new())],
        VerifyResult::Chain(c) => c
            .stages
            .iter()
            .map(|s| row(&s.report, s.domination.as_ref().map(|d| d.status.to_string()).unwrap_or_default()))
            .collect(),
    };
    output::csv(&header, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_flag_parses() {
        let c = parse_chain("0:0.08, 0.09/e:0.045").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[1].0, Alpha::from_beta(&Rational::from((8, 100))));
        assert_eq!(c[1].1, Rational::from((45, 1000)));
        assert!(parse_chain("0").is_err());
    }
}

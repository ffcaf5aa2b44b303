use std::fmt::Write;

use ramsey_core::optimizer::{piecewise_explore, run_iteration, FitMode, IterationTrace, PiecewiseExploration, StopReason};
use ramsey_core::stage::rational_to_decimal;
use serde::{Deserialize, Serialize};

use super::{decimal, rational};
use crate::cli::{FitArg, OptimizeArgs};
use crate::config::RunConfig;
use crate::output::{self, Format};
use crate::{Failure, Outcome, EXIT_FAIL};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "result", rename_all = "snake_case")]
pub enum OptimizeResult {
    Iteration(IterationTrace),
    Piecewise(PiecewiseExploration),
}

pub fn run(a: &OptimizeArgs, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let format = cfg.format.unwrap_or(Format::Text);
    if let Some(n) = a.piecewise {
        let mode = match a.fit {
            FitArg::BetaOnly => FitMode::BetaOnly,
            FitArg::Free => FitMode::Free,
        };
        let e = piecewise_explore(n, a.slope_grid, a.m_grid, mode)?;
        let body = match format {
            Format::Csv => e.profile.to_csv(),
            Format::Json => output::json("optimize", cfg.seed, cfg.precision, OptimizeResult::Piecewise(e)),
            Format::Text => piecewise_text(&e),
        };
        return Ok(Outcome { body, exit: 0 });
    }
    let resolution = rational("resolution", &a.resolution)?;
    let mut trace = run_iteration(a.stages, &resolution, &cfg.policy)?;
    if cfg.no_timing {
        trace = trace.without_timing();
    }
    let exit = if trace.stages.is_empty() { EXIT_FAIL } else { 0 };
    let body = match format {
        Format::Json => output::json("optimize", cfg.seed, cfg.precision, OptimizeResult::Iteration(trace)),
        Format::Csv => output::csv(
            &["stage", "alpha", "beta", "psi_margin", "psi_prime_margin", "domination", "wall_time_ms"],
            trace.stages.iter().enumerate().map(|(i, s)| {
                let m = |m: &Option<ramsey_core::verifier::Margin>| m.as_ref().map(|m| m.value.clone()).unwrap_or_default();
                [
                    i.to_string(),
                    s.alpha.to_string(),
                    rational_to_decimal(&s.beta),
                    m(&s.report.psi_margin),
                    m(&s.report.psi_prime_margin),
                    s.domination.status.to_string(),
                    s.report.wall_time_ms.to_string(),
                ]
            }),
        ),
        Format::Text => trace_text(&trace),
    };
    Ok(Outcome { body, exit })
}

fn trace_text(t: &IterationTrace) -> String {
    let mut out = String::new();
    for (i, s) in t.stages.iter().enumerate() {
        let margin = s
            .report
            .psi_margin
            .as_ref()
            .map(|m| decimal(&m.value, m.precision, 4))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "stage {i}: alpha = {:<10} beta = {:<8} psi margin {margin}",
            s.alpha.to_string(),
            rational_to_decimal(&s.beta)
        );
    }
    let stop = match t.stop_reason {
        StopReason::Converged => "converged",
        StopReason::MaxStages => "max stages",
        StopReason::VerificationFailure => "verification failure",
    };
    let _ = writeln!(out, "stopped: {stop}");
    if let Some(f) = &t.failure {
        let _ = writeln!(out, "  {f}");
    }
    if let Some(b) = &t.diagonal_base {
        let _ = writeln!(out, "diagonal base: {}", decimal(&b.value, b.precision, 8));
    }
    let _ = writeln!(out, "{} ms", t.wall_time_ms);
    out
}

fn piecewise_text(e: &PiecewiseExploration) -> String {
    let p = &e.profile;
    let mut out = format!("N = {} (exploratory, floating point)\n", p.n);
    let _ = writeln!(out, "{:>10}{:>14}{:>12}{:>12}", "lambda", "F", "slope", "M");
    for i in 0..=p.n {
        let (s, m) = match (p.slopes.get(i), p.m.get(i)) {
            (Some(s), Some(m)) => (format!("{s:.4}"), format!("{m:.4}")),
            _ => (String::new(), String::new()),
        };
        let _ = writeln!(out, "{:>10.4}{:>14.8}{s:>12}{m:>12}", p.breakpoints[i], p.f[i]);
    }
    let _ = writeln!(out, "e^F(1) = {:.6}", e.diagonal_value);
    let _ = writeln!(out, "min psi on the check grid = {:.3e}", e.min_slack);
    let f = &e.fit;
    let _ = writeln!(
        out,
        "fit ({:?}): linear {:.5}, beta {:.5}, cubic {:.5}; max gap {:.2e}, base {:.6}",
        f.mode, f.linear, f.beta, f.cubic, f.max_gap, f.diagonal_base
    );
    out
}

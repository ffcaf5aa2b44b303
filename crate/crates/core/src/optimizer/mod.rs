//! Parameter search over stages: the smallest verifiable `β` for a proven
//! `α`, the iteration that feeds each `β` back as the next `α`, and an
//! uncertified piecewise exploration of the exponent function.

mod piecewise;

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;
use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{DecimalValue, DEFAULT_PRECISION};
use crate::region::ProvenAlpha;
use crate::stage::{beta_max, diagonal_base_for_beta, rational_string, rational_to_decimal, Alpha, ExponentStage};
use crate::verifier::{verify_linear_domination, verify_stage, DominationReport, Status, VerificationPolicy, VerificationReport};

pub use piecewise::{piecewise_explore, FitMode, PiecewiseExploration, PiecewiseProfile, SmoothFit};

/// `(0.17 − β)/e`. Admitting the result as proven additionally needs
/// [`verify_linear_domination`] to pass, which [`run_iteration`] does.
pub fn alpha_from_beta(beta: &Rational) -> Result<Alpha> {
    check_beta("alpha_from_beta", beta)?;
    Ok(Alpha::from_beta(beta))
}

fn check_beta(op: &'static str, beta: &Rational) -> Result<()> {
    if beta.cmp0() == Ordering::Less || *beta > beta_max() {
        return Err(Error::domain(op, format!("beta = {} outside [0, 0.1]", rational_to_decimal(beta))));
    }
    Ok(())
}

/// Coarse grid spacing before bisection.
const COARSE_STEP: (u32, u32) = (1, 100);

struct BetaSearch {
    beta: Rational,
    report: VerificationReport,
}

fn beta_grid(resolution: &Rational) -> Result<Vec<Rational>> {
    if resolution.cmp0() != Ordering::Greater || *resolution > beta_max() {
        return Err(Error::domain("search_min_beta", "resolution must lie in (0, 0.1]"));
    }
    let max = beta_max();
    let steps = (max.clone() / resolution.clone()).floor().into_numer_denom().0;
    let steps = steps.to_u32().ok_or_else(|| Error::domain("search_min_beta", "resolution too fine"))?;
    let mut grid: Vec<Rational> = (0..=steps).map(|k| resolution.clone() * k).collect();
    if grid.last() != Some(&max) {
        grid.push(max);
    }
    Ok(grid)
}

fn stage_passes(alpha: &ProvenAlpha, beta: &Rational, index: usize, policy: &VerificationPolicy) -> Result<VerificationReport> {
    let stage = ExponentStage::new(alpha.alpha.clone(), beta.clone(), index)?;
    let proven = [ProvenAlpha::erdos_szekeres(), alpha.clone()];
    verify_stage(&stage, &proven, policy)
}

fn search(alpha: &ProvenAlpha, resolution: &Rational, policy: &VerificationPolicy, index: usize) -> Result<BetaSearch> {
    policy.validate()?;
    let grid = beta_grid(resolution)?;
    let coarse = Rational::from(COARSE_STEP);
    let stride = (coarse / resolution.clone()).round().into_numer_denom().0.to_usize().unwrap_or(1).max(1);
    let mut coarse_idx: Vec<usize> = (0..grid.len()).step_by(stride).collect();
    if coarse_idx.last() != Some(&(grid.len() - 1)) {
        coarse_idx.push(grid.len() - 1);
    }
    let reports: Vec<VerificationReport> = coarse_idx
        .par_iter()
        .map(|&i| stage_passes(alpha, &grid[i], index, policy))
        .collect::<Result<_>>()?;
    let Some(first) = reports.iter().position(|r| r.status == Status::Pass) else {
        return Err(Error::Infeasible(format!(
            "no beta in [0, 0.1] passes for alpha = {}",
            alpha.alpha
        )));
    };
    let mut hi = coarse_idx[first];
    let mut best = reports[first].clone();
    if first > 0 {
        let mut lo = coarse_idx[first - 1];
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            let r = stage_passes(alpha, &grid[mid], index, policy)?;
            if r.status == Status::Pass {
                hi = mid;
                best = r;
            } else {
                lo = mid;
            }
        }
    }
    Ok(BetaSearch {
        beta: grid[hi].clone(),
        report: best,
    })
}

/// Smallest `β` on `{0, r, 2r, …, 0.1}` whose stage with this `α` passes:
/// a coarse grid evaluated in parallel, then bisection between the last
/// failing and first passing coarse points.
pub fn search_min_beta(alpha: &ProvenAlpha, resolution: &Rational, policy: &VerificationPolicy) -> Result<Rational> {
    search(alpha, resolution, policy, 0).map(|s| s.beta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    MaxStages,
    VerificationFailure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStage {
    pub alpha: Alpha,
    #[serde(with = "rational_string")]
    pub beta: Rational,
    pub report: VerificationReport,
    pub domination: DominationReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub stages: Vec<TraceStage>,
    pub stop_reason: StopReason,
    /// Present when the stop was a verification failure.
    pub failure: Option<String>,
    pub diagonal_base: Option<DecimalValue>,
    pub wall_time_ms: u64,
}

impl IterationTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn betas(&self) -> Vec<Rational> {
        self.stages.iter().map(|s| s.beta.clone()).collect()
    }

    pub fn diagonal_base_f64(&self) -> Option<f64> {
        self.diagonal_base.as_ref().and_then(|d| d.value.parse().ok())
    }

    pub fn without_timing(&self) -> Self {
        let mut t = self.clone();
        t.wall_time_ms = 0;
        for s in &mut t.stages {
            s.report.wall_time_ms = 0;
        }
        t
    }
}

/// Alternates [`search_min_beta`] and the `α` hand-off from `α = 0`, stopping
/// once `β` drops by less than `resolution` or after `max_stages` stages.
pub fn run_iteration(max_stages: usize, resolution: &Rational, policy: &VerificationPolicy) -> Result<IterationTrace> {
    if max_stages == 0 {
        return Err(Error::domain("run_iteration", "max_stages must be at least 1"));
    }
    beta_grid(resolution)?;
    policy.validate()?;
    let start = Instant::now();
    let mut stages: Vec<TraceStage> = Vec::new();
    let mut alpha = ProvenAlpha::erdos_szekeres();
    let mut stop = StopReason::MaxStages;
    let mut failure = None;
    for i in 0..max_stages {
        let found = match search(&alpha, resolution, policy, i) {
            Ok(f) => f,
            Err(Error::Infeasible(msg)) => {
                stop = StopReason::VerificationFailure;
                failure = Some(msg);
                break;
            }
            Err(e) => return Err(e),
        };
        if let Some(prev) = stages.last() {
            if found.beta >= prev.beta {
                stop = StopReason::Converged;
                break;
            }
        }
        let domination = verify_linear_domination(&found.beta)?;
        if domination.status != Status::Pass {
            stop = StopReason::VerificationFailure;
            failure = Some(format!(
                "linear domination {} for beta = {}",
                domination.status,
                rational_to_decimal(&found.beta)
            ));
            break;
        }
        let converged = stages
            .last()
            .is_some_and(|prev| prev.beta.clone() - found.beta.clone() < *resolution);
        let next = ProvenAlpha::from_stage(domination.alpha.clone(), i);
        stages.push(TraceStage {
            alpha: alpha.alpha.clone(),
            beta: found.beta,
            report: found.report,
            domination,
        });
        alpha = next;
        if converged {
            stop = StopReason::Converged;
            break;
        }
    }
    let diagonal_base = match stages.last() {
        Some(s) => Some(diagonal_base_for_beta(&s.beta, DEFAULT_PRECISION)?.to_json()),
        None => None,
    };
    Ok(IterationTrace {
        stages,
        stop_reason: stop,
        failure,
        diagonal_base,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

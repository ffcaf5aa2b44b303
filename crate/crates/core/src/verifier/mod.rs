//! Interval certification of the feasibility conditions for one stage.
//!
//! `[λ_min, 1]` is covered by a fixed grid of cells, each refined by
//! depth-first bisection until its condition holds on the whole cell. On
//! `[0.05, 1]` the condition is `ψ >= psi_floor_main`; on `[λ_min, 0.05]` it is
//! `ψ' >= psi_prime_floor`, plus a point check of `ψ(λ_min)`. Every accepted
//! cell also certifies `F' > 0`, `X ∈ (0, 1)` and `Y ∈ (0, 1]`.

mod chain;
mod domination;
mod enclosure;

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;
use rug::float::Round;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{IntervalRecord, Interval, DEFAULT_PRECISION};
use crate::region::ProvenAlpha;
use crate::stage::{evaluate, fprime, rational_string, Alpha, ExponentStage, ProfileFailure};

pub use chain::{check_linkage, paper_chain_pairs, verify_chain, ChainReport, ChainStage};
pub use domination::{verify_linear_domination, DominationReport};
pub use enclosure::{enclose_profile, enclose_profile_dual, enclose_psi, enclose_psi_prime};

/// Floors, the near-zero cut-off and the refinement budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationPolicy {
    #[serde(with = "rational_string")]
    pub psi_floor_main: Rational,
    #[serde(with = "rational_string")]
    pub psi_prime_floor: Rational,
    #[serde(with = "rational_string")]
    pub lambda_min: Rational,
    /// Where the ψ′ region hands over to the ψ region.
    #[serde(with = "rational_string")]
    pub split_point: Rational,
    pub max_depth: u32,
    /// Total bisection cells across the whole stage.
    pub max_cells: usize,
    pub precision: u32,
}

impl Default for VerificationPolicy {
    fn default() -> Self {
        VerificationPolicy {
            psi_floor_main: Rational::from((1, 10_000)),
            psi_prime_floor: Rational::from((1, 100)),
            lambda_min: Rational::from((1, 1_000_000)),
            split_point: Rational::from((1, 20)),
            max_depth: 60,
            max_cells: 2_000_000,
            precision: DEFAULT_PRECISION,
        }
    }
}

impl VerificationPolicy {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::domain("VerificationPolicy", m.to_string()));
        if self.psi_floor_main.cmp0() != Ordering::Greater || self.psi_prime_floor.cmp0() != Ordering::Greater {
            return bad("floors must be positive");
        }
        if self.lambda_min.cmp0() != Ordering::Greater || self.lambda_min >= self.split_point {
            return bad("lambda_min must lie in (0, split_point)");
        }
        if self.split_point >= 1 {
            return bad("split_point must be below 1");
        }
        if self.max_depth == 0 || self.max_cells == 0 {
            return bad("max_depth and max_cells must be positive");
        }
        if self.precision < 53 {
            return bad("precision must be at least 53 bits");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    /// 0 PASS, 1 FAIL, 2 INCONCLUSIVE.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }

    fn worst(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Pass,
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    FprimePositive,
    Condition1Membership,
    Condition2Psi,
    NearZeroDerivative,
}

/// A λ-interval on which a condition is violated or unresolved, with the
/// enclosure of the quantity checked there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub condition: Condition,
    pub lambda: IntervalRecord,
    pub quantity: String,
    pub enclosure: IntervalRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub status: Status,
    pub detail: String,
}

/// Lower bound of a certified quantity and the cell where it is attained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Margin {
    pub value: String,
    pub precision: u32,
    pub lambda: IntervalRecord,
}

impl Margin {
    pub fn to_f64(&self) -> f64 {
        self.value.parse().unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub stage_index: usize,
    pub alpha: Alpha,
    #[serde(with = "rational_string")]
    pub beta: Rational,
    pub policy: VerificationPolicy,
    pub status: Status,
    pub fprime_positive: ConditionResult,
    pub condition1_membership: ConditionResult,
    pub condition2_psi: ConditionResult,
    pub near_zero_derivative: ConditionResult,
    /// Certified lower bound of ψ on `[split_point, 1]`.
    pub psi_margin: Option<Margin>,
    /// Certified lower bound of ψ′ on `[λ_min, split_point]`.
    pub psi_prime_margin: Option<Margin>,
    pub psi_at_lambda_min: Option<IntervalRecord>,
    pub subintervals: usize,
    pub main_subintervals: usize,
    pub near_subintervals: usize,
    pub deepest_level: u32,
    pub witness: Option<Witness>,
    /// Statements the certificate relies on but does not check.
    pub assumptions: Vec<String>,
    pub wall_time_ms: u64,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report with its timing zeroed, for run-to-run comparison.
    pub fn without_timing(&self) -> Self {
        VerificationReport {
            wall_time_ms: 0,
            ..self.clone()
        }
    }
}

/// The uncertified part of `(0, λ_min)` and the asymptotic argument covering it.
pub(crate) fn near_zero_assumption(alpha: &Alpha) -> String {
    let tail = if alpha.is_zero() {
        "with alpha = 0 the lambda*ln(lambda) terms cancel and psi'(lambda) tends to a finite limit of about 0.020957"
    } else {
        "with alpha > 0, psi'(lambda) ~ -(1/2) ln(lambda) -> +inf"
    };
    format!("psi' >= psi_prime_floor on (0, lambda_min) is not certified; it rests on psi(0) = 0 and the asymptotics: {tail}")
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Region {
    Main,
    Near,
}

enum Verdict {
    Accept(Interval),
    Split(Condition),
    Fail(Witness),
}

fn witness(condition: Condition, lam: &Interval, quantity: &str, enclosure: &Interval) -> Witness {
    Witness {
        condition,
        lambda: lam.into(),
        quantity: quantity.to_string(),
        enclosure: enclosure.into(),
    }
}

fn at_least(i: &Interval, q: &Rational) -> bool {
    *i.lo() >= *q
}

fn below(i: &Interval, q: &Rational) -> bool {
    *i.hi() < *q
}

fn fprime_verdict(stage: &ExponentStage, lam: &Interval) -> Verdict {
    let fp = fprime(&stage.beta, lam);
    if below(&fp, &Rational::new()) {
        Verdict::Fail(witness(Condition::FprimePositive, lam, "F'", &fp))
    } else {
        Verdict::Split(Condition::FprimePositive)
    }
}

/// `X ∈ (0, 1)`, `Y ∈ (0, 1]`: `None` when certified.
fn membership_verdict(lam: &Interval, x: &Interval, y: &Interval) -> Option<Verdict> {
    let zero = Rational::new();
    let one = Rational::from(1);
    if *x.hi() <= 0 || *x.lo() >= 1 {
        return Some(Verdict::Fail(witness(Condition::Condition1Membership, lam, "X", x)));
    }
    if *y.hi() <= 0 || *y.lo() > 1 {
        return Some(Verdict::Fail(witness(Condition::Condition1Membership, lam, "Y", y)));
    }
    let x_ok = *x.lo() > zero && *x.hi() < one;
    let y_ok = *y.lo() > zero && *y.hi() <= one;
    (!(x_ok && y_ok)).then_some(Verdict::Split(Condition::Condition1Membership))
}

fn main_cell(stage: &ExponentStage, lam: &Interval, floor: &Rational) -> Verdict {
    let profile = match evaluate(stage, lam) {
        Ok(p) => p,
        Err(ProfileFailure::FprimeNotPositive) => return fprime_verdict(stage, lam),
        Err(ProfileFailure::BranchStraddle) => return Verdict::Split(Condition::Condition2Psi),
    };
    if let Some(v) = membership_verdict(lam, &profile.x, &profile.y) {
        return v;
    }
    let mut psi = profile.psi;
    if !at_least(&psi, floor) && !below(&psi, floor) {
        psi = enclosure::tighten_psi(stage, lam, psi);
    }
    if at_least(&psi, floor) {
        Verdict::Accept(psi)
    } else if below(&psi, floor) {
        Verdict::Fail(witness(Condition::Condition2Psi, lam, "psi < psi_floor_main", &psi))
    } else {
        Verdict::Split(Condition::Condition2Psi)
    }
}

fn near_cell(stage: &ExponentStage, lam: &Interval, floor: &Rational) -> Verdict {
    let profile = match evaluate(stage, &crate::numeric::Dual::variable(lam.clone())) {
        Ok(p) => p,
        Err(ProfileFailure::FprimeNotPositive) => return fprime_verdict(stage, lam),
        Err(ProfileFailure::BranchStraddle) => return Verdict::Split(Condition::NearZeroDerivative),
    };
    if let Some(v) = membership_verdict(lam, &profile.x.v, &profile.y.v) {
        return v;
    }
    let mut d = profile.psi.d;
    if !at_least(&d, floor) && !below(&d, floor) {
        d = enclosure::tighten_psi_prime(stage, lam, d);
    }
    if at_least(&d, floor) {
        Verdict::Accept(d)
    } else if below(&d, floor) {
        Verdict::Fail(witness(
            Condition::NearZeroDerivative,
            lam,
            "psi' < psi_prime_floor",
            &d,
        ))
    } else {
        Verdict::Split(Condition::NearZeroDerivative)
    }
}

#[derive(Default)]
struct CellRun {
    accepted: usize,
    deepest: u32,
    margin: Option<(Interval, Interval)>,
    failure: Option<Witness>,
    unresolved: Option<Witness>,
    budget_hit: bool,
}

impl CellRun {
    fn merge(&mut self, other: CellRun) {
        self.accepted += other.accepted;
        self.deepest = self.deepest.max(other.deepest);
        if let Some((q, lam)) = other.margin {
            let replace = match &self.margin {
                Some((cur, _)) => q.lo() < cur.lo(),
                None => true,
            };
            if replace {
                self.margin = Some((q, lam));
            }
        }
        if self.failure.is_none() {
            self.failure = other.failure;
        }
        if self.unresolved.is_none() {
            self.unresolved = other.unresolved;
        }
        self.budget_hit |= other.budget_hit;
    }
}

fn refine(
    stage: &ExponentStage,
    region: Region,
    root: Interval,
    floor: &Rational,
    policy: &VerificationPolicy,
    budget: usize,
) -> CellRun {
    let mut run = CellRun::default();
    let mut stack = vec![(root.clone(), 0u32)];
    let mut processed = 0usize;
    while let Some((lam, depth)) = stack.pop() {
        if processed >= budget {
            run.budget_hit = true;
            break;
        }
        processed += 1;
        run.deepest = run.deepest.max(depth);
        let verdict = match region {
            Region::Main => main_cell(stage, &lam, floor),
            Region::Near => near_cell(stage, &lam, floor),
        };
        match verdict {
            Verdict::Accept(q) => {
                run.accepted += 1;
                let replace = match &run.margin {
                    Some((cur, _)) => q.lo() < cur.lo(),
                    None => true,
                };
                if replace {
                    run.margin = Some((q, lam));
                }
            }
            Verdict::Fail(w) => {
                let hunt = matches!(w.condition, Condition::Condition2Psi | Condition::NearZeroDerivative)
                    && w.enclosure.to_interval().map_or(false, |e| *e.hi() >= 0);
                run.failure = Some(w);
                if hunt {
                    let left = budget.saturating_sub(processed).min(HUNT_CELLS);
                    if let Some(w) = hunt_negative(stage, region, root, 0, policy, left) {
                        run.failure = Some(w);
                    }
                }
                break;
            }
            Verdict::Split(condition) => {
                if depth >= policy.max_depth {
                    if run.unresolved.is_none() {
                        let q = unresolved_enclosure(stage, region, &lam);
                        run.unresolved = Some(witness(condition, &lam, "unresolved at max_depth", &q));
                    }
                    continue;
                }
                let (left, right) = lam.bisect();
                stack.push((right, depth + 1));
                stack.push((left, depth + 1));
            }
        }
    }
    run
}

const HUNT_CELLS: usize = 4096;

/// After a floor failure, looks for a cell where the quantity itself is
/// negative within the same initial cell.
fn hunt_negative(
    stage: &ExponentStage,
    region: Region,
    lam: Interval,
    depth: u32,
    policy: &VerificationPolicy,
    budget: usize,
) -> Option<Witness> {
    let (condition, name) = match region {
        Region::Main => (Condition::Condition2Psi, "psi < 0"),
        Region::Near => (Condition::NearZeroDerivative, "psi' < 0"),
    };
    let mut stack = vec![(lam, depth)];
    let mut processed = 0;
    while let Some((lam, depth)) = stack.pop() {
        if processed >= budget {
            return None;
        }
        processed += 1;
        let q = unresolved_enclosure(stage, region, &lam);
        if *q.lo() >= 0 {
            continue;
        }
        if *q.hi() < 0 {
            return Some(witness(condition, &lam, name, &q));
        }
        if depth < policy.max_depth {
            let (l, r) = lam.bisect();
            stack.push((r, depth + 1));
            stack.push((l, depth + 1));
        }
    }
    None
}

fn unresolved_enclosure(stage: &ExponentStage, region: Region, lam: &Interval) -> Interval {
    let r = match region {
        Region::Main => enclose_psi(stage, lam),
        Region::Near => enclose_psi_prime(stage, lam),
    };
    r.unwrap_or_else(|_| Interval::entire(lam.prec()))
}

const MAIN_GRID: usize = 64;

/// Equal cells on the main region, geometric cells (ratio 2) on the near one,
/// sharing exact endpoints.
fn initial_cells(policy: &VerificationPolicy) -> Vec<(Region, Interval)> {
    let p = policy.precision;
    let split_lo = Float::with_val_round(p, &policy.split_point, Round::Down).0;
    let split_hi = Float::with_val_round(p, &policy.split_point, Round::Up).0;
    let lam_min = Float::with_val_round(p, &policy.lambda_min, Round::Down).0;
    let mut cells = Vec::new();

    let mut near_edges = vec![lam_min.clone()];
    loop {
        let next = Float::with_val(p, near_edges.last().expect("nonempty") * 2u32);
        if next >= split_hi {
            break;
        }
        near_edges.push(next);
    }
    near_edges.push(split_hi);
    for w in near_edges.windows(2) {
        cells.push((Region::Near, Interval::new(w[0].clone(), w[1].clone())));
    }

    let one = Float::with_val(p, 1);
    let step = Float::with_val(p, &one - &split_lo) / MAIN_GRID as u32;
    let mut lo = split_lo.clone();
    for i in 1..=MAIN_GRID {
        let hi = if i == MAIN_GRID {
            one.clone()
        } else {
            Float::with_val(p, &step * i as u32) + &split_lo
        };
        cells.push((Region::Main, Interval::new(lo, hi.clone())));
        lo = hi;
    }
    cells
}

fn margin_record(m: &Option<(Interval, Interval)>) -> Option<Margin> {
    m.as_ref().map(|(q, lam)| Margin {
        value: q.lo().to_string_radix(10, None),
        precision: q.prec(),
        lambda: lam.into(),
    })
}

/// Certifies the stage's conditions on `[λ_min, 1]`.
pub fn verify_stage(
    stage: &ExponentStage,
    proven: &[ProvenAlpha],
    policy: &VerificationPolicy,
) -> Result<VerificationReport> {
    policy.validate()?;
    let start = Instant::now();
    let mut report = VerificationReport {
        stage_index: stage.index,
        alpha: stage.alpha.clone(),
        beta: stage.beta.clone(),
        policy: policy.clone(),
        status: Status::Inconclusive,
        fprime_positive: not_evaluated(),
        condition1_membership: not_evaluated(),
        condition2_psi: not_evaluated(),
        near_zero_derivative: not_evaluated(),
        psi_margin: None,
        psi_prime_margin: None,
        psi_at_lambda_min: None,
        subintervals: 0,
        main_subintervals: 0,
        near_subintervals: 0,
        deepest_level: 0,
        witness: None,
        assumptions: vec![near_zero_assumption(&stage.alpha)],
        wall_time_ms: 0,
    };

    let alpha_proven = stage.alpha.is_zero() || proven.iter().any(|p| p.alpha == stage.alpha);
    if !alpha_proven {
        report.condition1_membership = ConditionResult {
            status: Status::Fail,
            detail: format!("alpha = {} is not in the proven set; Y is not a certified frontier", stage.alpha),
        };
        report.status = Status::Fail;
        report.wall_time_ms = start.elapsed().as_millis() as u64;
        return Ok(report);
    }

    let cells = initial_cells(policy);
    let budget = policy.max_cells.div_ceil(cells.len()).max(1);
    let runs: Vec<(Region, CellRun)> = cells
        .into_par_iter()
        .map(|(region, lam)| {
            let floor = match region {
                Region::Main => &policy.psi_floor_main,
                Region::Near => &policy.psi_prime_floor,
            };
            (region, refine(stage, region, lam, floor, policy, budget))
        })
        .collect();

    let mut main = CellRun::default();
    let mut near = CellRun::default();
    for (region, run) in runs {
        match region {
            Region::Main => main.merge(run),
            Region::Near => near.merge(run),
        }
    }

    report.main_subintervals = main.accepted;
    report.near_subintervals = near.accepted;
    report.subintervals = main.accepted + near.accepted;
    report.deepest_level = main.deepest.max(near.deepest);
    report.psi_margin = margin_record(&main.margin);
    report.psi_prime_margin = margin_record(&near.margin);

    // ψ(λ_min) > −psi_prime_floor·λ_min.
    let lam_min = Interval::point(Float::with_val_round(policy.precision, &policy.lambda_min, Round::Down).0);
    let mut endpoint_failure = None;
    let mut endpoint_unresolved = None;
    match enclose_psi(stage, &lam_min) {
        Ok(psi0) => {
            let bound = Interval::from_rational(&(-policy.psi_prime_floor.clone()), policy.precision)
                .mul(&lam_min);
            if psi0.lo() > bound.hi() {
                // certified
            } else if psi0.hi() <= bound.lo() {
                endpoint_failure = Some(witness(Condition::NearZeroDerivative, &lam_min, "psi(lambda_min)", &psi0));
            } else {
                endpoint_unresolved =
                    Some(witness(Condition::NearZeroDerivative, &lam_min, "psi(lambda_min)", &psi0));
            }
            report.psi_at_lambda_min = Some((&psi0).into());
        }
        Err(_) => {
            endpoint_unresolved = Some(witness(
                Condition::NearZeroDerivative,
                &lam_min,
                "psi(lambda_min)",
                &Interval::entire(policy.precision),
            ));
        }
    }

    let failures: Vec<Witness> = [main.failure.clone(), near.failure.clone(), endpoint_failure]
        .into_iter()
        .flatten()
        .collect();
    let unresolved: Vec<Witness> = [main.unresolved.clone(), near.unresolved.clone(), endpoint_unresolved]
        .into_iter()
        .flatten()
        .collect();
    let complete = failures.is_empty() && !main.budget_hit && !near.budget_hit;

    let condition_status = |c: Condition, region_complete: bool| -> ConditionResult {
        if let Some(w) = failures.iter().find(|w| w.condition == c) {
            return ConditionResult {
                status: Status::Fail,
                detail: format!("{} violated on lambda in [{}, {}]", w.quantity, w.lambda.lo, w.lambda.hi),
            };
        }
        if let Some(w) = unresolved.iter().find(|w| w.condition == c) {
            return ConditionResult {
                status: Status::Inconclusive,
                detail: format!("unresolved on lambda in [{}, {}]", w.lambda.lo, w.lambda.hi),
            };
        }
        if !region_complete {
            return ConditionResult {
                status: Status::Inconclusive,
                detail: "coverage incomplete (budget exhausted or stopped at a failure)".into(),
            };
        }
        ConditionResult {
            status: Status::Pass,
            detail: "certified on every subinterval".into(),
        }
    };

    report.fprime_positive = condition_status(Condition::FprimePositive, complete);
    report.condition1_membership = condition_status(Condition::Condition1Membership, complete);
    report.condition2_psi = condition_status(
        Condition::Condition2Psi,
        main.failure.is_none() && !main.budget_hit,
    );
    report.near_zero_derivative = condition_status(
        Condition::NearZeroDerivative,
        near.failure.is_none() && !near.budget_hit,
    );
    if report.fprime_positive.status == Status::Pass {
        report.fprime_positive.detail = "F' > 0 certified on [lambda_min, 1]".into();
    }
    if report.condition1_membership.status == Status::Pass {
        report.condition1_membership.detail = format!(
            "Y built from proven alpha = {} (clamped at 1); X in (0, 1) and Y in (0, 1] certified",
            stage.alpha
        );
    }
    report.status = [
        &report.fprime_positive,
        &report.condition1_membership,
        &report.condition2_psi,
        &report.near_zero_derivative,
    ]
    .iter()
    .fold(Status::Pass, |acc, c| acc.worst(c.status));
    report.witness = failures.into_iter().next().or_else(|| unresolved.into_iter().next());
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn not_evaluated() -> ConditionResult {
    ConditionResult {
        status: Status::Inconclusive,
        detail: "not evaluated".into(),
    }
}

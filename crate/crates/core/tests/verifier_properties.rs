use std::sync::OnceLock;

use proptest::prelude::*;
use rug::{Float, Rational};

use ramsey_core::numeric::{Interval, Point};
use ramsey_core::region::ProvenAlpha;
use ramsey_core::stage::{evaluate, Alpha, ExponentStage};
use ramsey_core::verifier::{
    enclose_profile, enclose_psi, enclose_psi_prime, paper_chain_pairs, verify_chain, verify_stage, Status, VerificationPolicy,
};

const WORK: u32 = 128;
const REFERENCE: u32 = 256;

fn paper(i: usize) -> ExponentStage {
    ExponentStage::paper_chain().swap_remove(i)
}

fn proven_for(stage: &ExponentStage) -> Vec<ProvenAlpha> {
    // Stages built from a published alpha may rely on the chain prefix
    // that certifies it; alpha = 0 needs nothing.
    static PROVEN: OnceLock<Vec<ProvenAlpha>> = OnceLock::new();
    let proven = PROVEN.get_or_init(|| verify_chain(&paper_chain_pairs(), &VerificationPolicy::default()).unwrap().proven);
    let upto = proven.iter().position(|p| *p.alpha() == stage.alpha).expect("published alpha");
    proven[..=upto].to_vec()
}

fn psi_point(stage: &ExponentStage, lam: &Float, prec: u32) -> Float {
    evaluate(stage, &Point(Float::with_val(prec, lam))).expect("point profile").psi.0
}

fn encloses(i: &Interval, v: &Float) -> bool {
    *i.lo() <= *v && *v <= *i.hi()
}

fn stage_strategy() -> impl Strategy<Value = ExponentStage> {
    (0usize..4, prop::option::of(20u32..=100)).prop_map(|(i, beta)| {
        let base = paper(i);
        match beta {
            None => base,
            Some(b) => ExponentStage::new(base.alpha, Rational::from((b, 1000)), i).unwrap(),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn point_values_lie_in_enclosures(
        stage in stage_strategy(),
        exp in -6.0f64..0.0,
        width in 0.0f64..0.05,
        t in 0.0f64..=1.0,
    ) {
        let lo = Float::with_val(WORK, 10f64.powf(exp));
        let hi = Float::with_val(WORK, &lo * (1.0 + width)).min(&Float::with_val(WORK, 1));
        let lam = Interval::new(lo.clone(), hi.clone());
        let inner = Float::with_val(WORK, &lo + Float::with_val(WORK, &hi - &lo) * t).clamp(&lo, &hi);

        let Ok(profile) = enclose_profile(&stage, &lam) else {
            return Err(TestCaseError::reject("profile undefined on interval"));
        };
        let point = evaluate(&stage, &Point(Float::with_val(REFERENCE, &inner))).expect("point profile");
        prop_assert!(encloses(&profile.f, &point.f.0));
        prop_assert!(encloses(&profile.fprime, &point.fprime.0));
        prop_assert!(encloses(&profile.x, &point.x.0));
        prop_assert!(encloses(&profile.y, &point.y.0));
        prop_assert!(encloses(&profile.psi, &point.psi.0));

        let psi = enclose_psi(&stage, &lam).unwrap();
        prop_assert!(encloses(&psi, &point.psi.0), "{psi:?} misses {}", point.psi.0);
    }
}

#[test]
fn derivative_enclosures_contain_finite_differences() {
    let h = Float::with_val(REFERENCE, 1e-8);
    for i in 0..4 {
        let stage = paper(i);
        for j in 1..=100u32 {
            // Interior points; the last one stays clear of the domain edge at 1.
            let lam = Float::with_val(REFERENCE, Rational::from((j, 101)));
            let up = psi_point(&stage, &Float::with_val(REFERENCE, &lam + &h), REFERENCE);
            let down = psi_point(&stage, &Float::with_val(REFERENCE, &lam - &h), REFERENCE);
            let fd = Float::with_val(REFERENCE, (up - down) / Float::with_val(REFERENCE, &h * 2u32));
            let d = enclose_psi_prime(&stage, &Interval::point(Float::with_val(WORK, &lam))).unwrap();
            let tol = Float::with_val(WORK, fd.clone().abs() * 1e-4);
            let lo = Float::with_val(WORK, d.lo() - &tol);
            let hi = Float::with_val(WORK, d.hi() + &tol);
            assert!(lo <= fd && fd <= hi, "stage {i}, lambda {lam}: {fd} outside {d:?}");
        }
    }
}

fn verify_in_pool(stage: &ExponentStage, threads: usize) -> String {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let report = pool.install(|| verify_stage(stage, &proven_for(stage), &VerificationPolicy::default()).unwrap());
    report.without_timing().to_json()
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    for i in [0, 3] {
        let stage = paper(i);
        let one = verify_in_pool(&stage, 1);
        assert_eq!(one, verify_in_pool(&stage, 1));
        assert_eq!(one, verify_in_pool(&stage, 4));
        assert_eq!(one, verify_in_pool(&stage, 7));
    }
}

fn rank(s: Status) -> u8 {
    match s {
        Status::Fail => 0,
        Status::Inconclusive => 1,
        Status::Pass => 2,
    }
}

fn refinement_fixtures() -> Vec<ExponentStage> {
    let mut v: Vec<_> = ExponentStage::paper_chain();
    v.push(ExponentStage::new(Alpha::zero(), Rational::from((5, 100)), 0).unwrap());
    v.push(ExponentStage::new(Alpha::zero(), Rational::from((70, 1000)), 0).unwrap());
    v
}

#[test]
fn deeper_refinement_never_loses_a_pass() {
    for stage in refinement_fixtures() {
        let proven = proven_for(&stage);
        let mut last: Option<Status> = None;
        for depth in [3, 8, 16, 60] {
            let policy = VerificationPolicy {
                max_depth: depth,
                ..VerificationPolicy::default()
            };
            let s = verify_stage(&stage, &proven, &policy).unwrap().status;
            if let Some(prev) = last {
                assert!(!(prev == Status::Pass && s == Status::Fail), "depth {depth} flipped PASS to FAIL");
                if prev != Status::Inconclusive {
                    assert_eq!(prev, s, "definite status changed at depth {depth}");
                }
            }
            last = Some(s);
        }
    }
}

#[test]
fn higher_precision_never_loses_a_pass() {
    for stage in refinement_fixtures() {
        let proven = proven_for(&stage);
        let statuses: Vec<Status> = [64, 128, 256]
            .into_iter()
            .map(|precision| {
                let policy = VerificationPolicy {
                    precision,
                    ..VerificationPolicy::default()
                };
                verify_stage(&stage, &proven, &policy).unwrap().status
            })
            .collect();
        for w in statuses.windows(2) {
            assert!(!(w[0] == Status::Pass && w[1] == Status::Fail), "{statuses:?}");
            if w[0] != Status::Inconclusive {
                assert!(rank(w[1]) >= rank(w[0]) || w[0] == w[1], "{statuses:?}");
            }
        }
    }
}

#[test]
fn psi_vanishes_at_zero() {
    for i in 0..4 {
        let stage = paper(i);
        let mut previous = f64::INFINITY;
        for e in [4, 5, 6] {
            let lo = Rational::from((1, 10u32.pow(e)));
            let hi = lo.clone() * 2u32;
            let psi = enclose_psi(&stage, &Interval::from_rationals(&lo, &hi, WORK)).unwrap();
            let mag = psi.lo().to_f64().abs().max(psi.hi().to_f64().abs());
            assert!(mag < previous, "stage {i}: {mag} at 1e-{e}");
            previous = mag;
        }
        assert!(previous < 1e-4, "stage {i}: {previous}");
    }
}

use std::sync::OnceLock;

use proptest::prelude::*;
use rug::{Float, Rational};

use ramsey_core::numeric::{ExactReal, Interval};
use ramsey_core::region::{certify_membership, frontier_enclosure, lemma_y_point, replay, Certification, ProvenAlpha};
use ramsey_core::verifier::{paper_chain_pairs, verify_chain, VerificationPolicy};

const PREC: u32 = 128;

/// The Erdős–Szekeres alpha and the four alphas minted by the published chain.
fn alphas() -> Vec<ProvenAlpha> {
    static PROVEN: OnceLock<Vec<ProvenAlpha>> = OnceLock::new();
    PROVEN
        .get_or_init(|| {
            let chain = verify_chain(&paper_chain_pairs(), &VerificationPolicy::default()).unwrap();
            assert_eq!(chain.proven.len(), 5);
            chain.proven
        })
        .clone()
}

fn x_at(i: u32, n: u32) -> ExactReal {
    ExactReal::from_rational(&Rational::from((i, n)), PREC)
}

#[test]
fn frontier_strictly_decreases_in_x() {
    for a in alphas() {
        let ys: Vec<Float> = (1..1000).map(|i| lemma_y_point(&a, &x_at(i, 1000)).unwrap().y.into_inner()).collect();
        // Clamped at 1 while e^α(1 − x) >= 1; strictly decreasing past that.
        let start = ys.iter().position(|y| *y < 1).unwrap();
        assert!(start <= 60, "{}: clamp persists to x = {start}/1000", a.alpha());
        for w in ys[start..].windows(2) {
            assert!(w[1] < w[0], "{}", a.alpha());
        }
    }
}

#[test]
fn larger_alpha_never_shrinks_the_frontier() {
    let mut all = alphas();
    all.sort_by(|a, b| a.alpha().cmp_value(&b.alpha()));
    for i in 1..1000 {
        let x = x_at(i, 1000);
        let ys: Vec<Float> = all.iter().map(|a| lemma_y_point(a, &x).unwrap().y.into_inner()).collect();
        for w in ys.windows(2) {
            assert!(w[1] >= w[0], "x = {i}/1000");
        }
    }
}

#[test]
fn lower_branch_dominates_upper_below_one_half() {
    for a in alphas() {
        let alpha = a.alpha().to_float(PREC);
        for i in 1..500 {
            let x = Float::with_val(PREC, Rational::from((i, 1000)));
            let low = Float::with_val(PREC, alpha.clone().exp() * (Float::with_val(PREC, 1) - &x));
            let high = Float::with_val(PREC, 1) - Float::with_val(PREC, &x * Float::with_val(PREC, -&alpha).exp());
            assert!(low >= high, "{} at x = {i}/1000", a.alpha());
            let (enc, _) = frontier_enclosure(a.alpha(), &Interval::point(x));
            assert!(*enc.hi() >= high.clone().min(&Float::with_val(PREC, 1)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn certificates_replay(xi in 1u32..1000, frac in 1u32..=1000, which in 0usize..5) {
        let set: Vec<ProvenAlpha> = alphas().into_iter().take(which + 1).collect();
        let x = x_at(xi, 1000);
        let frontier = lemma_y_point(set.last().unwrap(), &x).unwrap().y;
        let y = ExactReal::new(Float::with_val(PREC, frontier.value() * Float::with_val(PREC, Rational::from((frac, 1000)))));
        prop_assume!(*y.value() > 0);
        match certify_membership(&x, &y, &set).unwrap() {
            Certification::Certified(cert) => {
                prop_assert!(replay(&cert, &set).is_ok());
                // The certificate leans on the last alpha; without it, replay must not succeed.
                if which > 0 {
                    prop_assert!(replay(&cert, &set[..1]).is_err());
                }
            }
            Certification::Refused { .. } => prop_assert!(false, "y below the frontier was refused"),
        }
    }

    #[test]
    fn points_above_the_frontier_are_refused(xi in 1u32..1000, bump in 1u32..1000) {
        let set = alphas();
        let x = x_at(xi, 1000);
        let frontier = lemma_y_point(set.last().unwrap(), &x).unwrap().y;
        let y = Float::with_val(PREC, frontier.value() + Float::with_val(PREC, Rational::from((bump, 1_000_000))));
        prop_assume!(y <= 1);
        match certify_membership(&x, &ExactReal::new(y), &set).unwrap() {
            Certification::Refused { gap, .. } => prop_assert!(*gap.value() > 0),
            Certification::Certified(_) => prop_assert!(false, "point above the frontier certified"),
        }
    }
}

use proptest::prelude::*;
use rug::{Float, Rational};

use ramsey_core::bounds::{
    book_frontier, book_frontier_finite, cor_easy2_bound, cor_easy_bound, es_bound, es_product_bound, golden_p_min, golden_x,
    main_beta, main_exponent_bound, multicolor_product_bound, optimal_p, theta, thm_easy_bound,
};
use ramsey_core::clique::ramsey_exact;
use ramsey_core::numeric::ExactReal;
use ramsey_core::stage::{stage_profile, ExponentStage};
use ramsey_core::{MulticolorTarget, QuadraticSurd};

const PREC: u32 = 128;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn golden_x_solves_its_quadratic_exactly(num in 1u64..1_000_000, den in 1u64..1_000_000) {
        let p = QuadraticSurd::rational(Rational::from((num, num + den)));
        prop_assume!(p > golden_p_min());
        let x = golden_x(&p).unwrap();
        let one = QuadraticSurd::one();
        let lhs = &(&one - &p) * &(&one - &p);
        let rhs = &(&one - &x) * &(&p - &x);
        prop_assert_eq!(lhs, rhs);
        prop_assert!(x > QuadraticSurd::zero() && x < p);
    }

    #[test]
    fn theta_exceeds_one_with_several_colours(parts in prop::collection::vec(1u32..12, 2..5)) {
        let t = MulticolorTarget::new(parts).unwrap();
        prop_assert!(theta(&t) > 1);
    }
}

#[test]
fn theta_is_one_for_a_single_colour() {
    for l in 1..20 {
        assert_eq!(theta(&MulticolorTarget::single(l).unwrap()), 1);
    }
}

#[test]
fn es_product_is_minimised_at_the_balanced_split() {
    let steps = 1000;
    for k in 3..=6u32 {
        for l in 3..=6u32 {
            let (best, _) = (1..steps)
                .map(|i| (i, es_product_bound(k, l, &q(i, steps)).unwrap()))
                .min_by(|a, b| a.1.cmp(&b.1))
                .unwrap();
            let target = f64::from(k - 1) / f64::from(k + l - 2);
            let found = best as f64 / steps as f64;
            assert!((found - target).abs() <= 1.0 / steps as f64, "k={k} l={l}: {found} vs {target}");
        }
    }
}

fn frontier_grid() -> Vec<(Rational, Rational)> {
    let ps = [q(3, 10), q(45, 100), q(6, 10), q(75, 100), q(9, 10)];
    let fracs = [q(1, 10), q(3, 10), q(1, 2), q(7, 10), q(9, 10)];
    ps.iter()
        .flat_map(|p| fracs.iter().map(move |f| (p.clone(), Rational::from(p * f))))
        .collect()
}

#[test]
fn book_frontier_is_below_p_and_the_finite_form_converges() {
    for (p, mu) in frontier_grid() {
        let limit = book_frontier(&p, &mu, PREC).unwrap();
        assert!(*limit.value() < p);
        let mut last = f64::INFINITY;
        for j in 4..=20 {
            let finite = book_frontier_finite(&p, &mu, 1 << j, PREC).unwrap();
            let err = Float::with_val(PREC, finite.value() - limit.value()).abs().to_f64();
            assert!(err < last, "p={p} mu={mu} j={j}: {err} >= {last}");
            last = err;
        }
        assert!(last <= 1e-4, "p={p} mu={mu}: {last}");
    }
}

#[test]
fn paper_stages_have_positive_slope_and_valid_x() {
    for stage in ExponentStage::paper_chain() {
        for i in 1..=1000u32 {
            let lam = ExactReal::from_rational(&Rational::from((i, 1000)), PREC);
            let pr = stage_profile(&stage, &lam).unwrap();
            assert!(*pr.fprime.value() > 0, "stage {} lambda {i}/1000", stage.index);
            assert!(*pr.x.value() > 0 && *pr.x.value() < 1, "stage {} lambda {i}/1000", stage.index);
        }
    }
}

/// `(k, l, R(k, l))` from the exhaustive search.
fn exact_pairs() -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for k in 2..=5u32 {
        for l in 2..=5u32 {
            if k + l > 8 || (k == 4 && l == 4) {
                continue;
            }
            let r = ramsey_exact(k, &MulticolorTarget::single(l).unwrap(), 16).unwrap().exact().unwrap();
            out.push((k, l, r));
        }
    }
    out
}

#[test]
fn exact_values_match_known_table() {
    let table: Vec<_> = exact_pairs();
    let known = |k: u32, l: u32| match (k.min(l), k.max(l)) {
        (2, m) => m,
        (3, 3) => 6,
        (3, 4) => 9,
        (3, 5) => 14,
        _ => unreachable!(),
    };
    for (k, l, r) in table {
        assert_eq!(r, known(k, l), "R({k}, {l})");
    }
}

#[test]
fn every_bound_dominates_the_exact_value() {
    for (k, l, r) in exact_pairs() {
        let r = Rational::from(r);
        assert!(es_bound(k, l).unwrap() >= *r.numer(), "es R({k}, {l})");
        let x = q(i64::from(k - 1), i64::from(k + l - 2));
        assert!(es_product_bound(k, l, &x).unwrap() >= r, "es product R({k}, {l})");
        let p = optimal_p(k, l).unwrap();
        assert!(thm_easy_bound(k, l, &p, PREC).unwrap().to_f64() >= r.to_f64(), "thm easy R({k}, {l})");
        let (a, b) = (k.max(l), k.min(l));
        assert!(cor_easy_bound(a, b, PREC).unwrap().bound.to_f64() >= r.to_f64(), "cor easy R({k}, {l})");
        assert!(main_exponent_bound(k, l, &main_beta(), PREC).unwrap().to_f64() >= r.to_f64(), "main R({k}, {l})");
        let target = MulticolorTarget::single(l).unwrap();
        assert!(cor_easy2_bound(k, &target, PREC).unwrap().to_f64() >= r.to_f64(), "easy2 R({k}, {l})");
        let y = Rational::from(1) - x.clone();
        assert!(multicolor_product_bound(k, &target, &x, &[y]).unwrap() >= r, "product R({k}, {l})");
    }
}

#[test]
fn multicolour_bounds_dominate_exact_values() {
    let cases = [(2, vec![3, 3]), (3, vec![2, 3]), (2, vec![2, 2, 3])];
    for (k, parts) in cases {
        let target = MulticolorTarget::new(parts.clone()).unwrap();
        let r = ramsey_exact(k, &target, 12).unwrap().exact().unwrap();
        let c = parts.len() as i64 + 1;
        let even = vec![q(1, c); parts.len()];
        assert!(multicolor_product_bound(k, &target, &q(1, c), &even).unwrap() >= r, "{k} {parts:?}");
        assert!(cor_easy2_bound(k, &target, PREC).unwrap().to_f64() >= f64::from(r), "{k} {parts:?}");
    }
}

#[test]
fn evaluators_are_deterministic() {
    let p = optimal_p(10, 7).unwrap();
    let a = thm_easy_bound(10, 7, &p, PREC).unwrap();
    let b = thm_easy_bound(10, 7, &p, PREC).unwrap();
    assert_eq!(a.log_value.to_decimal(), b.log_value.to_decimal());
    let a = cor_easy_bound(12, 5, PREC).unwrap();
    let b = cor_easy_bound(12, 5, PREC).unwrap();
    assert_eq!(a.log_ratio_to_es.value(), b.log_ratio_to_es.value());
    let a = main_exponent_bound(40, 40, &main_beta(), 256).unwrap();
    let b = main_exponent_bound(40, 40, &main_beta(), 256).unwrap();
    assert_eq!(a.log_value.value(), b.log_value.value());
    let a = book_frontier(&q(1, 2), &q(1, 5), PREC).unwrap();
    assert_eq!(a.value(), book_frontier(&q(1, 2), &q(1, 5), PREC).unwrap().value());
}

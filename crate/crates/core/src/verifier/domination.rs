//! Certifies `(−λ/4 + βλ² + 0.08λ³)e^{−λ} <= (β − 0.17)e^{−1}λ` on `[0, 1]`.
//!
//! Dividing by `λ` gives `g(λ) = (β − 0.17)/e − r(λ)e^{−λ} >= 0` with
//! `r(λ) = −1/4 + βλ + 0.08λ²`, and `g(1) = 0` exactly. Each cell of an
//! adaptive cover either has `g > 0` outright or `g' < 0`; in the second case
//! `g` is at least its value at the right end of the cell, which the cells to
//! its right (or `g(1) = 0`) already bound from below.

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Dual, Interval, IntervalRecord, Real, DEFAULT_PRECISION};
use crate::stage::{beta_max, rational_string, seventeen_hundredths, Alpha};

use super::Status;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationReport {
    #[serde(with = "rational_string")]
    pub beta: Rational,
    /// `(0.17 − β)/e`, admitted as proven only on PASS.
    pub alpha: Alpha,
    pub status: Status,
    /// Cells with `g > 0` on the whole cell.
    pub direct_cells: usize,
    /// Cells with `g' < 0`, chained from `g(1) = 0`.
    pub descent_cells: usize,
    pub witness: Option<IntervalRecord>,
}

fn g<R: Real>(beta: &Rational, lam: &R) -> R {
    let r = lam
        .scale(beta)
        .add(&lam.mul(lam).scale(&Rational::from((2, 25))))
        .add(&lam.constant(&Rational::from((-1, 4))));
    let c = lam
        .constant(&(beta.clone() - seventeen_hundredths()))
        .mul(&lam.int(-1).exp());
    c.sub(&r.mul(&lam.neg().exp()))
}

const MAX_DEPTH: u32 = 40;

/// Interval certificate of the linear bound on the correction term.
pub fn verify_linear_domination(beta: &Rational) -> Result<DominationReport> {
    if beta.cmp0() == std::cmp::Ordering::Less || *beta > beta_max() {
        return Err(Error::domain("verify_linear_domination", "beta must lie in [0, 0.1]"));
    }
    let p = DEFAULT_PRECISION;
    let zero = Rational::new();
    let mut report = DominationReport {
        beta: beta.clone(),
        alpha: Alpha::from_beta(beta),
        status: Status::Pass,
        direct_cells: 0,
        descent_cells: 0,
        witness: None,
    };
    // Right to left, so each descent cell's right end is already covered.
    let root = Interval::from_rationals(&zero, &Rational::from(1), p);
    let mut stack = vec![(root, 0u32)];
    while let Some((lam, depth)) = stack.pop() {
        let value = g(beta, &lam);
        if *value.lo() > 0 {
            report.direct_cells += 1;
            continue;
        }
        if *value.hi() < 0 {
            report.status = Status::Fail;
            report.witness = Some((&lam).into());
            break;
        }
        let slope = g(beta, &Dual::variable(lam.clone())).d;
        if *slope.hi() < 0 {
            report.descent_cells += 1;
            continue;
        }
        if depth >= MAX_DEPTH {
            report.status = Status::Inconclusive;
            report.witness = Some((&lam).into());
            break;
        }
        let (left, right) = lam.bisect();
        stack.push((left, depth + 1));
        stack.push((right, depth + 1));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Point;

    #[test]
    fn paper_betas_pass() {
        for (b, a) in [((8, 100), "0.09/e"), ((3, 100), "0.14/e"), ((45, 1000), "0.125/e")] {
            let r = verify_linear_domination(&Rational::from(b)).unwrap();
            assert_eq!(r.status, Status::Pass);
            assert_eq!(r.alpha.to_string(), a);
            assert!(r.descent_cells >= 1);
        }
    }

    #[test]
    fn g_vanishes_at_one() {
        let v = g(&Rational::from((8, 100)), &Point::new(256, 1));
        assert!(v.0.clone().abs() < 1e-70);
    }

    #[test]
    fn endpoints_of_original_inequality() {
        // At λ = 0 both sides of the unscaled inequality are 0.
        let lam = Point::new(128, 0);
        let lhs = lam.mul(&lam.constant(&Rational::from((-1, 4)))).mul(&lam.neg().exp());
        assert!(lhs.0.is_zero());
    }

    #[test]
    fn out_of_range_beta() {
        assert!(verify_linear_domination(&Rational::from((11, 100))).is_err());
    }
}

//! Interval enclosures of ψ and ψ′ over a λ-interval.

use crate::error::{Error, Result};
use rug::Float;

use crate::numeric::{Dual, Interval};
use crate::stage::{evaluate, fprime, ExponentStage, Profile, ProfileFailure};

pub(crate) fn check_lambda(op: &'static str, lam: &Interval) -> Result<()> {
    if !(*lam.lo() > 0 && *lam.hi() <= 1) {
        return Err(Error::domain(op, format!("lambda interval {lam:?} not inside (0, 1]")));
    }
    Ok(())
}

fn x_undefined(stage: &ExponentStage, lam: &Interval) -> Error {
    let fp = fprime(&stage.beta, lam);
    Error::XUndefined {
        lam_lo: lam.lo().to_string_radix(10, Some(12)),
        lam_hi: lam.hi().to_string_radix(10, Some(12)),
        lo: fp.lo().to_string_radix(10, Some(12)),
        hi: fp.hi().to_string_radix(10, Some(12)),
    }
}

fn branch_boundary(lam: &Interval) -> Error {
    Error::BranchBoundary {
        lam_lo: lam.lo().to_string_radix(10, Some(12)),
        lam_hi: lam.hi().to_string_radix(10, Some(12)),
    }
}

/// Natural interval extension of every stage quantity.
pub fn enclose_profile(stage: &ExponentStage, lam: &Interval) -> Result<Profile<Interval>> {
    check_lambda("enclose_profile", lam)?;
    evaluate(stage, lam).map_err(|e| match e {
        ProfileFailure::FprimeNotPositive => x_undefined(stage, lam),
        ProfileFailure::BranchStraddle => branch_boundary(lam),
    })
}

/// First-order dual profile: values in `.v`, λ-derivatives in `.d`.
pub fn enclose_profile_dual(stage: &ExponentStage, lam: &Interval) -> Result<Profile<Dual<Interval>>> {
    check_lambda("enclose_profile_dual", lam)?;
    evaluate(stage, &Dual::variable(lam.clone())).map_err(|e| match e {
        ProfileFailure::FprimeNotPositive => x_undefined(stage, lam),
        ProfileFailure::BranchStraddle => branch_boundary(lam),
    })
}

fn second_order(stage: &ExponentStage, lam: &Interval) -> Result<Dual<Dual<Interval>>> {
    let var = Dual::variable(Dual::variable(lam.clone()));
    evaluate(stage, &var).map(|p| p.psi).map_err(|e| match e {
        ProfileFailure::FprimeNotPositive => x_undefined(stage, lam),
        ProfileFailure::BranchStraddle => branch_boundary(lam),
    })
}

/// `f(m) + f'(I)(I − m)`.
fn centered(value_at_mid: &Interval, slope: &Interval, lam: &Interval, mid: &Interval) -> Interval {
    value_at_mid.add(&slope.mul(&lam.sub(mid)))
}

/// Sound enclosure of ψ over `lam`: the natural extension intersected with the
/// mean-value form where the derivative exists on the whole interval.
pub fn enclose_psi(stage: &ExponentStage, lam: &Interval) -> Result<Interval> {
    let naive = enclose_profile(stage, lam)?.psi;
    if lam.lo() == lam.hi() {
        return Ok(naive);
    }
    Ok(tighten_psi(stage, lam, naive))
}

pub(crate) fn tighten_psi(stage: &ExponentStage, lam: &Interval, naive: Interval) -> Interval {
    let mid = Interval::point(lam.mid());
    let (Ok(at_mid), Ok(dual)) = (enclose_profile(stage, &mid), enclose_profile_dual(stage, lam)) else {
        return naive;
    };
    let form = centered(&at_mid.psi, &dual.psi.d, lam, &mid);
    naive.intersect(&form).unwrap_or(naive)
}

const PIECES: usize = 4096;
const PIECE_RATIO: f64 = 1.0 + 1.0 / 1024.0;

/// Sound enclosure of dψ/dλ over `lam` by forward-mode interval
/// differentiation, tightened with a second-order mean-value form. Wide
/// intervals are cut geometrically (ratio `1 + 2^-10`, at most 4096 pieces)
/// and the pieces hulled.
pub fn enclose_psi_prime(stage: &ExponentStage, lam: &Interval) -> Result<Interval> {
    let naive = enclose_profile_dual(stage, lam)?.psi.d;
    if lam.lo() == lam.hi() {
        return Ok(naive);
    }
    let p = lam.prec();
    let ratio = Float::with_val(p, lam.hi() / lam.lo());
    let pieces = if ratio > PIECE_RATIO {
        let n = (ratio.to_f64().ln() / PIECE_RATIO.ln()).ceil();
        (n as usize).clamp(1, PIECES)
    } else {
        1
    };
    if pieces == 1 {
        return Ok(tighten_psi_prime(stage, lam, naive));
    }
    let step = Float::with_val(p, ratio.ln() / pieces as u32);
    let mut lo = lam.lo().clone();
    let mut hull: Option<Interval> = None;
    for i in 1..=pieces {
        let hi = if i == pieces {
            lam.hi().clone()
        } else {
            let f = Float::with_val(p, &step * i as u32).exp();
            Float::with_val(p, lam.lo() * f)
        };
        let piece = Interval::new(lo, hi.clone());
        let d = enclose_profile_dual(stage, &piece)?.psi.d;
        let d = tighten_psi_prime(stage, &piece, d);
        hull = Some(match hull {
            Some(h) => h.hull(&d),
            None => d,
        });
        lo = hi;
    }
    let hull = hull.expect("at least one piece");
    Ok(naive.intersect(&hull).unwrap_or(hull))
}

pub(crate) fn tighten_psi_prime(stage: &ExponentStage, lam: &Interval, naive: Interval) -> Interval {
    let mid = Interval::point(lam.mid());
    let (Ok(at_mid), Ok(second)) = (enclose_profile_dual(stage, &mid), second_order(stage, lam)) else {
        return naive;
    };
    let form = centered(&at_mid.psi.d, &second.d.d, lam, &mid);
    naive.intersect(&form).unwrap_or(naive)
}

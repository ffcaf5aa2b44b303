use std::cmp::Ordering;
use std::fmt;

use rug::float::{Round, Special};
use rug::{Float, Rational};

/// A closed interval `[lo, hi]` whose endpoints are rounded outward, so every
/// operation returns an enclosure of the exact image.
#[derive(Clone, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_string_radix(10, Some(12)),
            self.hi.to_string_radix(10, Some(12))
        )
    }
}

impl Interval {
    /// Panics if `lo > hi`.
    pub fn new(lo: Float, hi: Float) -> Self {
        assert!(!(lo > hi), "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(v: Float) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Interval {
            lo: Float::with_val_round(prec, q, Round::Down).0,
            hi: Float::with_val_round(prec, q, Round::Up).0,
        }
    }

    pub fn from_rationals(lo: &Rational, hi: &Rational, prec: u32) -> Self {
        Interval {
            lo: Float::with_val_round(prec, lo, Round::Down).0,
            hi: Float::with_val_round(prec, hi, Round::Up).0,
        }
    }

    pub fn entire(prec: u32) -> Self {
        Interval {
            lo: Float::with_val(prec, Special::NegInfinity),
            hi: Float::with_val(prec, Special::Infinity),
        }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec()
    }

    /// Midpoint rounded to nearest; always lies inside the interval.
    pub fn mid(&self) -> Float {
        let m = Float::with_val(self.prec(), &self.lo + &self.hi) / 2u32;
        m.clamp(&self.lo, &self.hi)
    }

    pub fn width(&self) -> Float {
        Float::with_val_round(self.prec(), &self.hi - &self.lo, Round::Up).0
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, v: &Float) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.lo <= *q && self.hi >= *q
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: min(&self.lo, &other.lo),
            hi: max(&self.hi, &other.hi),
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = max(&self.lo, &other.lo);
        let hi = min(&self.hi, &other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (
            Interval {
                lo: self.lo.clone(),
                hi: m.clone(),
            },
            Interval {
                lo: m,
                hi: self.hi.clone(),
            },
        )
    }

    /// Definite comparison against `q`, `None` when `q` lies strictly inside.
    pub fn cmp_rational(&self, q: &Rational) -> Option<Ordering> {
        if self.hi < *q {
            Some(Ordering::Less)
        } else if self.lo > *q {
            Some(Ordering::Greater)
        } else if self.lo == *q && self.hi == *q {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    fn sanitize(self) -> Interval {
        if self.lo.is_nan() || self.hi.is_nan() {
            Interval::entire(self.prec())
        } else {
            self
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.prec();
        Interval {
            lo: Float::with_val_round(p, &self.lo + &o.lo, Round::Down).0,
            hi: Float::with_val_round(p, &self.hi + &o.hi, Round::Up).0,
        }
        .sanitize()
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let p = self.prec();
        Interval {
            lo: Float::with_val_round(p, &self.lo - &o.hi, Round::Down).0,
            hi: Float::with_val_round(p, &self.hi - &o.lo, Round::Up).0,
        }
        .sanitize()
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: Float::with_val(self.prec(), -&self.hi),
            hi: Float::with_val(self.prec(), -&self.lo),
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.prec();
        let pairs = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let down = mul_round(p, a, b, Round::Down);
            let up = mul_round(p, a, b, Round::Up);
            if down.is_nan() || up.is_nan() {
                return Interval::entire(p);
            }
            lo = Some(match lo {
                Some(cur) => min(&cur, &down),
                None => down,
            });
            hi = Some(match hi {
                Some(cur) => max(&cur, &up),
                None => up,
            });
        }
        Interval {
            lo: lo.expect("four products"),
            hi: hi.expect("four products"),
        }
    }

    pub fn recip(&self) -> Interval {
        let p = self.prec();
        if self.lo.is_sign_positive() && !self.lo.is_zero() || self.hi < 0 {
            let mut lo = self.hi.clone();
            lo.recip_round(Round::Down);
            let mut hi = self.lo.clone();
            hi.recip_round(Round::Up);
            Interval { lo, hi }
        } else {
            Interval::entire(p)
        }
    }

    pub fn div(&self, o: &Interval) -> Interval {
        self.mul(&o.recip())
    }

    pub fn exp(&self) -> Interval {
        monotone(self, |x, r| {
            x.exp_round(r);
        })
    }

    pub fn exp_m1(&self) -> Interval {
        monotone(self, |x, r| {
            x.exp_m1_round(r);
        })
    }

    /// Natural log; endpoints at or below zero map to `-inf`.
    pub fn ln(&self) -> Interval {
        let p = self.prec();
        if !(self.hi > 0) {
            return Interval::entire(p);
        }
        let mut hi = self.hi.clone();
        hi.ln_round(Round::Up);
        let lo = if self.lo > 0 {
            let mut lo = self.lo.clone();
            lo.ln_round(Round::Down);
            lo
        } else {
            Float::with_val(p, Special::NegInfinity)
        };
        Interval { lo, hi }
    }

    /// `ln(1 + x)`; endpoints at or below `-1` map to `-inf`.
    pub fn ln_1p(&self) -> Interval {
        let p = self.prec();
        if !(self.hi > -1) {
            return Interval::entire(p);
        }
        let mut hi = self.hi.clone();
        hi.ln_1p_round(Round::Up);
        let lo = if self.lo > -1 {
            let mut lo = self.lo.clone();
            lo.ln_1p_round(Round::Down);
            lo
        } else {
            Float::with_val(p, Special::NegInfinity)
        };
        Interval { lo, hi }
    }

    pub fn clamp_max_zero(&self) -> Interval {
        let zero = Float::with_val(self.prec(), 0);
        Interval {
            lo: min(&self.lo, &zero),
            hi: min(&self.hi, &zero),
        }
    }
}

fn mul_round(p: u32, a: &Float, b: &Float, r: Round) -> Float {
    // 0 * inf is taken as 0: the zero endpoint is an exact value.
    if a.is_zero() || b.is_zero() {
        return Float::with_val(p, 0);
    }
    Float::with_val_round(p, a * b, r).0
}

fn monotone(x: &Interval, f: impl Fn(&mut Float, Round)) -> Interval {
    let mut lo = x.lo.clone();
    f(&mut lo, Round::Down);
    let mut hi = x.hi.clone();
    f(&mut hi, Round::Up);
    Interval { lo, hi }.sanitize()
}

fn min(a: &Float, b: &Float) -> Float {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

fn max(a: &Float, b: &Float) -> Float {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(Float::with_val(128, lo), Float::with_val(128, hi))
    }

    #[test]
    fn rational_constants_are_enclosed() {
        let tenth = Rational::from((1, 10));
        let x = Interval::from_rational(&tenth, 64);
        assert!(x.lo() < x.hi());
        assert!(x.contains_rational(&tenth));
    }

    #[test]
    fn multiplication_handles_signs() {
        let x = iv(-2.0, 3.0).mul(&iv(-1.0, 4.0));
        assert_eq!(x.lo().to_f64(), -8.0);
        assert_eq!(x.hi().to_f64(), 12.0);
    }

    #[test]
    fn reciprocal_of_zero_straddle_is_entire() {
        let r = iv(-1.0, 1.0).recip();
        assert!(!r.is_finite());
        let r = iv(2.0, 4.0).recip();
        assert_eq!(r.lo().to_f64(), 0.25);
        assert_eq!(r.hi().to_f64(), 0.5);
    }

    #[test]
    fn exp_and_ln_enclose_points() {
        let x = iv(0.5, 0.5);
        let e = x.exp();
        assert!(e.lo() < e.hi());
        assert!(e.contains(&Float::with_val(256, 0.5f64).exp()));
        let l = iv(0.0, 2.0).ln();
        assert!(l.lo().is_infinite());
        assert!(l.hi().to_f64() >= std::f64::consts::LN_2);
    }

    #[test]
    fn bisection_covers_parent() {
        let x = iv(0.25, 1.0);
        let (a, b) = x.bisect();
        assert_eq!(a.lo(), x.lo());
        assert_eq!(b.hi(), x.hi());
        assert_eq!(a.hi(), b.lo());
    }

    #[test]
    fn comparison_is_definite_only_outside() {
        let half = Rational::from((1, 2));
        assert_eq!(iv(0.1, 0.4).cmp_rational(&half), Some(Ordering::Less));
        assert_eq!(iv(0.6, 0.9).cmp_rational(&half), Some(Ordering::Greater));
        assert_eq!(iv(0.4, 0.6).cmp_rational(&half), None);
    }
}

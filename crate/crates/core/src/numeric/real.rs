use std::cmp::Ordering;
use std::fmt::Debug;

use rug::{Float, Rational};

use super::Interval;

/// Raised when a non-smooth selector cannot be resolved on an enclosure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Straddle;

/// Arithmetic shared by point values, interval enclosures and duals, so the
/// exponent-function formulas are written once.
pub trait Real: Clone + Debug + PartialEq + Send + Sync {
    /// A constant at the same precision as `self`.
    fn constant(&self, q: &Rational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn recip(&self) -> Self;
    fn exp(&self) -> Self;
    fn exp_m1(&self) -> Self;
    fn ln(&self) -> Self;
    fn ln_1p(&self) -> Self;
    fn cmp_rational(&self, q: &Rational) -> Option<Ordering>;
    /// Union of two enclosures; `None` where no sound union exists.
    fn hull(&self, other: &Self) -> Option<Self>;
    /// `min(self, 0)`.
    fn clamp_max_zero(&self) -> Result<Self, Straddle>;

    fn int(&self, n: i64) -> Self {
        self.constant(&Rational::from(n))
    }

    fn scale(&self, q: &Rational) -> Self {
        self.mul(&self.constant(q))
    }
}

/// A single high-precision value with round-to-nearest arithmetic.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Point(pub Float);

impl Point {
    pub fn new(prec: u32, v: impl Into<Rational>) -> Self {
        Point(Float::with_val(prec, v.into()))
    }

    fn p(&self) -> u32 {
        self.0.prec()
    }
}

impl Real for Point {
    fn constant(&self, q: &Rational) -> Self {
        Point(Float::with_val(self.p(), q))
    }
    fn add(&self, o: &Self) -> Self {
        Point(Float::with_val(self.p(), &self.0 + &o.0))
    }
    fn sub(&self, o: &Self) -> Self {
        Point(Float::with_val(self.p(), &self.0 - &o.0))
    }
    fn mul(&self, o: &Self) -> Self {
        Point(Float::with_val(self.p(), &self.0 * &o.0))
    }
    fn div(&self, o: &Self) -> Self {
        Point(Float::with_val(self.p(), &self.0 / &o.0))
    }
    fn neg(&self) -> Self {
        Point(Float::with_val(self.p(), -&self.0))
    }
    fn recip(&self) -> Self {
        Point(self.0.clone().recip())
    }
    fn exp(&self) -> Self {
        Point(self.0.clone().exp())
    }
    fn exp_m1(&self) -> Self {
        Point(self.0.clone().exp_m1())
    }
    fn ln(&self) -> Self {
        Point(self.0.clone().ln())
    }
    fn ln_1p(&self) -> Self {
        Point(self.0.clone().ln_1p())
    }
    fn cmp_rational(&self, q: &Rational) -> Option<Ordering> {
        self.0.partial_cmp(q)
    }
    fn hull(&self, other: &Self) -> Option<Self> {
        (self == other).then(|| self.clone())
    }
    fn clamp_max_zero(&self) -> Result<Self, Straddle> {
        if self.0 > 0 {
            Ok(Point(Float::with_val(self.p(), 0)))
        } else {
            Ok(self.clone())
        }
    }
}

impl Real for Interval {
    fn constant(&self, q: &Rational) -> Self {
        Interval::from_rational(q, self.prec())
    }
    fn add(&self, o: &Self) -> Self {
        Interval::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Interval::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Interval::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        Interval::div(self, o)
    }
    fn neg(&self) -> Self {
        Interval::neg(self)
    }
    fn recip(&self) -> Self {
        Interval::recip(self)
    }
    fn exp(&self) -> Self {
        Interval::exp(self)
    }
    fn exp_m1(&self) -> Self {
        Interval::exp_m1(self)
    }
    fn ln(&self) -> Self {
        Interval::ln(self)
    }
    fn ln_1p(&self) -> Self {
        Interval::ln_1p(self)
    }
    fn cmp_rational(&self, q: &Rational) -> Option<Ordering> {
        Interval::cmp_rational(self, q)
    }
    fn hull(&self, other: &Self) -> Option<Self> {
        Some(Interval::hull(self, other))
    }
    fn clamp_max_zero(&self) -> Result<Self, Straddle> {
        Ok(Interval::clamp_max_zero(self))
    }
}

/// Forward-mode dual number `v + d·ε`, generic over the value type so
/// `Dual<Interval>` encloses derivatives and `Dual<Dual<Interval>>` second
/// derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<T> {
    pub v: T,
    pub d: T,
}

impl<T: Real> Dual<T> {
    /// The independent variable: derivative one.
    pub fn variable(v: T) -> Self {
        let d = v.int(1);
        Dual { v, d }
    }

    pub fn constant_of(v: T) -> Self {
        let d = v.int(0);
        Dual { v, d }
    }
}

impl<T: Real> Real for Dual<T> {
    fn constant(&self, q: &Rational) -> Self {
        Dual::constant_of(self.v.constant(q))
    }
    fn add(&self, o: &Self) -> Self {
        Dual {
            v: self.v.add(&o.v),
            d: self.d.add(&o.d),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        Dual {
            v: self.v.sub(&o.v),
            d: self.d.sub(&o.d),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        Dual {
            v: self.v.mul(&o.v),
            d: self.v.mul(&o.d).add(&self.d.mul(&o.v)),
        }
    }
    fn div(&self, o: &Self) -> Self {
        let inv = o.v.recip();
        let v = self.v.mul(&inv);
        Dual {
            d: self.d.sub(&v.mul(&o.d)).mul(&inv),
            v,
        }
    }
    fn neg(&self) -> Self {
        Dual {
            v: self.v.neg(),
            d: self.d.neg(),
        }
    }
    fn recip(&self) -> Self {
        let r = self.v.recip();
        Dual {
            d: self.d.mul(&r).mul(&r).neg(),
            v: r,
        }
    }
    fn exp(&self) -> Self {
        let e = self.v.exp();
        Dual {
            d: e.mul(&self.d),
            v: e,
        }
    }
    fn exp_m1(&self) -> Self {
        Dual {
            v: self.v.exp_m1(),
            d: self.v.exp().mul(&self.d),
        }
    }
    fn ln(&self) -> Self {
        Dual {
            v: self.v.ln(),
            d: self.d.div(&self.v),
        }
    }
    fn ln_1p(&self) -> Self {
        Dual {
            v: self.v.ln_1p(),
            d: self.d.div(&self.v.int(1).add(&self.v)),
        }
    }
    fn cmp_rational(&self, q: &Rational) -> Option<Ordering> {
        self.v.cmp_rational(q)
    }
    fn hull(&self, other: &Self) -> Option<Self> {
        (self == other).then(|| self.clone())
    }
    fn clamp_max_zero(&self) -> Result<Self, Straddle> {
        match self.v.cmp_rational(&Rational::new()) {
            Some(Ordering::Less) | Some(Ordering::Equal) => Ok(self.clone()),
            Some(Ordering::Greater) => Ok(self.int(0)),
            None => {
                // The clamp is inactive wherever v <= 0; only a straddle at
                // the kink itself is unresolved.
                Err(Straddle)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_derivative_of_x_ln_x() {
        // d/dx (x ln x) = ln x + 1
        let x = Dual::variable(Point::new(128, 2));
        let y = x.mul(&x.ln());
        let expected = Float::with_val(128, 2).ln() + 1u32;
        assert!((y.d.0 - expected).abs() < 1e-30);
    }

    #[test]
    fn nested_dual_gives_second_derivative() {
        // d²/dx² exp(x²) at x = 1 is 6e
        let x0 = Point::new(128, 1);
        let x = Dual::variable(Dual::variable(x0));
        let y = x.mul(&x).exp();
        let expected = Float::with_val(128, 1).exp() * 6u32;
        assert!((y.d.d.0 - expected).abs() < 1e-30);
    }

    #[test]
    fn interval_dual_encloses_point_derivative() {
        let lam = Interval::from_rationals(&Rational::from((1, 4)), &Rational::from((1, 2)), 128);
        let x = Dual::variable(lam);
        let y = x.ln_1p().mul(&x);
        // derivative ln(1+x) + x/(1+x) at 0.3
        let p = Float::with_val(128, 0.3f64);
        let dp = Float::with_val(128, p.clone().ln_1p()) + Float::with_val(128, &p / (p.clone() + 1u32));
        assert!(y.d.contains(&dp));
    }
}

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::{Float, Rational};

/// An exact element `a + b√5` of the field Q(√5).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    pub a: Rational,
    pub b: Rational,
}

impl QuadraticSurd {
    pub fn new(a: impl Into<Rational>, b: impl Into<Rational>) -> Self {
        QuadraticSurd {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn rational(a: impl Into<Rational>) -> Self {
        Self::new(a, 0)
    }

    pub fn sqrt5() -> Self {
        Self::new(0, 1)
    }

    /// The golden ratio `(1 + √5) / 2`.
    pub fn phi() -> Self {
        Self::new((1, 2), (1, 2))
    }

    pub fn zero() -> Self {
        Self::rational(0)
    }

    pub fn one() -> Self {
        Self::rational(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn conjugate(&self) -> Self {
        QuadraticSurd {
            a: self.a.clone(),
            b: Rational::from(-&self.b),
        }
    }

    /// `a² − 5b²`, the field norm.
    pub fn norm(&self) -> Rational {
        Rational::from(&self.a * &self.a) - Rational::from(5) * Rational::from(&self.b * &self.b)
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // Nonzero elements have nonzero norm because √5 is irrational.
        let n = self.norm();
        let c = self.conjugate();
        Some(QuadraticSurd {
            a: Rational::from(&c.a / &n),
            b: Rational::from(&c.b / &n),
        })
    }

    /// Exact sign of `a + b√5`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp0();
        let sb = self.b.cmp0();
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // Opposite signs: compare a² with 5b².
            (sa, _) => {
                let a2 = Rational::from(&self.a * &self.a);
                let b2 = Rational::from(5) * Rational::from(&self.b * &self.b);
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn powi(&self, exp: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    pub fn to_float(&self, prec: u32) -> Float {
        let root5 = Float::with_val(prec + 32, 5).sqrt();
        let v = Float::with_val(prec + 32, &self.b * &root5) + &self.a;
        Float::with_val(prec, v)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(64).to_f64()
    }
}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√5", self.a, self.b)
    }
}

impl Add for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn add(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        QuadraticSurd {
            a: Rational::from(&self.a + &rhs.a),
            b: Rational::from(&self.b + &rhs.b),
        }
    }
}

impl Sub for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn sub(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        QuadraticSurd {
            a: Rational::from(&self.a - &rhs.a),
            b: Rational::from(&self.b - &rhs.b),
        }
    }
}

impl Mul for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn mul(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        let aa = Rational::from(&self.a * &rhs.a);
        let bb = Rational::from(&self.b * &rhs.b);
        let ab = Rational::from(&self.a * &rhs.b);
        let ba = Rational::from(&self.b * &rhs.a);
        QuadraticSurd {
            a: aa + Rational::from(5) * bb,
            b: ab + ba,
        }
    }
}

impl Div for &QuadraticSurd {
    type Output = QuadraticSurd;
    /// Panics on division by zero, like the rational division it extends.
    fn div(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        let inv = rhs.recip().expect("division by zero in Q(√5)");
        self * &inv
    }
}

impl Neg for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        QuadraticSurd {
            a: Rational::from(-&self.a),
            b: Rational::from(-&self.b),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadraticSurd {
            type Output = QuadraticSurd;
            fn $m(self, rhs: QuadraticSurd) -> QuadraticSurd {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

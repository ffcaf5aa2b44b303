//! Number types: high-precision reals, exact quadratic surds, directed-rounding
//! intervals and forward-mode duals.

mod interval;
mod real;
mod surd;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::float::Round;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use interval::Interval;
pub use real::{Dual, Point, Real, Straddle};
pub use surd::QuadraticSurd;

/// Working precision in bits used when a caller does not choose one.
pub const DEFAULT_PRECISION: u32 = 128;

/// An arbitrary-precision real together with the precision it was computed at.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct ExactReal(Float);

impl ExactReal {
    pub fn new(value: Float) -> Self {
        ExactReal(value)
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        ExactReal(Float::with_val(prec, q))
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        ExactReal(Float::with_val(prec, v))
    }

    /// Parses a decimal (`0.045`, `1e-3`) or a fraction (`17/100`).
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        Ok(Self::from_rational(&parse_rational(s)?, prec))
    }

    pub fn value(&self) -> &Float {
        &self.0
    }

    pub fn into_inner(self) -> Float {
        self.0
    }

    pub fn precision(&self) -> u32 {
        self.0.prec()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Shortest decimal that reads back to the same binary value.
    pub fn to_decimal(&self) -> String {
        self.0.to_string_radix(10, None)
    }

    pub fn to_decimal_digits(&self, digits: usize) -> String {
        self.0.to_string_radix(10, Some(digits))
    }

    pub fn to_json(&self) -> DecimalValue {
        DecimalValue {
            value: self.to_decimal(),
            precision: self.precision(),
        }
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{} (p{})", self.to_decimal_digits(digits), self.precision())
    }
}

impl From<Float> for ExactReal {
    fn from(value: Float) -> Self {
        ExactReal(value)
    }
}

/// A real as it appears in JSON: a decimal string and its precision tag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalValue {
    pub value: String,
    pub precision: u32,
}

impl DecimalValue {
    pub fn to_exact(&self) -> Result<ExactReal> {
        let parsed = Float::parse(&self.value)
            .map_err(|e| Error::Parse(format!("{}: {e}", self.value)))?;
        Ok(ExactReal(Float::with_val(self.precision, parsed)))
    }
}

/// An interval as it appears in JSON: endpoint decimals and precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub lo: String,
    pub hi: String,
    pub precision: u32,
}

impl From<&Interval> for IntervalRecord {
    fn from(i: &Interval) -> Self {
        IntervalRecord {
            lo: i.lo().to_string_radix(10, None),
            hi: i.hi().to_string_radix(10, None),
            precision: i.prec(),
        }
    }
}

impl IntervalRecord {
    pub fn to_interval(&self) -> Result<Interval> {
        let p = |s: &str| {
            Float::parse(s)
                .map(|v| Float::with_val(self.precision, v))
                .map_err(|e| Error::Parse(format!("{s}: {e}")))
        };
        Ok(Interval::new(p(&self.lo)?, p(&self.hi)?))
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.parse().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.parse().unwrap_or(f64::NAN)
    }
}

/// Either a representable value or an explicit overflow marker.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearValue {
    Finite(ExactReal),
    Overflow,
}

/// A bound reported both in log space and in linear space.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundValue {
    pub log_value: ExactReal,
    pub linear: LinearValue,
}

impl BoundValue {
    pub fn from_log(log_value: Float) -> Self {
        let linear = {
            let v = log_value.clone().exp();
            if v.is_finite() {
                LinearValue::Finite(ExactReal(v))
            } else {
                LinearValue::Overflow
            }
        };
        BoundValue {
            log_value: ExactReal(log_value),
            linear,
        }
    }

    pub fn value(&self) -> Option<&ExactReal> {
        match &self.linear {
            LinearValue::Finite(v) => Some(v),
            LinearValue::Overflow => None,
        }
    }

    pub fn is_overflow(&self) -> bool {
        matches!(self.linear, LinearValue::Overflow)
    }

    pub fn to_f64(&self) -> f64 {
        self.value().map_or(f64::INFINITY, ExactReal::to_f64)
    }

    pub fn ln(&self) -> f64 {
        self.log_value.to_f64()
    }
}

/// Evaluates `f` at `prec` and at `2 * prec` and returns the first result only
/// if both agree to a relative `2^(-prec/2)`.
pub fn checked_eval<F>(op: &'static str, prec: u32, f: F) -> Result<Float>
where
    F: Fn(u32) -> Result<Float>,
{
    let working = f(prec)?;
    let doubled = f(prec.saturating_mul(2))?;
    if !working.is_finite() || !doubled.is_finite() {
        if working == doubled {
            return Ok(working);
        }
        return Err(Error::Precision {
            op,
            difference: "non-finite".into(),
            tolerance: "n/a".into(),
        });
    }
    let diff = Float::with_val(prec * 2, &doubled - &working).abs();
    let scale = Float::with_val(prec * 2, doubled.abs_ref());
    let mut tol = Float::with_val(prec * 2, 1) >> (prec / 2);
    if !scale.is_zero() && scale > 1e-300 {
        tol *= &scale;
    }
    if diff > tol {
        return Err(Error::Precision {
            op,
            difference: diff.to_string_radix(10, Some(6)),
            tolerance: tol.to_string_radix(10, Some(6)),
        });
    }
    Ok(working)
}

/// Parses `3`, `-0.045`, `1e-3`, `2.5E+2` or `17/100` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_rational(num)?;
        let den = parse_rational(den)?;
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in {s}")));
        }
        return Ok(num / den);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp = i32::from_str(&s[pos + 1..])
                .map_err(|_| Error::Parse(format!("bad exponent in {s}")))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("not a number: {s}")));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from(
        Integer::from_str(if all_digits.is_empty() { "0" } else { &all_digits })
            .map_err(|e| Error::Parse(e.to_string()))?,
    );
    let scale = exponent - frac_part.len() as i32;
    match scale.cmp(&0) {
        Ordering::Greater => value *= Integer::from(Integer::u_pow_u(10, scale as u32)),
        Ordering::Less => value /= Integer::from(Integer::u_pow_u(10, (-scale) as u32)),
        Ordering::Equal => {}
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Rounds `q` to a float at `prec` in the given direction.
pub fn rational_to_float(q: &Rational, prec: u32, round: Round) -> Float {
    Float::with_val_round(prec, q, round).0
}

/// Largest rational with denominator `2^bits` that is `<= v`.
pub fn float_floor_rational(v: &Float, bits: u32) -> Rational {
    let scaled = Float::with_val(v.prec().max(bits + 64), v << bits).floor();
    let num = scaled.to_integer().expect("finite value");
    Rational::from((num, Integer::from(1) << bits))
}

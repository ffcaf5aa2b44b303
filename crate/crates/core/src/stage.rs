//! The smooth exponent-function family and its derived quantities.
//!
//! A stage is a pair `(alpha, beta)`. Its exponent function is
//! `F(λ) = (λ+1)ln(λ+1) − λ ln λ + (−λ/4 + βλ² + 0.08λ³)e^{−λ}`, with
//! `M(λ) = λe^{−λ}`, `X = (1 − e^{−F'})^{1/(1−M)}(1 − M)` and `Y` taken from the
//! region frontier for the proven `alpha`. The slack is
//! `ψ = F + (ln X + λ ln M + λ ln Y)/2`.

use std::cmp::Ordering;
use std::fmt;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{checked_eval, parse_rational, ExactReal, Point, Real};

/// `0.17`, the value of `0.25 − 0.08` that fixes `G(1)` at `(β − 0.17)/e`.
pub fn seventeen_hundredths() -> Rational {
    Rational::from((17, 100))
}

/// Largest `β` for which the correction term is convex on `[0, 1]`.
pub fn beta_max() -> Rational {
    Rational::from((1, 10))
}

/// An exactly represented nonnegative `alpha`: either rational, or a rational
/// multiple of `1/e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Alpha {
    Rational(Rational),
    OverE(Rational),
}

impl Alpha {
    pub fn zero() -> Self {
        Alpha::Rational(Rational::new())
    }

    /// `(0.17 − β)/e`, the slope bound handed on by a verified stage.
    pub fn from_beta(beta: &Rational) -> Self {
        Alpha::OverE(seventeen_hundredths() - beta.clone())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Alpha::Rational(q) | Alpha::OverE(q) => *q == 0,
        }
    }

    fn coefficient(&self) -> &Rational {
        match self {
            Alpha::Rational(q) | Alpha::OverE(q) => q,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coefficient().cmp0() != Ordering::Less
    }

    pub fn to_real<R: Real>(&self, like: &R) -> R {
        match self {
            Alpha::Rational(q) => like.constant(q),
            Alpha::OverE(q) => like.constant(q).mul(&like.int(-1).exp()),
        }
    }

    pub fn to_float(&self, prec: u32) -> Float {
        self.to_real(&Point::new(prec, 0)).0
    }

    /// Parses `0.0331`, `17/100` or `0.09/e`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let alpha = match t.strip_suffix("/e") {
            Some(coef) => Alpha::OverE(parse_rational(coef)?),
            None => Alpha::Rational(parse_rational(t)?),
        };
        if !alpha.is_nonnegative() {
            return Err(Error::domain("alpha", format!("alpha = {t} is negative")));
        }
        Ok(alpha)
    }

    /// Approximate ordering; exact when both are of the same kind.
    pub fn cmp_value(&self, other: &Alpha) -> Ordering {
        match (self, other) {
            (Alpha::Rational(a), Alpha::Rational(b)) | (Alpha::OverE(a), Alpha::OverE(b)) => {
                a.cmp(b)
            }
            _ => {
                let a = self.to_float(256);
                let b = other.to_float(256);
                a.partial_cmp(&b).unwrap_or(Ordering::Equal)
            }
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Rational(q) => write!(f, "{}", rational_to_decimal(q)),
            Alpha::OverE(q) => write!(f, "{}/e", rational_to_decimal(q)),
        }
    }
}

impl From<Alpha> for String {
    fn from(a: Alpha) -> String {
        a.to_string()
    }
}

impl TryFrom<String> for Alpha {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Alpha::parse(&s)
    }
}

/// Renders terminating decimals exactly and other rationals as `p/q`.
pub fn rational_to_decimal(q: &Rational) -> String {
    let mut den = q.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    while den.is_divisible_u(2) {
        den /= 2u32;
        twos += 1;
    }
    while den.is_divisible_u(5) {
        den /= 5u32;
        fives += 1;
    }
    if den != 1 {
        return q.to_string();
    }
    let digits = twos.max(fives);
    let scaled = q.clone() * rug::Integer::from(rug::Integer::u_pow_u(10, digits));
    let (num, _) = scaled.into_numer_denom();
    let neg = num < 0;
    let s = num.abs().to_string();
    let s = if digits == 0 {
        s
    } else {
        let width = digits as usize + 1;
        let padded = format!("{s:0>width$}");
        let (int, frac) = padded.split_at(padded.len() - digits as usize);
        format!("{int}.{frac}")
    };
    if neg {
        format!("-{s}")
    } else {
        s
    }
}

/// One stage `(alpha, beta)` of the iterated exponent-function construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentStage {
    pub alpha: Alpha,
    #[serde(with = "rational_string")]
    pub beta: Rational,
    pub index: usize,
}

impl ExponentStage {
    pub fn new(alpha: Alpha, beta: Rational, index: usize) -> Result<Self> {
        if !alpha.is_nonnegative() {
            return Err(Error::domain("stage", "alpha must be nonnegative"));
        }
        if beta.cmp0() == Ordering::Less || beta > beta_max() {
            return Err(Error::domain(
                "stage",
                format!("beta = {} outside [0, 0.1]", rational_to_decimal(&beta)),
            ));
        }
        Ok(ExponentStage { alpha, beta, index })
    }

    /// The four stages `(0, 0.08)`, `(0.09/e, 0.045)`, `(0.125/e, 0.033)`,
    /// `(0.137/e, 0.03)`.
    pub fn paper_chain() -> Vec<ExponentStage> {
        let betas = [(8, 100), (45, 1000), (33, 1000), (3, 100)];
        let mut stages = Vec::with_capacity(betas.len());
        let mut alpha = Alpha::zero();
        for (i, b) in betas.into_iter().enumerate() {
            let beta = Rational::from(b);
            stages.push(ExponentStage {
                alpha: alpha.clone(),
                beta: beta.clone(),
                index: i,
            });
            alpha = Alpha::from_beta(&beta);
        }
        stages
    }
}

impl fmt::Display for ExponentStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stage {} (alpha = {}, beta = {})",
            self.index,
            self.alpha,
            rational_to_decimal(&self.beta)
        )
    }
}

pub(crate) mod rational_string {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::rational_to_decimal(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        crate::numeric::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Which rule produced `Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YBranch {
    /// `X <= 1/2`: `Y = min(e^α(1 − X), 1)`.
    Low,
    /// `X > 1/2`: `Y = 1 − X e^{−α}`.
    High,
    /// The enclosure of `X` contains `1/2`; `Y` is the hull of both rules.
    Both,
}

/// Why a profile could not be evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileFailure {
    /// `F'(λ) > 0` could not be established.
    FprimeNotPositive,
    /// The branch selector straddles `1/2` and the number type cannot merge.
    BranchStraddle,
}

/// All stage quantities at one `λ`, in any [`Real`] representation.
#[derive(Clone, Debug)]
pub struct Profile<R> {
    pub f: R,
    pub fprime: R,
    pub m: R,
    pub ln_x: R,
    pub x: R,
    pub ln_y: R,
    pub y: R,
    pub psi: R,
    pub branch: YBranch,
}

/// `(−λ/4 + βλ² + 0.08λ³)e^{−λ}`.
pub fn correction<R: Real>(beta: &Rational, lam: &R) -> R {
    let poly = lam
        .scale(beta)
        .add(&lam.mul(lam).scale(&Rational::from((2, 25))))
        .add(&lam.constant(&Rational::from((-1, 4))));
    lam.mul(&poly).mul(&lam.neg().exp())
}

/// `(λ+1)ln(λ+1) − λ ln λ`, the Erdős–Szekeres exponent.
pub fn entropy<R: Real>(lam: &R) -> R {
    let one = lam.int(1);
    lam.add(&one)
        .mul(&lam.ln_1p())
        .sub(&lam.mul(&lam.ln()))
}

/// `F'(λ) = ln(1 + 1/λ) + (q' − q)e^{−λ}` with `q` the correction polynomial.
pub fn fprime<R: Real>(beta: &Rational, lam: &R) -> R {
    let q = lam.mul(
        &lam.scale(beta)
            .add(&lam.mul(lam).scale(&Rational::from((2, 25))))
            .add(&lam.constant(&Rational::from((-1, 4)))),
    );
    let two_beta = beta.clone() * 2u32;
    let dq = lam
        .scale(&two_beta)
        .add(&lam.mul(lam).scale(&Rational::from((6, 25))))
        .add(&lam.constant(&Rational::from((-1, 4))));
    lam.recip()
        .ln_1p()
        .add(&dq.sub(&q).mul(&lam.neg().exp()))
}

/// Evaluates every stage quantity at `lam`.
pub fn evaluate<R: Real>(stage: &ExponentStage, lam: &R) -> std::result::Result<Profile<R>, ProfileFailure> {
    let zero = Rational::new();
    let half = Rational::from((1, 2));
    let one = lam.int(1);

    let f = entropy(lam).add(&correction(&stage.beta, lam));
    let fp = fprime(&stage.beta, lam);
    if fp.cmp_rational(&zero) != Some(Ordering::Greater) {
        return Err(ProfileFailure::FprimeNotPositive);
    }

    let e_neg = lam.neg().exp();
    let m = lam.mul(&e_neg);
    let ln_m = lam.ln().sub(lam);
    let ln_one_minus_m = m.neg().ln_1p();
    // ln(1 − e^{−F'}) = ln(−expm1(−F'))
    let ln_density = fp.neg().exp_m1().neg().ln();
    let ln_x = ln_density.div(&one.sub(&m)).add(&ln_one_minus_m);
    let x = ln_x.exp();

    let alpha = stage.alpha.to_real(lam);
    let low = || -> std::result::Result<R, ProfileFailure> {
        alpha
            .add(&x.neg().ln_1p())
            .clamp_max_zero()
            .map_err(|_| ProfileFailure::BranchStraddle)
    };
    let high = || x.mul(&alpha.neg().exp()).neg().ln_1p();
    let (ln_y, branch) = match x.cmp_rational(&half) {
        Some(Ordering::Less) | Some(Ordering::Equal) => (low()?, YBranch::Low),
        Some(Ordering::Greater) => (high(), YBranch::High),
        None => {
            let merged = low()?
                .hull(&high())
                .ok_or(ProfileFailure::BranchStraddle)?;
            (merged, YBranch::Both)
        }
    };
    let y = ln_y.exp();

    let slack = ln_x.add(&lam.mul(&ln_m)).add(&lam.mul(&ln_y));
    let psi = f.add(&slack.scale(&half));
    Ok(Profile {
        f,
        fprime: fp,
        m,
        ln_x,
        x,
        ln_y,
        y,
        psi,
        branch,
    })
}

/// Point values of the stage quantities.
#[derive(Clone, Debug)]
pub struct StageProfile {
    pub f: ExactReal,
    pub fprime: ExactReal,
    pub m: ExactReal,
    pub x: ExactReal,
    pub y: ExactReal,
    pub psi: ExactReal,
    pub branch: YBranch,
}

/// High-precision stage quantities at one `λ ∈ (0, 1]`.
pub fn stage_profile(stage: &ExponentStage, lambda: &ExactReal) -> Result<StageProfile> {
    let lam = lambda.value();
    if !(*lam > 0 && *lam <= 1) {
        return Err(Error::domain("stage_profile", "lambda must lie in (0, 1]"));
    }
    let prec = lambda.precision();
    let eval = |p: u32| {
        evaluate(stage, &Point(Float::with_val(p, lam))).map_err(|e| match e {
            ProfileFailure::FprimeNotPositive => Error::XUndefined {
                lam_lo: lambda.to_decimal(),
                lam_hi: lambda.to_decimal(),
                lo: "<= 0".into(),
                hi: "<= 0".into(),
            },
            ProfileFailure::BranchStraddle => Error::BranchBoundary {
                lam_lo: lambda.to_decimal(),
                lam_hi: lambda.to_decimal(),
            },
        })
    };
    let profile = eval(prec)?;
    // psi is the quantity with the most cancellation; hold it to the
    // doubled-precision agreement check.
    let psi = checked_eval("stage_profile", prec, |p| eval(p).map(|pr| pr.psi.0))?;
    Ok(StageProfile {
        f: profile.f.0.into(),
        fprime: profile.fprime.0.into(),
        m: profile.m.0.into(),
        x: profile.x.0.into(),
        y: profile.y.0.into(),
        psi: psi.into(),
        branch: profile.branch,
    })
}

/// `e^{F(1)} = 4·e^{(β − 0.17)/e}`, the growth rate of the diagonal bound.
pub fn diagonal_base(stage: &ExponentStage, prec: u32) -> Result<ExactReal> {
    diagonal_base_for_beta(&stage.beta, prec)
}

pub fn diagonal_base_for_beta(beta: &Rational, prec: u32) -> Result<ExactReal> {
    let v = checked_eval("diagonal_base", prec, |p| {
        let one = Point::new(p, 1);
        let f1 = entropy(&one).add(&correction(beta, &one));
        Ok(f1.exp().0)
    })?;
    Ok(v.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stage(alpha: Alpha, beta: (i32, i32)) -> ExponentStage {
        ExponentStage::new(alpha, Rational::from(beta), 0).unwrap()
    }

    #[test]
    fn m_at_one_is_one_over_e() {
        let s = stage(Alpha::zero(), (8, 100));
        let p = stage_profile(&s, &ExactReal::from_f64(1.0, 128)).unwrap();
        assert!((p.m.to_f64() - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn correction_at_one() {
        // (−0.25 + 0.03 + 0.08)/e = −0.14/e
        let g = correction(&Rational::from((3, 100)), &Point::new(128, 1));
        assert!((g.0.to_f64() - (-0.14 / std::f64::consts::E)).abs() < 1e-15);
        assert!((g.0.to_f64() + 0.051_502_1).abs() < 5e-6);
    }

    #[test]
    fn diagonal_bases() {
        let b = |num, den| {
            diagonal_base_for_beta(&Rational::from((num, den)), 128)
                .unwrap()
                .to_f64()
        };
        assert!((b(3, 100) - 3.79921).abs() < 1e-5);
        let single = b(8, 100);
        assert!(single <= 3.87 && (single - 3.8697).abs() < 1e-4);
        let none = diagonal_base_for_beta(&Rational::from((17, 100)), 128).unwrap();
        assert_eq!(none.value().to_f64(), 4.0);
    }

    #[test]
    fn alpha_parsing_and_display() {
        assert_eq!(
            Alpha::parse("0.09/e").unwrap(),
            Alpha::OverE(Rational::from((9, 100)))
        );
        assert_eq!(Alpha::from_beta(&Rational::from((8, 100))).to_string(), "0.09/e");
        assert!(Alpha::parse("-1").is_err());
        assert_eq!(rational_to_decimal(&Rational::from((1, 3))), "1/3");
        assert_eq!(rational_to_decimal(&Rational::from((-33, 1000))), "-0.033");
        assert_eq!(rational_to_decimal(&Rational::from(2)), "2");
    }

    #[test]
    fn paper_chain_alphas_follow_the_rule() {
        let chain = ExponentStage::paper_chain();
        assert!(chain[0].alpha.is_zero());
        for w in chain.windows(2) {
            assert_eq!(w[1].alpha, Alpha::from_beta(&w[0].beta));
        }
        assert_eq!(chain[3].alpha.to_string(), "0.137/e");
    }

    #[test]
    fn beta_out_of_range_is_rejected() {
        assert!(ExponentStage::new(Alpha::zero(), Rational::from((11, 100)), 0).is_err());
        assert!(ExponentStage::new(Alpha::zero(), Rational::from(-1), 0).is_err());
    }

    #[test]
    fn profile_rejects_lambda_outside_unit_interval() {
        let s = stage(Alpha::zero(), (8, 100));
        assert!(stage_profile(&s, &ExactReal::from_f64(0.0, 128)).is_err());
        assert!(stage_profile(&s, &ExactReal::from_f64(1.5, 128)).is_err());
    }
}

//! Closed-form Ramsey bounds and the auxiliary functions around them.
//!
//! Exact quantities come back as [`Integer`] / [`Rational`] / [`QuadraticSurd`];
//! transcendental ones as [`BoundValue`] (log value plus linear value or an
//! overflow marker) or [`ExactReal`], each checked at doubled precision.

use std::cmp::Ordering;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{checked_eval, BoundValue, ExactReal, Point, QuadraticSurd, Real};
use crate::stage;

fn positive(op: &'static str, name: &str, v: u32) -> Result<()> {
    if v == 0 {
        return Err(Error::domain(op, format!("{name} must be a positive integer")));
    }
    Ok(())
}

fn open_unit(op: &'static str, name: &str, v: &Rational) -> Result<()> {
    if v.cmp0() != Ordering::Greater || *v >= 1 {
        return Err(Error::domain(op, format!("{name} = {v} must lie in (0, 1)")));
    }
    Ok(())
}

fn ln_rational(q: &Rational, p: u32) -> Float {
    Float::with_val(p, q).ln()
}

/// `C(k + l − 2, k − 1)`.
pub fn es_bound(k: u32, l: u32) -> Result<Integer> {
    positive("es_bound", "k", k)?;
    positive("es_bound", "l", l)?;
    Ok(Integer::from(Integer::binomial_u(k + l - 2, k - 1)))
}

/// `x^{−k+1}(1−x)^{−l+1}`, exact.
pub fn es_product_bound(k: u32, l: u32, x: &Rational) -> Result<Rational> {
    positive("es_product_bound", "k", k)?;
    positive("es_product_bound", "l", l)?;
    open_unit("es_product_bound", "x", x)?;
    let one_minus = Rational::from(1) - x.clone();
    let a = Rational::from(x.clone().recip()).pow(k - 1);
    let b = one_minus.recip().pow(l - 1);
    Ok(a * b)
}

/// Lower end of the admissible `p` range, `(√5 − 1)/(√5 + 1) = (3 − √5)/2`.
pub fn golden_p_min() -> QuadraticSurd {
    QuadraticSurd::new((3, 2), (-1, 2))
}

/// `x = φp + (1 − √5)/2`, the root of `(1−p)² = (1−x)(p−x)` in `(0, p)`.
pub fn golden_x(p: &QuadraticSurd) -> Result<QuadraticSurd> {
    if *p <= golden_p_min() || *p >= QuadraticSurd::one() {
        return Err(Error::domain(
            "golden_x",
            format!("p = {} outside ((3 - sqrt5)/2, 1)", p.to_f64()),
        ));
    }
    let shift = QuadraticSurd::new((1, 2), (-1, 2));
    Ok(&(&QuadraticSurd::phi() * p) + &shift)
}

fn surd_float(s: &QuadraticSurd, prec: u32) -> Float {
    s.to_float(prec)
}

/// `4(k+l) x^{−k/2} (1−p)^{−l}` with `x = golden_x(p)`.
pub fn thm_easy_bound(k: u32, l: u32, p: &QuadraticSurd, prec: u32) -> Result<BoundValue> {
    positive("thm_easy_bound", "k", k)?;
    positive("thm_easy_bound", "l", l)?;
    let x = golden_x(p)?;
    let one_minus_p = &QuadraticSurd::one() - p;
    let log = checked_eval("thm_easy_bound", prec, |w| {
        let mut v = Float::with_val(w, 4 * (u64::from(k) + u64::from(l))).ln();
        v -= Float::with_val(w, surd_float(&x, w).ln()) * k / 2u32;
        v -= Float::with_val(w, surd_float(&one_minus_p, w).ln()) * l;
        Ok(v)
    })?;
    Ok(BoundValue::from_log(log))
}

/// `((√5+1)k + (2√5−2)l) / ((√5+1)(k+2l))`, the minimiser of [`thm_easy_bound`].
pub fn optimal_p(k: u32, l: u32) -> Result<QuadraticSurd> {
    positive("optimal_p", "k", k)?;
    positive("optimal_p", "l", l)?;
    let k = QuadraticSurd::rational(k);
    let l = QuadraticSurd::rational(l);
    let s1 = QuadraticSurd::new(1, 1);
    let num = &(&s1 * &k) + &(&QuadraticSurd::new(-2, 2) * &l);
    let den = &s1 * &(&k + &(&QuadraticSurd::rational(2) * &l));
    Ok(&num / &den)
}

/// A corollary bound together with its log-ratio to `ES(k, l)`.
#[derive(Clone, Debug)]
pub struct RatioBound {
    pub bound: BoundValue,
    /// `ln(bound / ES(k, l))`; negative means an improvement.
    pub log_ratio_to_es: ExactReal,
}

fn log_es(k: u32, l: u32, prec: u32) -> Result<Float> {
    let es = es_bound(k, l)?;
    Ok(Float::with_val(prec, &es).ln())
}

fn ln_golden_factor(k: u32, l: u32, w: u32) -> Float {
    // ln((√5+1)(k+2l)/(4l))
    let s = Float::with_val(w, 5).sqrt() + 1u32;
    let q = Rational::from((u64::from(k) + 2 * u64::from(l), 4 * u64::from(l)));
    Float::with_val(w, s * Float::with_val(w, &q)).ln()
}

/// `4(k+l)((√5+1)(k+2l)/(4l))^l ((k+2l)/k)^{k/2}` for `k >= l`.
pub fn cor_easy_bound(k: u32, l: u32, prec: u32) -> Result<RatioBound> {
    positive("cor_easy_bound", "k", k)?;
    positive("cor_easy_bound", "l", l)?;
    if l > k {
        return Err(Error::domain("cor_easy_bound", format!("requires k >= l, got k = {k}, l = {l}")));
    }
    let log = checked_eval("cor_easy_bound", prec, |w| Ok(cor_log(4, k, l, w)))?;
    let ratio = checked_eval("cor_easy_bound", prec, |w| Ok(cor_log(4, k, l, w) - log_es(k, l, w)?))?;
    Ok(RatioBound {
        bound: BoundValue::from_log(log),
        log_ratio_to_es: ratio.into(),
    })
}

fn cor_log(lead: u32, k: u32, ell: u32, w: u32) -> Float {
    let mut v = Float::with_val(w, u64::from(lead) * (u64::from(k) + u64::from(ell))).ln();
    v += ln_golden_factor(k, ell, w) * ell;
    let q = Rational::from((u64::from(k) + 2 * u64::from(ell), u64::from(k)));
    v += ln_rational(&q, w) * k / 2u32;
    v
}

/// `ln(4/(√5+1))`, the per-unit-`l` saving of [`cor_easy_bound`] over `ES`
/// as `l/k → 0`.
pub fn small_l_improvement_rate(prec: u32) -> Result<ExactReal> {
    let v = checked_eval("small_l_improvement_rate", prec, |w| {
        let s = Float::with_val(w, 5).sqrt() + 1u32;
        Ok(Float::with_val(w, 4u32 / s).ln())
    })?;
    Ok(v.into())
}

/// `λ ln((√5+1)(1+2λ)/(4(1+λ))) + ½ ln((1+2λ)/(1+λ)²)`, the exponential rate
/// of `cor_easy_bound / ES` along `l = λk`.
pub fn crossover_exponent<R: Real>(lam: &R) -> R {
    let one = lam.int(1);
    let two_lam_1 = lam.add(lam).add(&one);
    let lam_1 = lam.add(&one);
    let s = lam.constant(&Rational::from(5));
    let root5 = s.ln().scale(&Rational::from((1, 2))).exp();
    let golden = root5.add(&one).mul(&two_lam_1).div(&lam_1.scale(&Rational::from(4)));
    let second = two_lam_1.div(&lam_1.mul(&lam_1)).ln().scale(&Rational::from((1, 2)));
    lam.mul(&golden.ln()).add(&second)
}

/// Root of [`crossover_exponent`] in `(0.5, 1)` by bisection to `1e-9`.
pub fn crossover_root(prec: u32) -> Result<ExactReal> {
    let root = checked_eval("crossover_root", prec, |w| {
        let f = |x: &Float| crossover_exponent(&Point(x.clone())).0;
        let mut lo = Float::with_val(w, 0.5);
        let mut hi = Float::with_val(w, 1);
        let tol = Float::with_val(w, 1e-12);
        if f(&lo) >= 0 || f(&hi) <= 0 {
            return Err(Error::InternalContradiction("crossover bracket lost its sign change".into()));
        }
        while Float::with_val(w, &hi - &lo) > tol {
            let mid = Float::with_val(w, &lo + &hi) / 2u32;
            if f(&mid) < 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Float::with_val(w, &lo + &hi) / 2u32)
    })?;
    Ok(root.into())
}

/// The non-red clique sizes `l_1, …, l_c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MulticolorTarget {
    parts: Vec<u32>,
}

impl MulticolorTarget {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::domain("MulticolorTarget", "at least one colour is required"));
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::domain("MulticolorTarget", "every part must be positive"));
        }
        Ok(MulticolorTarget { parts })
    }

    pub fn single(l: u32) -> Result<Self> {
        Self::new(vec![l])
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn colors(&self) -> usize {
        self.parts.len()
    }

    /// `l = Σ l_i`.
    pub fn ell(&self) -> u32 {
        self.parts.iter().sum()
    }
}

/// `l^l / Π l_i^{l_i}`, exact.
pub fn theta(target: &MulticolorTarget) -> Rational {
    let l = target.ell();
    let num = Integer::from(l).pow(l);
    let den = target
        .parts()
        .iter()
        .fold(Integer::from(1), |acc, &p| acc * Integer::from(p).pow(p));
    Rational::from((num, den))
}

/// `x^{−k+1} Π y_i^{−l_i+1}`, exact; needs `x + Σ y_i <= 1`.
pub fn multicolor_product_bound(
    k: u32,
    target: &MulticolorTarget,
    x: &Rational,
    ys: &[Rational],
) -> Result<Rational> {
    positive("multicolor_product_bound", "k", k)?;
    if ys.len() != target.colors() {
        return Err(Error::domain(
            "multicolor_product_bound",
            format!("{} densities for {} colours", ys.len(), target.colors()),
        ));
    }
    if x.cmp0() != Ordering::Greater || ys.iter().any(|y| y.cmp0() != Ordering::Greater) {
        return Err(Error::domain("multicolor_product_bound", "densities must be positive"));
    }
    let total = ys.iter().fold(x.clone(), |acc, y| acc + y);
    if total > 1 {
        return Err(Error::domain("multicolor_product_bound", format!("x + sum(y) = {total} exceeds 1")));
    }
    let mut v = x.clone().recip().pow(k - 1);
    for (y, &l) in ys.iter().zip(target.parts()) {
        v *= y.clone().recip().pow(l - 1);
    }
    Ok(v)
}

/// `2(k+l)((k+2l)/k)^{k/2}((√5+1)(k+2l)/(4l))^l Θ(l)`.
pub fn cor_easy2_bound(k: u32, target: &MulticolorTarget, prec: u32) -> Result<BoundValue> {
    positive("cor_easy2_bound", "k", k)?;
    let l = target.ell();
    let th = theta(target);
    let log = checked_eval("cor_easy2_bound", prec, |w| Ok(cor_log(2, k, l, w) + ln_rational(&th, w)))?;
    Ok(BoundValue::from_log(log))
}

/// `p^{1/(1−μ)}(1−μ)`, the supremum of admissible `x` in the book corollary.
pub fn book_frontier(p: &Rational, mu: &Rational, prec: u32) -> Result<ExactReal> {
    book_domain(p, mu)?;
    let one_mu = Rational::from(1) - mu.clone();
    let v = checked_eval("book_frontier", prec, |w| {
        let lp = ln_rational(p, w) / Float::with_val(w, &one_mu);
        Ok(lp.exp() * Float::with_val(w, &one_mu))
    })?;
    Ok(v.into())
}

fn book_domain(p: &Rational, mu: &Rational) -> Result<()> {
    if mu.cmp0() != Ordering::Greater || mu >= p || *p >= 1 {
        return Err(Error::domain("book_frontier", format!("requires 0 < mu < p < 1, got p = {p}, mu = {mu}")));
    }
    Ok(())
}

/// `(p^{1/r} − μ)^r (1−μ)^{1−r}`, whose limit as `r → ∞` is [`book_frontier`].
pub fn book_frontier_finite(p: &Rational, mu: &Rational, r: u64, prec: u32) -> Result<ExactReal> {
    book_domain(p, mu)?;
    if r == 0 {
        return Err(Error::domain("book_frontier_finite", "r must be positive"));
    }
    let v = checked_eval("book_frontier_finite", prec, |w| {
        let root = (ln_rational(p, w) / r).exp();
        let base = root - Float::with_val(w, mu);
        if base <= 0 {
            return Err(Error::domain("book_frontier_finite", "p^(1/r) <= mu"));
        }
        let one_mu = Float::with_val(w, 1) - Float::with_val(w, mu);
        let log = base.ln() * r - one_mu.ln() * (Float::with_val(w, r) - 1u32);
        Ok(log.exp())
    })?;
    Ok(v.into())
}

/// `x^{−k/2}(μy)^{−l/2}`, the vertex count from which the book corollary applies.
pub fn bookcor_size_threshold(
    k: u32,
    l: u32,
    x: &Rational,
    mu: &Rational,
    y: &Rational,
    prec: u32,
) -> Result<BoundValue> {
    const OP: &str = "bookcor_size_threshold";
    positive(OP, "k", k)?;
    positive(OP, "l", l)?;
    open_unit(OP, "x", x)?;
    open_unit(OP, "mu", mu)?;
    open_unit(OP, "y", y)?;
    let my = Rational::from(mu * y);
    let log = checked_eval(OP, prec, |w| {
        let a = ln_rational(x, w) * k;
        let b = ln_rational(&my, w) * l;
        Ok(-(a + b) / 2u32)
    })?;
    Ok(BoundValue::from_log(log))
}

/// `e^{k F(l/k)}` for the smooth exponent function with parameter `beta`;
/// arguments are swapped when `l > k`.
pub fn main_exponent_bound(k: u32, l: u32, beta: &Rational, prec: u32) -> Result<BoundValue> {
    positive("main_exponent_bound", "k", k)?;
    positive("main_exponent_bound", "l", l)?;
    let (k, l) = if l > k { (l, k) } else { (k, l) };
    let lam = Rational::from((l, k));
    let log = checked_eval("main_exponent_bound", prec, |w| {
        let x = Point(Float::with_val(w, &lam));
        let f = stage::entropy(&x).add(&stage::correction(beta, &x));
        Ok(f.0 * k)
    })?;
    Ok(BoundValue::from_log(log))
}

/// The exponent `β = 0.03` of the final stage.
pub fn main_beta() -> Rational {
    Rational::from((3, 100))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn es_values() {
        assert_eq!(es_bound(3, 3).unwrap(), 6);
        assert_eq!(es_bound(4, 4).unwrap(), 20);
        assert_eq!(es_bound(5, 3).unwrap(), es_bound(3, 5).unwrap());
        assert_eq!(es_bound(5, 3).unwrap(), 15);
        assert!(es_bound(0, 3).is_err());
    }

    #[test]
    fn es_product_values() {
        assert_eq!(es_product_bound(3, 3, &q(1, 2)).unwrap(), 16);
        assert_eq!(es_product_bound(2, 2, &q(1, 4)).unwrap(), q(16, 3));
        assert_eq!(es_product_bound(4, 1, &q(1, 3)).unwrap(), 27);
        assert!(es_product_bound(3, 3, &q(1, 1)).is_err());
        assert!(es_product_bound(3, 3, &q(0, 1)).is_err());
    }

    #[test]
    fn golden_x_at_half() {
        let p = QuadraticSurd::rational((1, 2));
        let x = golden_x(&p).unwrap();
        assert_eq!(x, QuadraticSurd::new((3, 4), (-1, 4)));
        let one = QuadraticSurd::one();
        let lhs = (&one - &p).powi(2);
        let rhs = &(&one - &x) * &(&p - &x);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, QuadraticSurd::rational((1, 4)));
    }

    #[test]
    fn golden_x_rejects_endpoints() {
        assert!(golden_x(&golden_p_min()).is_err());
        assert!(golden_x(&QuadraticSurd::one()).is_err());
        // The lower endpoint maps to zero.
        let x = &(&QuadraticSurd::phi() * &golden_p_min()) + &QuadraticSurd::new((1, 2), (-1, 2));
        assert!(x.is_zero());
    }

    #[test]
    fn thm_easy_at_half() {
        let b = thm_easy_bound(3, 3, &QuadraticSurd::rational((1, 2)), 128).unwrap();
        assert!((b.to_f64() - 2300.6).abs() < 0.5, "{}", b.to_f64());
    }

    #[test]
    fn thm_easy_overflows_in_log_space() {
        let p = QuadraticSurd::rational(Rational::from(1) - Rational::from((1, Integer::from(1) << 2000u32)));
        let b = thm_easy_bound(3, 1 << 20, &p, 128).unwrap();
        assert!(b.is_overflow());
        assert!(b.ln() > 1e8);
    }

    #[test]
    fn cor_easy_matches_thm_easy_at_optimal_p() {
        let cor = cor_easy_bound(5, 3, 128).unwrap();
        let thm = thm_easy_bound(5, 3, &optimal_p(5, 3).unwrap(), 128).unwrap();
        assert!((cor.bound.ln() - thm.ln()).abs() < 1e-25);
        let c33 = cor_easy_bound(3, 3, 128).unwrap();
        assert!((c33.bound.to_f64() - 1783.4).abs() < 1.0, "{}", c33.bound.to_f64());
        assert!(cor_easy_bound(2, 3, 128).is_err());
    }

    #[test]
    fn optimal_p_minimises_thm_easy() {
        // Golden-section search over rational p, compared at full precision.
        let f = |p: &Float| {
            let pq = QuadraticSurd::rational(p.to_rational().unwrap());
            thm_easy_bound(3, 3, &pq, 128).unwrap().log_value.into_inner()
        };
        let mut a = Float::with_val(128, 0.3820);
        let mut b = Float::with_val(128, 0.9999);
        let g = (Float::with_val(128, 5).sqrt() - 1u32) / 2u32;
        while Float::with_val(128, &b - &a) > 1e-12 {
            let c = Float::with_val(128, &b - Float::with_val(128, &g * Float::with_val(128, &b - &a)));
            let d = Float::with_val(128, &a + Float::with_val(128, &g * Float::with_val(128, &b - &a)));
            if f(&c) < f(&d) {
                b = d;
            } else {
                a = c;
            }
        }
        let found = (Float::with_val(128, &a + &b) / 2u32).to_f64();
        let opt = optimal_p(3, 3).unwrap().to_f64();
        assert!((found - opt).abs() < 1e-9, "{found} vs {opt}");
    }

    #[test]
    fn improvement_rate() {
        let r = small_l_improvement_rate(128).unwrap().to_f64();
        assert!((r - 0.2119).abs() < 1e-4);
    }

    #[test]
    fn crossover() {
        let root = crossover_root(128).unwrap().to_f64();
        assert!((0.6985..=0.6995).contains(&root), "{root}");
        let at_one = crossover_exponent(&Point::new(128, 1)).0.to_f64();
        assert!((at_one - 0.0497).abs() < 1e-4, "{at_one}");
        assert!(crossover_exponent(&Point::new(128, (1, 2))).0 < 0);
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(&MulticolorTarget::single(5).unwrap()), 1);
        assert_eq!(theta(&MulticolorTarget::new(vec![1, 1]).unwrap()), 4);
        assert_eq!(theta(&MulticolorTarget::new(vec![2, 1]).unwrap()), q(27, 4));
        assert_eq!(theta(&MulticolorTarget::new(vec![1, 1, 1]).unwrap()), 27);
        assert!(MulticolorTarget::new(vec![]).is_err());
        assert!(MulticolorTarget::new(vec![2, 0]).is_err());
    }

    #[test]
    fn multicolor_product() {
        let t = MulticolorTarget::new(vec![2, 2]).unwrap();
        let v = multicolor_product_bound(3, &t, &q(1, 2), &[q(1, 4), q(1, 4)]).unwrap();
        assert_eq!(v, 64);
        let single = MulticolorTarget::single(4).unwrap();
        assert_eq!(
            multicolor_product_bound(3, &single, &q(1, 3), &[q(2, 3)]).unwrap(),
            es_product_bound(3, 4, &q(1, 3)).unwrap()
        );
        assert!(multicolor_product_bound(3, &t, &q(1, 2), &[q(1, 4), q(1, 3)]).is_err());
    }

    #[test]
    fn cor_easy2_is_half_at_one_color() {
        let one = cor_easy2_bound(3, &MulticolorTarget::single(3).unwrap(), 128).unwrap();
        let two = cor_easy_bound(3, 3, 128).unwrap();
        assert!((one.to_f64() * 2.0 - two.bound.to_f64()).abs() < 1e-9);
        assert!((one.to_f64() - 891.7).abs() < 0.5);
    }

    #[test]
    fn book_frontier_values() {
        let v = book_frontier(&q(1, 2), &q(1, 5), 128).unwrap().to_f64();
        assert!((v - 0.33636).abs() < 1e-5, "{v}");
        let tiny = book_frontier(&q(1, 2), &q(1, 1_000_000), 128).unwrap().to_f64();
        assert!((tiny - 0.5).abs() < 1e-5);
        let finite = book_frontier_finite(&q(1, 2), &q(1, 5), 1 << 20, 128).unwrap().to_f64();
        assert!((finite - v).abs() < 1e-4);
        assert!(book_frontier(&q(1, 2), &q(1, 2), 128).is_err());
    }

    #[test]
    fn size_threshold() {
        let h = q(1, 2);
        let v = bookcor_size_threshold(2, 2, &h, &h, &h, 128).unwrap();
        assert!((v.to_f64() - 8.0).abs() < 1e-12);
        let bigger_x = bookcor_size_threshold(2, 2, &q(3, 4), &h, &h, 128).unwrap();
        let bigger_mu = bookcor_size_threshold(2, 2, &h, &q(3, 4), &h, 128).unwrap();
        assert!(bigger_x.to_f64() < 8.0 && bigger_mu.to_f64() < 8.0);
    }

    #[test]
    fn main_exponent_diagonal_rate() {
        let b = main_exponent_bound(10, 10, &main_beta(), 128).unwrap();
        let per_k = (b.ln() / 10.0).exp();
        assert!((per_k - 3.79920).abs() < 1e-5);
    }
}

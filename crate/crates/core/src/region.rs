//! Membership certificates for the region of pairs `(x, y)` with
//! `R(k, l) <= x^{−k} y^{−l}` for all large `k + l`.
//!
//! Points are built from three axioms: the Erdős–Szekeres line `y = 1 − x`,
//! the frontier handed on by a proven `alpha`, and domination (shrinking both
//! coordinates). A certificate is a tree of these rules and can be replayed.

use std::cmp::Ordering;

use rug::float::Round;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{DecimalValue, ExactReal, Interval, Real};
use crate::stage::{Alpha, YBranch};

/// Where a proven `alpha` came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `alpha = 0`, always available.
    ErdosSzekeres,
    /// Established by the verified chain stage with this index.
    Stage(usize),
}

/// An `alpha` for which `R(k, l) <= e^{φ(l/k)k + o(k)}` with
/// `φ(λ) = (λ+1)ln(λ+1) − λ ln λ − αλ` is known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenAlpha {
    pub(crate) alpha: Alpha,
    pub(crate) provenance: Provenance,
}

impl ProvenAlpha {
    pub fn alpha(&self) -> &Alpha {
        &self.alpha
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn erdos_szekeres() -> Self {
        ProvenAlpha {
            alpha: Alpha::zero(),
            provenance: Provenance::ErdosSzekeres,
        }
    }

    /// Only the verifier mints these, after a stage and its linear-domination
    /// hand-off both pass.
    pub(crate) fn from_stage(alpha: Alpha, stage: usize) -> Self {
        ProvenAlpha {
            alpha,
            provenance: Provenance::Stage(stage),
        }
    }
}

/// The inference rule at one node of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// `(x, 1 − x)`.
    BaseEs,
    /// Both coordinates at most those of the single child.
    Dominated,
    /// On the frontier of a proven `alpha`; the child is the `alpha`'s source.
    LemmaY { alpha: Alpha, branch: YBranch },
    /// A leaf naming the verified chain stage that proved `alpha`.
    AsymptoticBound { alpha: Alpha, stage: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipCertificate {
    #[serde(flatten)]
    pub rule: Rule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<DecimalValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<DecimalValue>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<MembershipCertificate>,
}

impl MembershipCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificate serializes")
    }
}

/// A certified point of the region.
#[derive(Clone, Debug, PartialEq)]
pub struct RPoint {
    pub x: ExactReal,
    pub y: ExactReal,
    pub certificate: MembershipCertificate,
}

fn check_x(op: &'static str, x: &Float, allow_one: bool) -> Result<()> {
    let ok = *x > 0 && (*x < 1 || (allow_one && *x == 1));
    if !ok {
        let range = if allow_one { "(0, 1]" } else { "(0, 1)" };
        return Err(Error::domain(op, format!("x = {} outside {range}", x.to_f64())));
    }
    Ok(())
}

/// `(x, 1 − x)`; `y` is rounded down so the stored point is always dominated
/// by the exact one.
pub fn base_point(x: &ExactReal) -> Result<RPoint> {
    check_x("base_point", x.value(), false)?;
    let prec = x.precision();
    let y = Float::with_val_round(prec, 1 - x.value(), Round::Down).0;
    let y = ExactReal::new(y);
    Ok(RPoint {
        certificate: MembershipCertificate {
            rule: Rule::BaseEs,
            x: Some(x.to_json()),
            y: Some(y.to_json()),
            children: Vec::new(),
        },
        x: x.clone(),
        y,
    })
}

/// Enclosure of the `alpha` frontier at `x` and the branch used: for
/// `x < 1/2` (or an enclosure entirely below 1/2) `min(e^α(1 − x), 1)`,
/// otherwise `1 − x e^{−α}`.
pub fn frontier_enclosure(alpha: &Alpha, x: &Interval) -> (Interval, YBranch) {
    let a = alpha.to_real(x);
    if x.cmp_rational(&Rational::from((1, 2))) == Some(Ordering::Less) {
        let ln_y = a.add(&x.neg().ln_1p()).clamp_max_zero();
        (ln_y.exp(), YBranch::Low)
    } else {
        let y = Real::neg(&x.mul(&a.neg().exp())).add(&x.int(1));
        (y, YBranch::High)
    }
}

fn alpha_source(alpha: &ProvenAlpha) -> Option<MembershipCertificate> {
    match alpha.provenance {
        Provenance::ErdosSzekeres => None,
        Provenance::Stage(stage) => Some(MembershipCertificate {
            rule: Rule::AsymptoticBound {
                alpha: alpha.alpha.clone(),
                stage,
            },
            x: None,
            y: None,
            children: Vec::new(),
        }),
    }
}

/// The largest `y` the frontier of `alpha` certifies at `x ∈ (0, 1]`.
pub fn lemma_y_point(alpha: &ProvenAlpha, x: &ExactReal) -> Result<RPoint> {
    check_x("lemma_y_point", x.value(), true)?;
    let xi = Interval::point(x.value().clone());
    let (y, branch) = frontier_enclosure(&alpha.alpha, &xi);
    let y = ExactReal::new(y.lo().clone());
    Ok(RPoint {
        certificate: MembershipCertificate {
            rule: Rule::LemmaY {
                alpha: alpha.alpha.clone(),
                branch,
            },
            x: Some(x.to_json()),
            y: Some(y.to_json()),
            children: alpha_source(alpha).into_iter().collect(),
        },
        x: x.clone(),
        y,
    })
}

/// Outcome of a membership query. A refusal is an answer, not an error.
#[derive(Clone, Debug, PartialEq)]
pub enum Certification {
    Certified(MembershipCertificate),
    /// `gap = y − y_frontier > 0`.
    Refused { frontier: ExactReal, gap: ExactReal },
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified(_))
    }
}

fn largest(proven: &[ProvenAlpha]) -> ProvenAlpha {
    match proven.iter().max_by(|a, b| a.alpha.cmp_value(&b.alpha)) {
        Some(best) if !best.alpha.is_zero() => best.clone(),
        _ => ProvenAlpha::erdos_szekeres(),
    }
}

/// Certifies `(x, y)` by domination under the frontier of the largest proven
/// `alpha` (the base line when only `alpha = 0` is known).
pub fn certify_membership(x: &ExactReal, y: &ExactReal, proven: &[ProvenAlpha]) -> Result<Certification> {
    check_x("certify_membership", x.value(), false)?;
    if !(*y.value() > 0 && *y.value() <= 1) {
        return Err(Error::domain("certify_membership", "y must lie in (0, 1]"));
    }
    let best = largest(proven);
    let parent = if best.alpha.is_zero() {
        base_point(x)?
    } else {
        lemma_y_point(&best, x)?
    };
    if y.value() <= parent.y.value() {
        Ok(Certification::Certified(MembershipCertificate {
            rule: Rule::Dominated,
            x: Some(x.to_json()),
            y: Some(y.to_json()),
            children: vec![parent.certificate],
        }))
    } else {
        let prec = y.precision().max(parent.y.precision());
        let gap = Float::with_val(prec, y.value() - parent.y.value());
        Ok(Certification::Refused {
            frontier: parent.y,
            gap: gap.into(),
        })
    }
}

fn point_of(node: &MembershipCertificate) -> Result<(Float, Float)> {
    let missing = || Error::Parse("certificate node without coordinates".into());
    let x = node.x.as_ref().ok_or_else(missing)?.to_exact()?.into_inner();
    let y = node.y.as_ref().ok_or_else(missing)?.to_exact()?.into_inner();
    Ok((x, y))
}

/// Re-runs every rule of the certificate against the axioms and the proven
/// set; `Ok(())` means the claimed point is in the region.
pub fn replay(cert: &MembershipCertificate, proven: &[ProvenAlpha]) -> Result<()> {
    let fail = |m: String| Err(Error::InternalContradiction(format!("certificate replay: {m}")));
    match &cert.rule {
        Rule::BaseEs => {
            let (x, y) = point_of(cert)?;
            check_x("replay", &x, false)?;
            // Exact: y <= 1 − x in the rationals.
            let bound = Rational::from(1) - x.to_rational().expect("finite");
            if y.to_rational().expect("finite") > bound {
                return fail("base point above the line y = 1 - x".into());
            }
            Ok(())
        }
        Rule::Dominated => {
            let (x, y) = point_of(cert)?;
            let [child] = cert.children.as_slice() else {
                return fail("domination needs exactly one parent".into());
            };
            replay(child, proven)?;
            let (px, py) = point_of(child)?;
            if x > px || y > py || x <= 0 || y <= 0 {
                return fail("point not dominated by its parent".into());
            }
            Ok(())
        }
        Rule::LemmaY { alpha, branch } => {
            let (x, y) = point_of(cert)?;
            check_x("replay", &x, true)?;
            let source_ok = if alpha.is_zero() {
                cert.children.is_empty()
            } else {
                match cert.children.as_slice() {
                    [child] => {
                        replay(child, proven)?;
                        matches!(&child.rule, Rule::AsymptoticBound { alpha: a, .. } if a == alpha)
                    }
                    _ => false,
                }
            };
            if !source_ok {
                return fail(format!("alpha = {alpha} has no proven source"));
            }
            let (frontier, used) = frontier_enclosure(alpha, &Interval::point(x));
            if used != *branch {
                return fail("branch does not match x".into());
            }
            if y > *frontier.lo() {
                return fail("point above the frontier".into());
            }
            Ok(())
        }
        Rule::AsymptoticBound { alpha, stage } => {
            let known = proven
                .iter()
                .any(|p| p.alpha == *alpha && p.provenance == Provenance::Stage(*stage));
            if known {
                Ok(())
            } else {
                fail(format!("alpha = {alpha} was not proven by stage {stage}"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn er(v: f64) -> ExactReal {
        ExactReal::from_rational(&Rational::from_f64(v).unwrap(), 128)
    }

    fn dec(v: &str) -> ExactReal {
        ExactReal::parse(v, 128).unwrap()
    }

    fn alpha1() -> ProvenAlpha {
        ProvenAlpha::from_stage(Alpha::from_beta(&Rational::from((8, 100))), 0)
    }

    #[test]
    fn base_points() {
        let p = base_point(&er(0.5)).unwrap();
        assert_eq!(p.y.to_f64(), 0.5);
        let p = base_point(&er(0.25)).unwrap();
        assert_eq!(p.y.to_f64(), 0.75);
        assert!(base_point(&er(0.0)).is_err());
        assert!(base_point(&er(1.0)).is_err());
    }

    #[test]
    fn zero_alpha_reduces_to_base_line() {
        let es = ProvenAlpha::erdos_szekeres();
        for x in [0.2, 0.7] {
            let p = lemma_y_point(&es, &er(x)).unwrap();
            assert!((p.y.to_f64() - (1.0 - x)).abs() < 1e-15);
        }
    }

    #[test]
    fn lemma_y_value_at_point_three() {
        let p = lemma_y_point(&alpha1(), &dec("0.3")).unwrap();
        assert!((p.y.to_f64() - 0.72356).abs() < 1e-5, "{}", p.y.to_f64());
        assert!(matches!(p.certificate.rule, Rule::LemmaY { branch: YBranch::Low, .. }));
    }

    #[test]
    fn branches_meet_at_crossover() {
        // x = e^α/(1 + e^α) gives y = x on both branches.
        let a = Alpha::from_beta(&Rational::from((8, 100)));
        let ea = a.to_float(256).exp();
        let x = Float::with_val(256, &ea / Float::with_val(256, &ea + 1u32));
        let low = Float::with_val(256, &ea * Float::with_val(256, 1 - &x));
        let high = Float::with_val(256, 1 - Float::with_val(256, &x / &ea));
        assert!(Float::with_val(256, &low - &x).abs() < 1e-12);
        assert!(Float::with_val(256, &high - &x).abs() < 1e-12);
    }

    #[test]
    fn certification_examples() {
        let es = [ProvenAlpha::erdos_szekeres()];
        let c = certify_membership(&dec("0.3"), &dec("0.7"), &es).unwrap();
        let Certification::Certified(cert) = c else { panic!("refused") };
        assert!(matches!(cert.children[0].rule, Rule::BaseEs));
        replay(&cert, &es).unwrap();

        match certify_membership(&dec("0.3"), &dec("0.72"), &es).unwrap() {
            Certification::Refused { gap, .. } => assert!((gap.to_f64() - 0.02).abs() < 1e-12),
            other => panic!("expected refusal, got {other:?}"),
        }

        let proven = [ProvenAlpha::erdos_szekeres(), alpha1()];
        let c = certify_membership(&dec("0.3"), &dec("0.72"), &proven).unwrap();
        let Certification::Certified(cert) = c else { panic!("refused") };
        replay(&cert, &proven).unwrap();
        // Without the stage that proved alpha the certificate does not replay.
        assert!(replay(&cert, &es).is_err());
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let proven = [alpha1()];
        let p = lemma_y_point(&alpha1(), &dec("0.3")).unwrap();
        let mut cert = p.certificate;
        cert.y = Some(dec("0.75").to_json());
        assert!(replay(&cert, &proven).is_err());
    }

    #[test]
    fn certificate_json_round_trip() {
        let proven = [alpha1()];
        let Certification::Certified(cert) = certify_membership(&dec("0.6"), &dec("0.4"), &proven).unwrap() else {
            panic!("refused")
        };
        let text = serde_json::to_string(&cert).unwrap();
        assert!(text.contains("\"rule\":\"dominated\""));
        let back: MembershipCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        replay(&back, &proven).unwrap();
    }
}

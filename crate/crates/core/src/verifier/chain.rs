//! Verification of a sequence of stages, each handing its `alpha` on.

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{DecimalValue, DEFAULT_PRECISION};
use crate::region::ProvenAlpha;
use crate::stage::{diagonal_base_for_beta, Alpha, ExponentStage};

use super::{verify_linear_domination, verify_stage, DominationReport, Status, VerificationPolicy, VerificationReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStage {
    pub report: VerificationReport,
    pub domination: Option<DominationReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub status: Status,
    pub stages: Vec<ChainStage>,
    pub proven: Vec<ProvenAlpha>,
    /// `β` of the last certified stage.
    #[serde(with = "option_rational")]
    pub final_beta: Option<Rational>,
    /// `e^{F(1)}` of the last certified stage.
    pub diagonal_base: Option<DecimalValue>,
    pub wall_time_ms: u64,
}

impl ChainReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn diagonal_base_f64(&self) -> Option<f64> {
        self.diagonal_base.as_ref().and_then(|d| d.value.parse().ok())
    }

    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.wall_time_ms = 0;
        for s in &mut r.stages {
            s.report.wall_time_ms = 0;
        }
        r
    }
}

mod option_rational {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&crate::stage::rational_to_decimal(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| crate::numeric::parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Checks the linkage `α_0 = 0`, `α_i = (0.17 − β_{i−1})/e`.
pub fn check_linkage(stages: &[(Alpha, Rational)]) -> Result<()> {
    let Some((first, _)) = stages.first() else {
        return Err(Error::Precondition("empty chain".into()));
    };
    if !first.is_zero() {
        return Err(Error::Precondition(format!("first stage must have alpha = 0, got {first}")));
    }
    for (i, w) in stages.windows(2).enumerate() {
        let expected = Alpha::from_beta(&w[0].1);
        if w[1].0 != expected {
            return Err(Error::Precondition(format!(
                "stage {}: alpha = {} but the previous beta gives {expected}",
                i + 1,
                w[1].0
            )));
        }
    }
    Ok(())
}

/// Verifies stages in order, admitting each stage's hand-off `alpha` into the
/// proven set before the next; stops at the first non-PASS.
pub fn verify_chain(stages: &[(Alpha, Rational)], policy: &VerificationPolicy) -> Result<ChainReport> {
    check_linkage(stages)?;
    policy.validate()?;
    let start = std::time::Instant::now();
    let mut proven = vec![ProvenAlpha::erdos_szekeres()];
    let mut out = Vec::with_capacity(stages.len());
    let mut status = Status::Pass;
    let mut final_beta = None;
    for (i, (alpha, beta)) in stages.iter().enumerate() {
        let stage = ExponentStage::new(alpha.clone(), beta.clone(), i)?;
        let report = verify_stage(&stage, &proven, policy)?;
        if report.status != Status::Pass {
            status = report.status;
            out.push(ChainStage {
                report,
                domination: None,
            });
            break;
        }
        let domination = verify_linear_domination(beta)?;
        if domination.status != Status::Pass {
            status = domination.status;
            out.push(ChainStage {
                report,
                domination: Some(domination),
            });
            break;
        }
        proven.push(ProvenAlpha::from_stage(domination.alpha.clone(), i));
        final_beta = Some(beta.clone());
        out.push(ChainStage {
            report,
            domination: Some(domination),
        });
    }
    let diagonal_base = match (&final_beta, status) {
        (Some(b), Status::Pass) => Some(diagonal_base_for_beta(b, DEFAULT_PRECISION)?.to_json()),
        _ => None,
    };
    Ok(ChainReport {
        status,
        stages: out,
        proven,
        final_beta: if status == Status::Pass { final_beta } else { None },
        diagonal_base,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

/// The four stages of the published chain as `(alpha, beta)` pairs.
pub fn paper_chain_pairs() -> Vec<(Alpha, Rational)> {
    ExponentStage::paper_chain()
        .into_iter()
        .map(|s| (s.alpha, s.beta))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linkage_is_enforced() {
        check_linkage(&paper_chain_pairs()).unwrap();
        let mut bad = paper_chain_pairs();
        bad[1].0 = Alpha::parse("0.1/e").unwrap();
        assert!(matches!(
            verify_chain(&bad, &VerificationPolicy::default()),
            Err(Error::Precondition(_))
        ));
        let mut bad = paper_chain_pairs();
        bad[0].0 = Alpha::parse("0.01").unwrap();
        assert!(check_linkage(&bad).is_err());
        assert!(check_linkage(&[]).is_err());
    }

    #[test]
    fn single_stage_chain() {
        let chain = &paper_chain_pairs()[..1];
        let r = verify_chain(chain, &VerificationPolicy::default()).unwrap();
        assert_eq!(r.status, Status::Pass);
        let base = r.diagonal_base_f64().unwrap();
        assert!(base <= 3.87, "{base}");
        assert_eq!(r.proven.len(), 2);
    }
}

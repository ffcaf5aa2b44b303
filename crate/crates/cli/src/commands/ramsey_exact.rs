use ramsey_core::clique::{ramsey_exact, RamseyOutcome};
use serde::{Deserialize, Serialize};

use super::targets;
use crate::cli::RamseyExactArgs;
use crate::config::RunConfig;
use crate::output::{self, Format};
use crate::{Failure, Outcome};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exact {
    pub k: u32,
    pub targets: Vec<u32>,
    pub n_max: u32,
    pub outcome: RamseyOutcome,
}

pub fn run(a: &RamseyExactArgs, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let t = targets(a.l, a.l_parts.as_deref())?;
    let outcome = ramsey_exact(a.k, &t, a.n_max)?;
    let name = format!(
        "R({}, {})",
        a.k,
        t.parts().iter().map(u32::to_string).collect::<Vec<_>>().join(", ")
    );
    let (value, classes, relation) = match &outcome {
        RamseyOutcome::Exact { value, classes } => (*value, classes.clone(), "="),
        RamseyOutcome::AtLeast { value, classes } => (*value, classes.clone(), ">="),
    };
    let body = match cfg.format.unwrap_or(Format::Text) {
        Format::Text => {
            let counts: Vec<String> = classes.iter().map(usize::to_string).collect();
            format!(
                "{name} {relation} {value}\ncolourings without a target, up to isomorphism, on 1.. vertices: {}\n",
                counts.join(" ")
            )
        }
        Format::Json => output::json(
            "ramsey-exact",
            cfg.seed,
            cfg.precision,
            Exact {
                k: a.k,
                targets: t.parts().to_vec(),
                n_max: a.n_max,
                outcome,
            },
        ),
        Format::Csv => output::csv(
            &["vertices", "classes"],
            classes.iter().enumerate().map(|(i, c)| [(i + 1).to_string(), c.to_string()]),
        ),
    };
    Ok(Outcome { body, exit: 0 })
}

use ramsey_core::bounds::{crossover_root, small_l_improvement_rate};
use ramsey_core::numeric::DecimalValue;
use serde::{Deserialize, Serialize};

use super::real;
use crate::config::RunConfig;
use crate::output::{self, Format};
use crate::{Failure, Outcome};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossover {
    /// Root of the corollary's ratio exponent: below it the bound beats ES.
    pub root: DecimalValue,
    /// Saving per unit of `l` as `l/k → 0`, `ln(4/(√5+1))`.
    pub small_l_rate: DecimalValue,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let root = crossover_root(cfg.precision)?;
    let rate = small_l_improvement_rate(cfg.precision)?;
    let body = match cfg.format.unwrap_or(Format::Text) {
        Format::Text => format!(
            "crossover l/k = {}\nsmall-l rate ln(4/(sqrt5+1)) = {}\n",
            real(&root, 10),
            real(&rate, 10)
        ),
        Format::Json => output::json(
            "crossover",
            cfg.seed,
            cfg.precision,
            Crossover {
                root: root.to_json(),
                small_l_rate: rate.to_json(),
            },
        ),
        Format::Csv => output::csv(
            &["quantity", "value", "precision"],
            [
                ["root".to_string(), root.to_decimal(), root.precision().to_string()],
                ["small_l_rate".to_string(), rate.to_decimal(), rate.precision().to_string()],
            ],
        ),
    };
    Ok(Outcome { body, exit: 0 })
}

use std::fmt::Write;

use ramsey_core::clique::{descend_with, witness_validate, DescendOptions, DescendRun, PartitionStrategy, Side};
use ramsey_core::stage::rational_to_decimal;
use ramsey_core::{Coloring, Witness};
use serde::{Deserialize, Serialize};

use super::{rational, targets};
use crate::cli::{CliqueDemoArgs, StrategyArg};
use crate::config::RunConfig;
use crate::output::{self, Format};
use crate::{Failure, Outcome, UsageError, EXIT_FAIL};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Demo {
    pub n: usize,
    pub colors: usize,
    /// Red-edge probability of the random colouring; absent for a file.
    pub red: Option<f64>,
    pub k: u32,
    pub targets: Vec<u32>,
    pub p: String,
    pub strategy: PartitionStrategy,
    pub run: DescendRun,
    pub valid: bool,
}

pub fn describe(w: &Witness) -> String {
    let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    match w {
        Witness::RedClique { vertices } => format!("red K_{} on {{{}}}", vertices.len(), list(vertices)),
        Witness::MonoClique { color, side, vertices } => format!(
            "colour-{color} K_{} in {} on {{{}}}",
            vertices.len(),
            match side {
                Side::X => "X",
                Side::Y => "Y",
            },
            list(vertices)
        ),
        Witness::BlueBook { s, t } => format!("blue book, spine {{{}}}, {} pages", list(s), t.len()),
    }
}

pub fn run(a: &CliqueDemoArgs, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let targets = targets(a.l, a.l_parts.as_deref())?;
    let p = rational("p", &a.p)?;
    let (col, red) = match &a.coloring {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
            (Coloring::parse(&text)?, None)
        }
        None => (Coloring::random(a.n, targets.colors(), a.red, cfg.seed)?, Some(a.red)),
    };
    if col.colors() != targets.colors() {
        return Err(UsageError(format!(
            "colouring has {} non-red colours but {} targets were given",
            col.colors(),
            targets.colors()
        ))
        .into());
    }
    if let Some(path) = &a.save_coloring {
        std::fs::write(path, col.to_text())?;
    }
    let strategy = match a.strategy {
        StrategyArg::Auto => PartitionStrategy::Auto { seed: cfg.seed },
        StrategyArg::Exhaustive => PartitionStrategy::Exhaustive,
        StrategyArg::RandomLocal => PartitionStrategy::RandomLocal {
            tries: a.tries,
            seed: cfg.seed,
        },
    };
    let opts = DescendOptions {
        strategy,
        check_size: !a.no_size_check,
    };
    let run = descend_with(&col, a.k, &targets, &p, opts)?;
    let valid = witness_validate(&col, &run.witness);
    let demo = Demo {
        n: col.n(),
        colors: col.colors(),
        red,
        k: a.k,
        targets: targets.parts().to_vec(),
        p: rational_to_decimal(&p),
        strategy,
        run,
        valid,
    };
    let body = match cfg.format.unwrap_or(Format::Text) {
        Format::Json => output::json("clique-demo", cfg.seed, cfg.precision, &demo),
        Format::Csv => output::csv(
            &["seed", "n", "colors", "k", "targets", "p", "kind", "size", "descents", "valid"],
            [[
                cfg.seed.to_string(),
                demo.n.to_string(),
                demo.colors.to_string(),
                demo.k.to_string(),
                demo.targets.iter().map(u32::to_string).collect::<Vec<_>>().join(" "),
                demo.p.clone(),
                kind(&demo.run.witness).into(),
                demo.run.witness.size().to_string(),
                demo.run.descents.len().to_string(),
                demo.valid.to_string(),
            ]],
        ),
        Format::Text => text(&demo, cfg.seed),
    };
    Ok(Outcome {
        body,
        exit: if valid { 0 } else { EXIT_FAIL },
    })
}

fn kind(w: &Witness) -> &'static str {
    match w {
        Witness::RedClique { .. } => "red_clique",
        Witness::MonoClique { .. } => "mono_clique",
        Witness::BlueBook { .. } => "blue_book",
    }
}

fn text(d: &Demo, seed: u64) -> String {
    let mut out = format!("seed: {seed}\n");
    let source = d.red.map_or_else(|| "from file".to_string(), |r| format!("random, red probability {r}"));
    let _ = writeln!(out, "colouring: n = {}, {} non-red colour(s), {source}", d.n, d.colors);
    let ts: Vec<String> = d.targets.iter().map(u32::to_string).collect();
    let _ = writeln!(out, "targets: red K_{}, others K_({}); p = {}, x = {}", d.k, ts.join(", "), d.p, d.run.x);
    for s in &d.run.descents {
        let _ = writeln!(out, "  descend into colour {} at vertex {} ({} left)", s.color, s.vertex, s.remaining);
    }
    if let (Some(e), Some(t)) = (&d.run.excess, &d.run.threshold) {
        let _ = writeln!(out, "  partition excess {e} >= threshold {t}");
    }
    for s in &d.run.steps {
        let pivot = s.pivot.map_or_else(|| "-".into(), |v| v.to_string());
        let _ = writeln!(out, "  pivot {pivot}: {:?}", s.branch);
    }
    let _ = writeln!(out, "witness: {}", describe(&d.run.witness));
    let _ = writeln!(out, "valid: {}", d.valid);
    out
}

//! Run-wide settings: built-in defaults, then a `key = value` file, then flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ramsey_core::numeric::parse_rational;
use ramsey_core::verifier::VerificationPolicy;
use ramsey_core::DEFAULT_PRECISION;
use rug::Rational;

use crate::cli::GlobalArgs;
use crate::output::Format;
use crate::UsageError;

/// Keys accepted in a config file.
pub const KEYS: &[&str] = &[
    "precision",
    "format",
    "output",
    "seed",
    "no_timing",
    "max_depth",
    "max_cells",
    "lambda_min",
    "split_point",
    "psi_floor",
    "psi_prime_floor",
];

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision: u32,
    /// `None` picks the subcommand's own default.
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub no_timing: bool,
    pub policy: VerificationPolicy,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: DEFAULT_PRECISION,
            format: None,
            output: None,
            seed: 0,
            no_timing: false,
            policy: VerificationPolicy::default(),
        }
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>, UsageError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(UsageError(format!("config line {}: expected key = value", i + 1)));
        };
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(UsageError(format!("config line {}: unknown key `{}`", i + 1, k.trim())));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

fn parsed<T: FromStr>(key: &str, v: &str) -> Result<T, UsageError> {
    v.parse().map_err(|_| UsageError(format!("config: bad value `{v}` for {key}")))
}

fn rational(key: &str, v: &str) -> Result<Rational, UsageError> {
    parse_rational(v).map_err(|e| UsageError(format!("config: {key}: {e}")))
}

impl RunConfig {
    fn apply(&mut self, key: &str, v: &str) -> Result<(), UsageError> {
        match key {
            "precision" => self.precision = parsed(key, v)?,
            "format" => self.format = Some(parsed(key, v)?),
            "output" => self.output = Some(PathBuf::from(v)),
            "seed" => self.seed = parsed(key, v)?,
            "no_timing" => self.no_timing = parsed(key, v)?,
            "max_depth" => self.policy.max_depth = parsed(key, v)?,
            "max_cells" => self.policy.max_cells = parsed(key, v)?,
            "lambda_min" => self.policy.lambda_min = rational(key, v)?,
            "split_point" => self.policy.split_point = rational(key, v)?,
            "psi_floor" => self.policy.psi_floor_main = rational(key, v)?,
            "psi_prime_floor" => self.policy.psi_prime_floor = rational(key, v)?,
            _ => unreachable!("keys are checked by parse_file"),
        }
        Ok(())
    }

    pub fn resolve(args: &GlobalArgs) -> Result<Self, UsageError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &args.config {
            for (k, v) in load(path)? {
                cfg.apply(&k, &v)?;
            }
        }
        let flags: [(&str, Option<String>); 10] = [
            ("precision", args.precision.map(|v| v.to_string())),
            ("seed", args.seed.map(|v| v.to_string())),
            ("max_depth", args.max_depth.map(|v| v.to_string())),
            ("max_cells", args.max_cells.map(|v| v.to_string())),
            ("lambda_min", args.lambda_min.clone()),
            ("split_point", args.split_point.clone()),
            ("psi_floor", args.psi_floor.clone()),
            ("psi_prime_floor", args.psi_prime_floor.clone()),
            ("output", args.output.as_ref().map(|p| p.display().to_string())),
            ("no_timing", args.no_timing.then(|| "true".to_string())),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                cfg.apply(k, &v)?;
            }
        }
        if let Some(f) = args.format {
            cfg.format = Some(f);
        }
        cfg.policy.precision = cfg.precision;
        cfg.policy
            .validate()
            .map_err(|e| UsageError(format!("verification policy: {e}")))?;
        Ok(cfg)
    }
}

fn load(path: &Path) -> Result<BTreeMap<String, String>, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    parse_file(&text)
}

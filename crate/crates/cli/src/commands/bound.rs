use std::fmt::Write;

use ramsey_core::bounds::{
    cor_easy2_bound, cor_easy_bound, es_bound, es_product_bound, main_beta, main_exponent_bound, optimal_p,
    thm_easy_bound, MulticolorTarget,
};
use ramsey_core::numeric::BoundValue;
use ramsey_core::stage::{diagonal_base_for_beta, rational_to_decimal};
use ramsey_core::{ExactReal, QuadraticSurd};
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::{rational, real, targets};
use crate::cli::{BoundArgs, Method};
use crate::config::RunConfig;
use crate::output::{self, Format};
use crate::{Failure, Outcome};

const DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub method: String,
    /// Decimal with a precision tag, `overflow`, or an exact integer.
    pub value: Option<String>,
    pub log_value: Option<String>,
    /// `ln(bound / ES(k, l))`.
    pub log_ratio_to_es: Option<String>,
    pub note: Option<String>,
    /// Why the method does not apply, when it was not requested explicitly.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundTable {
    pub k: u32,
    pub l: Vec<u32>,
    pub rows: Vec<BoundRow>,
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Es => "es",
        Method::EsProduct => "es-product",
        Method::ThmEasy => "thm-easy",
        Method::CorEasy => "cor-easy",
        Method::MainExponent => "main-exponent",
        Method::Multicolor => "multicolor",
    }
}

struct Ctx {
    k: u32,
    targets: MulticolorTarget,
    prec: u32,
    /// `ln ES(k, l)` for two colours.
    log_es: Option<Float>,
}

fn from_bound(method: Method, b: &BoundValue, ctx: &Ctx, note: Option<String>) -> BoundRow {
    BoundRow {
        method: method_name(method).into(),
        value: Some(match b.value() {
            Some(v) => real(v, DIGITS),
            None => "overflow".into(),
        }),
        log_value: Some(real(&b.log_value, DIGITS)),
        log_ratio_to_es: ctx
            .log_es
            .as_ref()
            .map(|l| real(&ExactReal::new(Float::with_val(ctx.prec, b.log_value.value() - l)), DIGITS)),
        note,
        error: None,
    }
}

fn evaluate(method: Method, a: &BoundArgs, ctx: &Ctx) -> Result<BoundRow, Failure> {
    let (k, prec) = (ctx.k, ctx.prec);
    let two_colour = |m: Method| -> Result<u32, Failure> {
        match ctx.targets.parts() {
            [l] => Ok(*l),
            _ => Err(Failure::Usage(format!("{} needs a single --l", method_name(m)))),
        }
    };
    let exact_log = |q: &Rational| Float::with_val(prec, q).ln();
    Ok(match method {
        Method::Es => {
            let l = two_colour(method)?;
            let v = es_bound(k, l)?;
            let log = ExactReal::new(Float::with_val(prec, &v).ln());
            BoundRow {
                method: "es".into(),
                value: Some(v.to_string()),
                log_value: Some(real(&log, DIGITS)),
                log_ratio_to_es: Some("0".into()),
                note: Some("binomial(k + l - 2, k - 1)".into()),
                error: None,
            }
        }
        Method::EsProduct => {
            let l = two_colour(method)?;
            let x = match &a.x {
                Some(s) => rational("x", s)?,
                None => Rational::from((k, k + l)),
            };
            let v = es_product_bound(k, l, &x)?;
            let b = BoundValue::from_log(exact_log(&v));
            let mut row = from_bound(method, &b, ctx, Some(format!("x = {}", rational_to_decimal(&x))));
            row.value = Some(real(&ExactReal::from_rational(&v, prec), DIGITS));
            row
        }
        Method::ThmEasy => {
            let l = two_colour(method)?;
            let (p, note) = match &a.p {
                Some(s) => {
                    let q = rational("p", s)?;
                    let note = format!("p = {}", rational_to_decimal(&q));
                    (QuadraticSurd::rational(q), note)
                }
                None => {
                    let p = optimal_p(k, l)?;
                    let note = format!("optimal p = {p} = {:.12}", p.to_f64());
                    (p, note)
                }
            };
            from_bound(method, &thm_easy_bound(k, l, &p, prec)?, ctx, Some(note))
        }
        Method::CorEasy => {
            let l = two_colour(method)?;
            from_bound(method, &cor_easy_bound(k, l, prec)?.bound, ctx, None)
        }
        Method::MainExponent => {
            let l = two_colour(method)?;
            let beta = match &a.beta {
                Some(s) => rational("beta", s)?,
                None => main_beta(),
            };
            let b = main_exponent_bound(k, l, &beta, prec)?;
            let base = diagonal_base_for_beta(&beta, prec)?;
            let note = format!(
                "exp(k F(l/k)), F(t) = (t+1)ln(t+1) - t ln t + G(t), G(t) = (-t/4 + {} t^2 + 0.08 t^3)e^-t; \
                 diagonal base e^F(1) = {}",
                rational_to_decimal(&beta),
                real(&base, 8)
            );
            from_bound(method, &b, ctx, Some(note))
        }
        Method::Multicolor => {
            let b = cor_easy2_bound(k, &ctx.targets, prec)?;
            from_bound(method, &b, ctx, None)
        }
    })
}

pub fn run(a: &BoundArgs, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let targets = targets(a.l, a.l_parts.as_deref())?;
    let two = targets.colors() == 1;
    let log_es = if two {
        Some(Float::with_val(cfg.precision, &es_bound(a.k, targets.ell())?).ln())
    } else {
        None
    };
    let ctx = Ctx {
        k: a.k,
        targets: targets.clone(),
        prec: cfg.precision,
        log_es,
    };
    let explicit = !a.method.is_empty();
    let methods = if explicit {
        a.method.clone()
    } else if two {
        vec![Method::Es, Method::EsProduct, Method::ThmEasy, Method::CorEasy, Method::MainExponent]
    } else {
        vec![Method::Multicolor]
    };
    let mut rows = Vec::new();
    for m in methods {
        match evaluate(m, a, &ctx) {
            Ok(r) => rows.push(r),
            Err(e) if !explicit => rows.push(BoundRow {
                method: method_name(m).into(),
                value: None,
                log_value: None,
                log_ratio_to_es: None,
                note: None,
                error: Some(e.to_string()),
            }),
            Err(e) => return Err(e),
        }
    }
    let table = BoundTable {
        k: a.k,
        l: targets.parts().to_vec(),
        rows,
    };
    let body = match cfg.format.unwrap_or(Format::Text) {
        Format::Json => output::json("bound", cfg.seed, cfg.precision, &table),
        Format::Csv => output::csv(
            &["method", "value", "log_value", "log_ratio_to_es", "note", "error"],
            table.rows.iter().map(|r| {
                [&Some(r.method.clone()), &r.value, &r.log_value, &r.log_ratio_to_es, &r.note, &r.error]
                    .map(|f| f.clone().unwrap_or_default())
            }),
        ),
        Format::Text => text(&table),
    };
    Ok(Outcome { body, exit: 0 })
}

fn text(t: &BoundTable) -> String {
    let ls: Vec<String> = t.l.iter().map(u32::to_string).collect();
    let mut out = format!("R({}, {})\n", t.k, ls.join(", "));
    for r in &t.rows {
        match (&r.value, &r.error) {
            (Some(v), _) => {
                let _ = writeln!(out, "  {:<14} {v}", r.method);
                if let Some(lv) = &r.log_value {
                    let _ = writeln!(out, "  {:<14} ln = {lv}", "");
                }
                if let Some(q) = &r.log_ratio_to_es {
                    let _ = writeln!(out, "  {:<14} ln(bound/ES) = {q}", "");
                }
                if let Some(n) = &r.note {
                    let _ = writeln!(out, "  {:<14} {n}", "");
                }
            }
            (None, Some(e)) => {
                let _ = writeln!(out, "  {:<14} n/a: {e}", r.method);
            }
            (None, None) => {}
        }
    }
    out
}

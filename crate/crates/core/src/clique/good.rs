//! The excess-edge induction: a candidate with enough excess red edges over
//! density `p` contains a red `K_k`, a `K_{t_i}` of colour `i` in `X` or a
//! `K_{l_i}` of colour `i` in `Y`.

use fixedbitset::FixedBitSet;
use rug::ops::Pow;
use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::bounds::MulticolorTarget;
use crate::error::{Error, Result};
use crate::stage::rational_to_decimal;

use super::candidate::{excess_fp, fp, Candidate};
use super::coloring::{Coloring, BLUE, RED};
use super::search::{find_clique, CliqueSearch};
use super::witness::{Side, Witness};

/// Node budget for the clique search inside `Y` at the end of a descent.
const SEARCH_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "branch", content = "color")]
pub enum Branch {
    /// `k = 1` or some `t_i = 1`.
    Base,
    Red,
    Color(u8),
    /// No branch met its threshold; the witness came from a search in `Y`.
    Exhaustive,
}

/// One level of the recursion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub pivot: Option<usize>,
    pub branch: Branch,
}

fn pow_i(q: &Rational, e: i64) -> Rational {
    let base = if e < 0 { q.clone().recip() } else { q.clone() };
    base.pow(e.unsigned_abs() as u32)
}

/// `(k+t) x^{−k+1} (1−x)^{−l+c} (p−x)^{−t+c} Π θ_i^{−l_i−t_i}`.
pub fn good_threshold(p: &Rational, x: &Rational, k: u32, ls: &[u32], ts: &[u32], theta: &[Rational]) -> Rational {
    let c = ls.len() as i64;
    let l: i64 = ls.iter().map(|&v| i64::from(v)).sum();
    let t: i64 = ts.iter().map(|&v| i64::from(v)).sum();
    let one_minus_x = Rational::from(1) - x.clone();
    let p_minus_x = p.clone() - x.clone();
    let mut r = Rational::from(i64::from(k) + t)
        * pow_i(x, 1 - i64::from(k))
        * pow_i(&one_minus_x, c - l)
        * pow_i(&p_minus_x, c - t);
    for ((th, &li), &ti) in theta.iter().zip(ls).zip(ts) {
        r *= pow_i(th, -(i64::from(li) + i64::from(ti)));
    }
    r
}

struct Params<'a> {
    col: &'a Coloring,
    p: Rational,
    x: Rational,
    ls: Vec<u32>,
    theta: Vec<Rational>,
}

fn check_params(col: &Coloring, p: &Rational, x: &Rational, k: u32, ls: &[u32], ts: &[u32], theta: &[Rational]) -> Result<()> {
    if !(*x > 0 && x < p && *p < 1) {
        return Err(Error::domain("recurse_good", "need 0 < x < p < 1"));
    }
    if k == 0 || ts.iter().any(|&t| t == 0) {
        return Err(Error::domain("recurse_good", "k and every t_i must be positive"));
    }
    let c = col.colors();
    if ls.len() != c || ts.len() != c || theta.len() != c {
        return Err(Error::domain(
            "recurse_good",
            format!("targets, t and theta must each have one entry per non-red colour ({c})"),
        ));
    }
    if theta.iter().any(|t| t.cmp0() != std::cmp::Ordering::Greater) || theta.iter().sum::<Rational>() != 1 {
        return Err(Error::domain("recurse_good", "theta must be positive and sum to 1"));
    }
    Ok(())
}

fn min_vertex(s: &FixedBitSet) -> usize {
    s.ones().next().expect("nonempty set")
}

fn intersect(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut s = a.clone();
    s.intersect_with(b);
    s
}

fn search_y(pr: &Params<'_>, y: &FixedBitSet, k: u32) -> Result<Option<Witness>> {
    let search = |color: u8, size: u32| -> Result<Option<Vec<usize>>> {
        match find_clique(pr.col, color, y, size as usize, SEARCH_BUDGET) {
            CliqueSearch::Found(v) => Ok(Some(v)),
            CliqueSearch::Absent => Ok(None),
            CliqueSearch::Budget => Err(Error::Budget(format!("clique search in Y (|Y| = {})", y.count_ones(..)))),
        }
    };
    if let Some(vertices) = search(RED, k)? {
        return Ok(Some(Witness::RedClique { vertices }));
    }
    for (i, &l) in pr.ls.iter().enumerate() {
        let color = (i + 1) as u8;
        if let Some(vertices) = search(color, l)? {
            return Ok(Some(Witness::MonoClique {
                color,
                side: Side::Y,
                vertices,
            }));
        }
    }
    Ok(None)
}

fn recurse(
    pr: &Params<'_>,
    x: FixedBitSet,
    y: FixedBitSet,
    f: Rational,
    k: u32,
    ts: Vec<u32>,
    trace: &mut Vec<Step>,
) -> Result<Witness> {
    if k == 1 {
        trace.push(Step { pivot: None, branch: Branch::Base });
        return Ok(Witness::RedClique {
            vertices: vec![min_vertex(&x)],
        });
    }
    if let Some(i) = ts.iter().position(|&t| t == 1) {
        trace.push(Step { pivot: None, branch: Branch::Base });
        return Ok(Witness::MonoClique {
            color: (i + 1) as u8,
            side: Side::X,
            vertices: vec![min_vertex(&x)],
        });
    }
    let threshold = good_threshold(&pr.p, &pr.x, k, &pr.ls, &ts, &pr.theta);
    if f < threshold {
        return Err(Error::InternalContradiction(format!(
            "inductive hypothesis lost: f_p = {} < {}",
            rational_to_decimal(&f),
            rational_to_decimal(&threshold)
        )));
    }

    // Lowest index among the maximisers of f_p(X, N_R(v) ∩ Y).
    let mut best: Option<(usize, Rational)> = None;
    for v in x.ones() {
        let z = intersect(pr.col.neighbors(v, RED), &y);
        let val = fp(pr.col, &x, &z, &pr.p);
        if best.as_ref().is_none_or(|(_, b)| val > *b) {
            best = Some((v, val));
        }
    }
    let (v, best_val) = best.expect("X nonempty");
    if best_val < pr.p.clone() * &f {
        return Err(Error::InternalContradiction(format!(
            "averaging lemma violated at pivot {v}"
        )));
    }
    let y1 = intersect(pr.col.neighbors(v, RED), &y);
    let t_sum: u32 = ts.iter().sum();
    let factor = Rational::from((k + t_sum - 1, k + t_sum));

    let x_red = intersect(pr.col.neighbors(v, RED), &x);
    let f_red = fp(pr.col, &x_red, &y1, &pr.p);
    if f_red >= factor.clone() * &pr.x * &f {
        trace.push(Step { pivot: Some(v), branch: Branch::Red });
        let w = recurse(pr, x_red, y1, f_red, k - 1, ts, trace)?;
        return Ok(w.with_vertex(v, RED));
    }
    let p_minus_x = pr.p.clone() - &pr.x;
    for i in 0..ts.len() {
        let color = (i + 1) as u8;
        let x_i = intersect(pr.col.neighbors(v, color), &x);
        let f_i = fp(pr.col, &x_i, &y1, &pr.p);
        if f_i >= pr.theta[i].clone() * &factor * &p_minus_x * &f {
            trace.push(Step {
                pivot: Some(v),
                branch: Branch::Color(color),
            });
            let mut sub = ts.clone();
            sub[i] -= 1;
            let w = recurse(pr, x_i, y1, f_i, k, sub, trace)?;
            return Ok(w.with_vertex(v, color));
        }
    }

    trace.push(Step {
        pivot: Some(v),
        branch: Branch::Exhaustive,
    });
    search_y(pr, &y, k)?.ok_or_else(|| {
        Error::InternalContradiction(format!(
            "no branch met its threshold and Y (|Y| = {}) holds no target clique",
            y.count_ones(..)
        ))
    })
}

/// Runs the induction on `cand` and returns the witness it produces, with the
/// pivot and branch taken at every level.
pub fn recurse_good_traced(
    cand: &Candidate<'_>,
    p: &Rational,
    x: &Rational,
    k: u32,
    targets: &MulticolorTarget,
    t_targets: &[u32],
    theta: &[Rational],
) -> Result<(Witness, Vec<Step>)> {
    let col = cand.coloring();
    let ls = targets.parts().to_vec();
    check_params(col, p, x, k, &ls, t_targets, theta)?;
    let f = excess_fp(cand, p);
    let rhs = good_threshold(p, x, k, &ls, t_targets, theta);
    if f < rhs {
        return Err(Error::HypothesisNotMet {
            lhs: rational_to_decimal(&f),
            rhs: rational_to_decimal(&rhs),
        });
    }
    let pr = Params {
        col,
        p: p.clone(),
        x: x.clone(),
        ls,
        theta: theta.to_vec(),
    };
    let mut trace = Vec::new();
    let w = recurse(&pr, cand.x().clone(), cand.y().clone(), f, k, t_targets.to_vec(), &mut trace)?;
    Ok((w, trace))
}

pub fn recurse_good(
    cand: &Candidate<'_>,
    p: &Rational,
    x: &Rational,
    k: u32,
    targets: &MulticolorTarget,
    t_targets: &[u32],
    theta: &[Rational],
) -> Result<Witness> {
    recurse_good_traced(cand, p, x, k, targets, t_targets, theta).map(|(w, _)| w)
}

/// The two-colour induction with threshold `(k+t) x^{−k+1}(1−x)^{−l+1}(p−x)^{−t+1}`.
pub fn recurse_good_two_color(
    cand: &Candidate<'_>,
    p: &Rational,
    x: &Rational,
    k: u32,
    l: u32,
    t: u32,
) -> Result<(Witness, Vec<Step>)> {
    let col = cand.coloring();
    if col.colors() != 1 {
        return Err(Error::domain("recurse_good_two_color", "colouring must use red and blue only"));
    }
    if !(*x > 0 && x < p && *p < 1) || k == 0 || l == 0 || t == 0 {
        return Err(Error::domain("recurse_good_two_color", "need 0 < x < p < 1 and positive k, l, t"));
    }
    let threshold = |k: u32, t: u32| {
        Rational::from(k + t)
            * pow_i(x, 1 - i64::from(k))
            * pow_i(&(Rational::from(1) - x.clone()), 1 - i64::from(l))
            * pow_i(&(p.clone() - x.clone()), 1 - i64::from(t))
    };
    let f = excess_fp(cand, p);
    if f < threshold(k, t) {
        return Err(Error::HypothesisNotMet {
            lhs: rational_to_decimal(&f),
            rhs: rational_to_decimal(&threshold(k, t)),
        });
    }
    let mut trace = Vec::new();
    let (mut xs, mut ys, mut f, mut k, mut t) = (cand.x().clone(), cand.y().clone(), f, k, t);
    // Vertices and colours to add back along the descent.
    let mut lifts: Vec<(usize, u8)> = Vec::new();
    let w = loop {
        if k == 1 {
            trace.push(Step { pivot: None, branch: Branch::Base });
            break Witness::RedClique { vertices: vec![min_vertex(&xs)] };
        }
        if t == 1 {
            trace.push(Step { pivot: None, branch: Branch::Base });
            break Witness::MonoClique {
                color: BLUE,
                side: Side::X,
                vertices: vec![min_vertex(&xs)],
            };
        }
        let mut best: Option<(usize, Rational)> = None;
        for v in xs.ones() {
            let val = fp(col, &xs, &intersect(col.neighbors(v, RED), &ys), p);
            if best.as_ref().is_none_or(|(_, b)| val > *b) {
                best = Some((v, val));
            }
        }
        let (v, _) = best.expect("X nonempty");
        let y1 = intersect(col.neighbors(v, RED), &ys);
        let factor = Rational::from((k + t - 1, k + t));
        let x_r = intersect(col.neighbors(v, RED), &xs);
        let f_r = fp(col, &x_r, &y1, p);
        if f_r >= factor.clone() * x * &f {
            trace.push(Step { pivot: Some(v), branch: Branch::Red });
            lifts.push((v, RED));
            (xs, ys, f, k) = (x_r, y1, f_r, k - 1);
            continue;
        }
        let x_b = intersect(col.neighbors(v, BLUE), &xs);
        let f_b = fp(col, &x_b, &y1, p);
        if f_b >= factor * (p.clone() - x) * &f {
            trace.push(Step {
                pivot: Some(v),
                branch: Branch::Color(BLUE),
            });
            lifts.push((v, BLUE));
            (xs, ys, f, t) = (x_b, y1, f_b, t - 1);
            continue;
        }
        trace.push(Step {
            pivot: Some(v),
            branch: Branch::Exhaustive,
        });
        let pr = Params {
            col,
            p: p.clone(),
            x: x.clone(),
            ls: vec![l],
            theta: vec![Rational::from(1)],
        };
        break search_y(&pr, &ys, k)?
            .ok_or_else(|| Error::InternalContradiction("Y holds no red K_k or blue K_l".into()))?;
    };
    let w = lifts.into_iter().rev().fold(w, |w, (v, color)| w.with_vertex(v, color));
    Ok((w, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clique::witness::witness_validate;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn halves(col: &Coloring) -> (Vec<usize>, Vec<usize>) {
        let n = col.n();
        ((0..n / 2).collect(), (n / 2..n).collect())
    }

    #[test]
    fn threshold_matches_two_colour_form() {
        let (p, x) = (q(3, 5), q(2, 5));
        let multi = good_threshold(&p, &x, 3, &[2], &[2], &[q(1, 1)]);
        // 5 · (5/2)² · (5/3) · 5
        assert_eq!(multi, q(3125, 12));
    }

    #[test]
    fn k_one_is_trivial() {
        let col = Coloring::uniform(12, 1, RED).unwrap();
        let (xs, ys) = halves(&col);
        let cand = Candidate::new(&col, &xs, &ys).unwrap();
        let w = recurse_good(&cand, &q(1, 2), &q(1, 4), 1, &MulticolorTarget::single(2).unwrap(), &[2], &[q(1, 1)]).unwrap();
        assert_eq!(w, Witness::RedClique { vertices: vec![0] });
    }

    #[test]
    fn all_red_descends_through_red() {
        let col = Coloring::uniform(60, 1, RED).unwrap();
        let (xs, ys) = halves(&col);
        let cand = Candidate::new(&col, &xs, &ys).unwrap();
        let (w, trace) = recurse_good_traced(
            &cand,
            &q(7, 10),
            &q(1, 2),
            3,
            &MulticolorTarget::single(2).unwrap(),
            &[2],
            &[q(1, 1)],
        )
        .unwrap();
        assert!(witness_validate(&col, &w));
        assert!(matches!(w, Witness::RedClique { ref vertices } if vertices.len() == 3));
        assert!(trace.iter().any(|s| s.branch == Branch::Red));
    }

    #[test]
    fn hypothesis_is_checked() {
        let col = Coloring::random(12, 1, 0.5, 4).unwrap();
        let (xs, ys) = halves(&col);
        let cand = Candidate::new(&col, &xs, &ys).unwrap();
        let r = recurse_good(&cand, &q(3, 4), &q(1, 4), 3, &MulticolorTarget::single(2).unwrap(), &[2], &[q(1, 1)]);
        assert!(matches!(r, Err(Error::HypothesisNotMet { .. })));
    }

    #[test]
    fn parameters_are_checked() {
        let col = Coloring::uniform(4, 1, RED).unwrap();
        let cand = Candidate::new(&col, &[0, 1], &[2, 3]).unwrap();
        let t = MulticolorTarget::single(2).unwrap();
        assert!(recurse_good(&cand, &q(1, 2), &q(3, 4), 2, &t, &[2], &[q(1, 1)]).is_err());
        assert!(recurse_good(&cand, &q(1, 2), &q(1, 4), 2, &t, &[2], &[q(1, 2)]).is_err());
        assert!(recurse_good(&cand, &q(1, 2), &q(1, 4), 2, &t, &[2, 2], &[q(1, 1)]).is_err());
    }

    #[test]
    fn multicolour_with_one_colour_matches_two_colour() {
        let (p, x) = (q(3, 5), q(2, 5));
        let mut runs = 0;
        for seed in 0..40 {
            let col = Coloring::random(40, 1, 0.85, seed).unwrap();
            let (xs, ys) = halves(&col);
            let cand = Candidate::new(&col, &xs, &ys).unwrap();
            let two = recurse_good_two_color(&cand, &p, &x, 2, 2, 2);
            let multi = recurse_good_traced(&cand, &p, &x, 2, &MulticolorTarget::single(2).unwrap(), &[2], &[q(1, 1)]);
            match (two, multi) {
                (Ok(a), Ok(b)) => {
                    assert_eq!(a, b);
                    assert!(witness_validate(&col, &a.0));
                    runs += 1;
                }
                (Err(Error::HypothesisNotMet { .. }), Err(Error::HypothesisNotMet { .. })) => {}
                other => panic!("{other:?}"),
            }
        }
        assert!(runs > 10, "{runs}");
    }

    #[test]
    fn three_colours() {
        // Threshold about 1.67e5 against f_p about 2.1e5.
        let col = Coloring::random(1400, 2, 0.98, 5).unwrap();
        let (xs, ys) = halves(&col);
        let cand = Candidate::new(&col, &xs, &ys).unwrap();
        let targets = MulticolorTarget::new(vec![2, 2]).unwrap();
        let theta = [q(1, 2), q(1, 2)];
        let w = recurse_good(&cand, &q(11, 20), &q(3, 10), 2, &targets, &[2, 2], &theta).unwrap();
        assert!(witness_validate(&col, &w));
    }
}

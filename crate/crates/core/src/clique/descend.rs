//! The outer induction: descend into a large non-red neighbourhood while one
//! exists, otherwise split the vertices into a candidate with enough excess
//! red edges and run the excess-edge induction on it.

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::bounds::{golden_x, theta as theta_factor, thm_easy_bound, MulticolorTarget};
use crate::error::{Error, Result};
use crate::numeric::{QuadraticSurd, DEFAULT_PRECISION};
use crate::stage::rational_to_decimal;

use super::candidate::{fp, Candidate};
use super::coloring::{edges_between, Coloring, RED};
use super::good::{good_threshold, recurse_good_traced, Step};
use super::witness::{Side, Witness};

/// Largest vertex set split exhaustively under [`PartitionStrategy::Auto`].
pub const EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "strategy")]
pub enum PartitionStrategy {
    /// Exhaustive up to 16 vertices, otherwise 512 seeded random balanced
    /// partitions with local search.
    Auto { seed: u64 },
    Exhaustive,
    /// Random balanced partitions, each improved by single-vertex moves
    /// until no move increases `f_p`.
    RandomLocal { tries: usize, seed: u64 },
}

impl Default for PartitionStrategy {
    fn default() -> Self {
        PartitionStrategy::Auto { seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DescendOptions {
    pub strategy: PartitionStrategy,
    /// Require `n` to reach the bound of the outer theorem before starting.
    pub check_size: bool,
}

impl Default for DescendOptions {
    fn default() -> Self {
        DescendOptions {
            strategy: PartitionStrategy::default(),
            check_size: true,
        }
    }
}

/// A descent into `N_{B_i}(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Descent {
    pub vertex: usize,
    pub color: u8,
    pub remaining: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescendRun {
    pub witness: Witness,
    pub descents: Vec<Descent>,
    /// Parameter `x` actually used: a dyadic lower approximation of the
    /// golden-ratio root for `p`.
    pub x: String,
    /// `f_p` of the chosen partition and the threshold it met; absent when the
    /// descent ended in a trivial case.
    pub excess: Option<String>,
    pub threshold: Option<String>,
    pub steps: Vec<Step>,
}

/// Bits of the dyadic approximation of `x`.
const X_BITS: u32 = 48;

fn rational_x(p: &Rational) -> Result<Rational> {
    let surd = golden_x(&QuadraticSurd::rational(p.clone()))?;
    let xf = surd.to_float(DEFAULT_PRECISION);
    let scaled = Float::with_val(DEFAULT_PRECISION, &xf * Float::with_val(DEFAULT_PRECISION, 1u64 << X_BITS)).floor();
    let num = scaled.to_integer().expect("finite");
    let x = Rational::from((num, Integer::from(1u64 << X_BITS)));
    if x.cmp0() != std::cmp::Ordering::Greater {
        return Err(Error::domain("descend", "golden-ratio root for p is too close to 0"));
    }
    Ok(x)
}

fn check_size(n: usize, k: u32, targets: &MulticolorTarget, p: &Rational) -> Result<()> {
    let l = targets.ell();
    let bound = thm_easy_bound(k, l, &QuadraticSurd::rational(p.clone()), DEFAULT_PRECISION)?;
    let mut log = bound.log_value.value().clone();
    log += Float::with_val(DEFAULT_PRECISION, theta_factor(targets).to_f64().ln());
    let ln_n = Float::with_val(DEFAULT_PRECISION, n).ln();
    if ln_n < log {
        let required = Float::with_val(DEFAULT_PRECISION, log.exp_ref());
        return Err(Error::SizePrecondition {
            n,
            required: required.to_string_radix(10, Some(8)),
        });
    }
    Ok(())
}

/// `b·f_p` as an integer for `p = a/b`.
fn scaled_fp(col: &Coloring, x: &FixedBitSet, y: &FixedBitSet, a: &Integer, b: &Integer) -> Integer {
    let e = edges_between(col, RED, x, y);
    let size = (x.count_ones(..) * y.count_ones(..)) as u64;
    Integer::from(b * e) - Integer::from(a * size)
}

fn best_exhaustive(col: &Coloring, vs: &[usize], p: &Rational) -> Option<(FixedBitSet, FixedBitSet)> {
    let (a, b) = (p.numer().clone(), p.denom().clone());
    let m = vs.len();
    if m < 2 {
        return None;
    }
    let mut best: Option<(Integer, FixedBitSet, FixedBitSet)> = None;
    // vs[0] stays in X; f_p is symmetric in X and Y.
    for mask in 0u32..(1 << (m - 1)) - 1 {
        let mut x = FixedBitSet::with_capacity(col.n());
        let mut y = FixedBitSet::with_capacity(col.n());
        x.insert(vs[0]);
        for (j, &v) in vs[1..].iter().enumerate() {
            if mask >> j & 1 == 1 {
                x.insert(v);
            } else {
                y.insert(v);
            }
        }
        let val = scaled_fp(col, &x, &y, &a, &b);
        if best.as_ref().is_none_or(|(bv, _, _)| val > *bv) {
            best = Some((val, x, y));
        }
    }
    best.map(|(_, x, y)| (x, y))
}

/// Single-vertex moves while one raises `f_p`. Red degrees into `X` and `Y`
/// are kept per vertex, so a move is scored in constant time.
fn local_search(col: &Coloring, x: &mut FixedBitSet, y: &mut FixedBitSet, a: &Integer, b: &Integer) {
    let members: Vec<usize> = x.ones().chain(y.ones()).collect();
    let n = col.n();
    let mut rx = vec![0i64; n];
    let mut ry = vec![0i64; n];
    for &v in &members {
        rx[v] = col.neighbors(v, RED).intersection_count(x) as i64;
        ry[v] = col.neighbors(v, RED).intersection_count(y) as i64;
    }
    let (mut nx, mut ny) = (x.count_ones(..) as i64, y.count_ones(..) as i64);
    loop {
        let mut improved = false;
        for &v in &members {
            let from_x = x.contains(v);
            let (de, ds) = if from_x {
                if nx == 1 {
                    continue;
                }
                (rx[v] - ry[v], nx - ny - 1)
            } else {
                if ny == 1 {
                    continue;
                }
                (ry[v] - rx[v], ny - nx - 1)
            };
            // Change of b·f_p = b·e − a·|X||Y|.
            let gain = Integer::from(b * de) - Integer::from(a * ds);
            if gain.cmp0() != std::cmp::Ordering::Greater {
                continue;
            }
            improved = true;
            let delta = if from_x { -1 } else { 1 };
            x.set(v, !from_x);
            y.set(v, from_x);
            nx += delta;
            ny -= delta;
            for u in col.neighbors(v, RED).ones() {
                rx[u] += delta;
                ry[u] -= delta;
            }
        }
        if !improved {
            break;
        }
    }
}

fn best_random(col: &Coloring, vs: &[usize], p: &Rational, tries: usize, seed: u64) -> Option<(FixedBitSet, FixedBitSet)> {
    if vs.len() < 2 {
        return None;
    }
    let (a, b) = (p.numer().clone(), p.denom().clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Integer, FixedBitSet, FixedBitSet)> = None;
    let mut order = vs.to_vec();
    for _ in 0..tries.max(1) {
        order.shuffle(&mut rng);
        let half = order.len() / 2;
        let mut x = FixedBitSet::with_capacity(col.n());
        let mut y = FixedBitSet::with_capacity(col.n());
        order[..half].iter().for_each(|&v| x.insert(v));
        order[half..].iter().for_each(|&v| y.insert(v));
        local_search(col, &mut x, &mut y, &a, &b);
        let val = scaled_fp(col, &x, &y, &a, &b);
        if best.as_ref().is_none_or(|(bv, _, _)| val > *bv) {
            best = Some((val, x, y));
        }
    }
    best.map(|(_, x, y)| (x, y))
}

fn partition(col: &Coloring, vs: &[usize], p: &Rational, strategy: PartitionStrategy) -> Result<Option<(FixedBitSet, FixedBitSet)>> {
    Ok(match strategy {
        PartitionStrategy::Exhaustive => {
            if vs.len() > 24 {
                return Err(Error::Budget(format!("exhaustive partition of {} vertices", vs.len())));
            }
            best_exhaustive(col, vs, p)
        }
        PartitionStrategy::Auto { seed } if vs.len() > EXHAUSTIVE_LIMIT => best_random(col, vs, p, 512, seed),
        PartitionStrategy::Auto { .. } => best_exhaustive(col, vs, p),
        PartitionStrategy::RandomLocal { tries, seed } => best_random(col, vs, p, tries, seed),
    })
}

/// Runs the outer induction on the whole colouring.
pub fn descend(col: &Coloring, k: u32, targets: &MulticolorTarget, p: &Rational, strategy: PartitionStrategy) -> Result<Witness> {
    descend_with(
        col,
        k,
        targets,
        p,
        DescendOptions {
            strategy,
            check_size: true,
        },
    )
    .map(|r| r.witness)
}

pub fn descend_with(col: &Coloring, k: u32, targets: &MulticolorTarget, p: &Rational, opts: DescendOptions) -> Result<DescendRun> {
    if k == 0 {
        return Err(Error::domain("descend", "k must be positive"));
    }
    if targets.colors() != col.colors() {
        return Err(Error::domain("descend", "one target per non-red colour is required"));
    }
    let x = rational_x(p)?;
    if opts.check_size {
        check_size(col.n(), k, targets, p)?;
    }
    let one_minus_p = Rational::from(1) - p.clone();
    let mut ls: Vec<u32> = targets.parts().to_vec();
    let mut current = col.all_vertices();
    let mut descents: Vec<Descent> = Vec::new();
    let finish = |w: Witness, descents: Vec<Descent>, excess, threshold, steps| {
        let w = descents.iter().rev().fold(w, |w, d| w.with_vertex(d.vertex, d.color));
        DescendRun {
            witness: w,
            descents,
            x: rational_to_decimal(&x),
            excess,
            threshold,
            steps,
        }
    };
    loop {
        let Some(first) = current.ones().next() else {
            return Err(Error::Precondition("vertex set exhausted during the descent".into()));
        };
        if k == 1 {
            return Ok(finish(Witness::RedClique { vertices: vec![first] }, descents, None, None, vec![]));
        }
        if let Some(i) = ls.iter().position(|&l| l == 1) {
            let w = Witness::MonoClique {
                color: (i + 1) as u8,
                side: Side::Y,
                vertices: vec![first],
            };
            return Ok(finish(w, descents, None, None, vec![]));
        }
        let l: u32 = ls.iter().sum();
        let n = current.count_ones(..) as u64;
        let factor = Rational::from((k + l - 1, k + l)) * &one_minus_p * n;
        let mut step = None;
        'outer: for v in current.ones() {
            for (i, &li) in ls.iter().enumerate() {
                let color = (i + 1) as u8;
                let deg = col.neighbors(v, color).intersection_count(&current) as u64;
                if Rational::from(deg) >= Rational::from((li, l)) * &factor {
                    step = Some((v, i, color));
                    break 'outer;
                }
            }
        }
        if let Some((v, i, color)) = step {
            current.intersect_with(col.neighbors(v, color));
            ls[i] -= 1;
            descents.push(Descent {
                vertex: v,
                color,
                remaining: current.count_ones(..),
            });
            continue;
        }

        let theta: Vec<Rational> = ls.iter().map(|&li| Rational::from((li, l))).collect();
        let threshold = good_threshold(p, &x, k, &ls, &ls, &theta);
        let vs: Vec<usize> = current.ones().collect();
        let Some((xs, ys)) = partition(col, &vs, p, opts.strategy)? else {
            return Err(Error::PartitionShortfall {
                best: "none".into(),
                threshold: rational_to_decimal(&threshold),
            });
        };
        let f = fp(col, &xs, &ys, p);
        if f < threshold {
            return Err(Error::PartitionShortfall {
                best: rational_to_decimal(&f),
                threshold: rational_to_decimal(&threshold),
            });
        }
        let cand = Candidate::from_sets(col, xs, ys)?;
        let sub = MulticolorTarget::new(ls.clone())?;
        let (w, steps) = recurse_good_traced(&cand, p, &x, k, &sub, &ls, &theta)?;
        return Ok(finish(
            w,
            descents,
            Some(rational_to_decimal(&f)),
            Some(rational_to_decimal(&threshold)),
            steps,
        ));
    }
}

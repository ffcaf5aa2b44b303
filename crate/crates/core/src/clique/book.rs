//! Extraction of a red `K_k` or a large blue book from a vertex set with many
//! vertices of large blue degree.

use fixedbitset::FixedBitSet;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::stage::rational_to_decimal;

use super::coloring::{Coloring, BLUE, RED};
use super::search::{find_clique, CliqueSearch};
use super::witness::Witness;

/// Node budget of each clique search.
const SEARCH_BUDGET: u64 = 2_000_000;
/// Largest `C(m, b)` searched exhaustively.
const EXHAUSTIVE_SUBSETS: u64 = 100_000;
const RANDOM_SUBSETS: usize = 10_000;
const SUBSET_SEED: u64 = 0;

/// `⌈5b²/μ⌉`.
pub fn book_clique_size(mu: &Rational, b: u32) -> Result<u64> {
    check_mu(mu)?;
    let m = (Rational::from(5 * u64::from(b) * u64::from(b)) / mu.clone()).ceil();
    m.numer()
        .to_u64()
        .ok_or_else(|| Error::domain("blue_book_extract", "m too large"))
}

fn check_mu(mu: &Rational) -> Result<()> {
    if !(*mu > 0 && *mu < 1) {
        return Err(Error::domain("blue_book_extract", "mu must lie in (0, 1)"));
    }
    Ok(())
}

/// Common blue neighbourhood of `s` inside `x ∖ s`.
fn book_pages(col: &Coloring, x: &FixedBitSet, s: &[usize]) -> FixedBitSet {
    let mut t = x.clone();
    for &v in s {
        t.intersect_with(col.neighbors(v, BLUE));
    }
    t
}

fn choose_spine(col: &Coloring, x: &FixedBitSet, u: &[usize], b: usize) -> (Vec<usize>, FixedBitSet) {
    let m = u.len();
    let count = Integer::from(Integer::binomial_u(m as u32, b as u32));
    let mut best: Option<(Vec<usize>, FixedBitSet)> = None;
    let mut consider = |s: Vec<usize>| {
        let t = book_pages(col, x, &s);
        if best.as_ref().is_none_or(|(_, bt)| t.count_ones(..) > bt.count_ones(..)) {
            best = Some((s, t));
        }
    };
    if count <= EXHAUSTIVE_SUBSETS {
        let mut idx: Vec<usize> = (0..b).collect();
        loop {
            consider(idx.iter().map(|&i| u[i]).collect());
            // Next combination in lexicographic order.
            let Some(pos) = (0..b).rev().find(|&i| idx[i] != i + m - b) else {
                break;
            };
            idx[pos] += 1;
            for j in pos + 1..b {
                idx[j] = idx[j - 1] + 1;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SUBSET_SEED);
        for _ in 0..RANDOM_SUBSETS {
            let mut s: Vec<usize> = sample(&mut rng, m, b).into_iter().map(|i| u[i]).collect();
            s.sort_unstable();
            consider(s);
        }
    }
    best.expect("at least one subset")
}

/// Returns a red `K_k` in `xset`, or a blue book `(S, T)` with `|S| = b` and
/// `|T| >= (μ^b/2)|X|`.
///
/// The lemma asks for at least `R(k, m)` vertices of blue degree `>= μ|X|`
/// inside `X`, `m = ⌈5b²/μ⌉`. Instead the set `W` of those vertices is
/// searched directly: first for a blue `K_m`, then for a red `K_k`, and
/// finally `X` itself for a red `K_k`.
pub fn blue_book_extract(col: &Coloring, xset: &FixedBitSet, mu: &Rational, b: u32, k: u32) -> Result<Witness> {
    check_mu(mu)?;
    if b == 0 || k == 0 {
        return Err(Error::domain("blue_book_extract", "b and k must be positive"));
    }
    if xset.len() != col.n() || xset.ones().any(|v| v >= col.n()) {
        return Err(Error::domain("blue_book_extract", "vertex set does not match the colouring"));
    }
    let m = book_clique_size(mu, b)?;
    let nx = xset.count_ones(..) as u64;
    if nx < 5 * m * m {
        return Err(Error::Precondition(format!("|X| = {nx} < 5m^2 = {} (m = {m})", 5 * m * m)));
    }
    let floor_deg = mu.clone() * nx;
    let mut w = FixedBitSet::with_capacity(col.n());
    for v in xset.ones() {
        if Rational::from(col.neighbors(v, BLUE).intersection_count(xset)) >= floor_deg {
            w.insert(v);
        }
    }

    let blue = find_clique(col, BLUE, &w, m as usize, SEARCH_BUDGET);
    if let CliqueSearch::Found(u) = blue {
        let (s, t) = choose_spine(col, xset, &u, b as usize);
        let floor = mu.clone().pow(b) / 2u32 * nx;
        if Rational::from(t.count_ones(..)) < floor {
            return Err(Error::InternalContradiction(format!(
                "best book has |T| = {} below (mu^b/2)|X| = {}",
                t.count_ones(..),
                rational_to_decimal(&floor)
            )));
        }
        return Ok(Witness::BlueBook { s, t: t.ones().collect() });
    }
    let red_w = find_clique(col, RED, &w, k as usize, SEARCH_BUDGET);
    if let CliqueSearch::Found(vertices) = red_w {
        return Ok(Witness::RedClique { vertices });
    }
    let red_x = find_clique(col, RED, xset, k as usize, SEARCH_BUDGET);
    if let CliqueSearch::Found(vertices) = red_x {
        return Ok(Witness::RedClique { vertices });
    }
    let how = |r: &CliqueSearch| if *r == CliqueSearch::Budget { "budget exhausted" } else { "none exists" };
    Err(Error::Precondition(format!(
        "W ({} vertices of blue degree >= mu|X|) has no blue K_{m} ({}) and X has no red K_{k} ({}); \
         the lemma needs at least R({k}, {m}) such vertices",
        w.count_ones(..),
        how(&blue),
        how(&red_x),
    )))
}

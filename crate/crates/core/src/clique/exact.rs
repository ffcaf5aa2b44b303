//! Exact small Ramsey numbers by vertex-by-vertex extension of the colourings
//! that avoid every target, kept up to isomorphism.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::MulticolorTarget;
use crate::error::{Error, Result};

/// Largest vertex count handled; vertex sets are `u32` masks.
pub const MAX_VERTICES: u32 = 24;
/// Extensions examined before giving up.
pub const EXTENSION_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RamseyOutcome {
    Exact {
        value: u32,
        /// Target-free colourings up to isomorphism on `1..value` vertices.
        classes: Vec<usize>,
    },
    /// Every `n <= n_max` admits a target-free colouring.
    AtLeast { value: u32, classes: Vec<usize> },
}

impl RamseyOutcome {
    pub fn exact(&self) -> Option<u32> {
        match self {
            RamseyOutcome::Exact { value, .. } => Some(*value),
            RamseyOutcome::AtLeast { .. } => None,
        }
    }
}

/// A colouring of `K_n` as per-colour neighbourhood masks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Small {
    n: usize,
    /// `adj[color][v]`.
    adj: Vec<Vec<u32>>,
}

impl Small {
    fn color(&self, u: usize, v: usize) -> u8 {
        (0..self.adj.len()).find(|&c| self.adj[c][u] >> v & 1 == 1).expect("complete") as u8
    }

    /// Row-by-row lower triangle under the vertex order `perm`.
    #[cfg(test)]
    fn code(&self, perm: &[usize]) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for j in 1..self.n {
            for i in 0..j {
                out.push(self.color(perm[j], perm[i]));
            }
        }
        out
    }
}

/// Is there a colour-`c` clique of `size` inside `mask`?
fn has_clique(adj: &[u32], mask: u32, size: u32) -> bool {
    if size == 0 {
        return true;
    }
    if mask.count_ones() < size {
        return false;
    }
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if has_clique(adj, rest & adj[v], size - 1) {
            return true;
        }
    }
    false
}

/// Smallest code over the vertex orders that list vertices by nondecreasing
/// colour-degree signature.
fn canonical(g: &Small) -> Vec<u8> {
    let sig = |v: usize| -> Vec<u32> { g.adj.iter().map(|a| a[v].count_ones()).collect() };
    let mut verts: Vec<usize> = (0..g.n).collect();
    verts.sort_by_key(|&v| sig(v));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in verts {
        match classes.last_mut() {
            Some(c) if sig(c[0]) == sig(v) => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let slots: Vec<usize> = classes.iter().enumerate().flat_map(|(i, c)| std::iter::repeat_n(i, c.len())).collect();
    let mut best: Option<Vec<u8>> = None;
    let mut perm = Vec::with_capacity(g.n);
    let mut used = vec![false; g.n];
    let mut prefix = Vec::new();
    search_order(g, &classes, &slots, &mut perm, &mut used, &mut prefix, &mut best);
    best.expect("n >= 1")
}

fn search_order(
    g: &Small,
    classes: &[Vec<usize>],
    slots: &[usize],
    perm: &mut Vec<usize>,
    used: &mut [bool],
    prefix: &mut Vec<u8>,
    best: &mut Option<Vec<u8>>,
) {
    let j = perm.len();
    if j == g.n {
        if best.as_ref().is_none_or(|b| prefix[..] < b[..]) {
            *best = Some(prefix.clone());
        }
        return;
    }
    for &v in &classes[slots[j]] {
        if used[v] {
            continue;
        }
        let start = prefix.len();
        for &u in perm.iter() {
            prefix.push(g.color(v, u));
        }
        // Prune when the partial code already exceeds the best.
        let worse = best.as_ref().is_some_and(|b| prefix[..] > b[..prefix.len()]);
        if !worse {
            used[v] = true;
            perm.push(v);
            search_order(g, classes, slots, perm, used, prefix, best);
            perm.pop();
            used[v] = false;
        }
        prefix.truncate(start);
    }
}

fn decode(n: usize, colors: usize, code: &[u8]) -> Small {
    let mut adj = vec![vec![0u32; n]; colors];
    let mut it = code.iter();
    for j in 1..n {
        for i in 0..j {
            let c = *it.next().expect("code length") as usize;
            adj[c][i] |= 1 << j;
            adj[c][j] |= 1 << i;
        }
    }
    Small { n, adj }
}

/// Target-free extensions of `g` by one vertex, in canonical form.
fn extensions(g: &Small, sizes: &[u32]) -> Vec<Vec<u8>> {
    let n = g.n;
    let colors = sizes.len();
    let mut out = Vec::new();
    let mut assign = vec![0u8; n];
    let total = (colors as u64).pow(n as u32);
    for idx in 0..total {
        let mut r = idx;
        for a in assign.iter_mut() {
            *a = (r % colors as u64) as u8;
            r /= colors as u64;
        }
        let ok = (0..colors).all(|c| {
            let mask = assign.iter().enumerate().filter(|(_, &a)| a as usize == c).fold(0u32, |m, (i, _)| m | 1 << i);
            !has_clique(&g.adj[c], mask, sizes[c] - 1)
        });
        if !ok {
            continue;
        }
        let mut adj = g.adj.clone();
        for c in &mut adj {
            c.push(0);
        }
        for (i, &a) in assign.iter().enumerate() {
            adj[a as usize][i] |= 1 << n;
            adj[a as usize][n] |= 1 << i;
        }
        out.push(canonical(&Small { n: n + 1, adj }));
    }
    out
}

/// Smallest `N <= n_max` such that every colouring of `K_N` has a red `K_k`
/// or a `K_{l_i}` in colour `i`, or `>= n_max + 1`.
pub fn ramsey_exact(k: u32, targets: &MulticolorTarget, n_max: u32) -> Result<RamseyOutcome> {
    if k == 0 {
        return Err(Error::domain("ramsey_exact", "k must be positive"));
    }
    if n_max == 0 || n_max > MAX_VERTICES {
        return Err(Error::domain("ramsey_exact", format!("n_max must lie in 1..={MAX_VERTICES}")));
    }
    let mut sizes = vec![k];
    sizes.extend_from_slice(targets.parts());
    let colors = sizes.len();
    let mut classes = Vec::new();
    if sizes.contains(&1) {
        return Ok(RamseyOutcome::Exact { value: 1, classes });
    }
    // One vertex: a single empty colouring.
    let mut level: BTreeSet<Vec<u8>> = BTreeSet::from([Vec::new()]);
    classes.push(1);
    let mut spent = 0u64;
    for n in 2..=n_max {
        let parents = n as u64 - 1;
        spent += level.len() as u64 * (colors as u64).saturating_pow(parents as u32);
        if spent > EXTENSION_BUDGET {
            return Err(Error::Budget(format!(
                "more than {EXTENSION_BUDGET} extensions needed to reach n = {n}"
            )));
        }
        let graphs: Vec<Small> = level.iter().map(|c| decode(n as usize - 1, colors, c)).collect();
        let next: BTreeSet<Vec<u8>> = graphs
            .par_iter()
            .map(|g| extensions(g, &sizes))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect();
        if next.is_empty() {
            return Ok(RamseyOutcome::Exact { value: n, classes });
        }
        classes.push(next.len());
        level = next;
    }
    Ok(RamseyOutcome::AtLeast {
        value: n_max + 1,
        classes,
    })
}

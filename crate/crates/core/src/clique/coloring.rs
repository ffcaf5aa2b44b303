use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Colour index of red; the other colours are `1..=c`.
pub const RED: u8 = 0;
/// The first non-red colour, blue in the two-colour setting.
pub const BLUE: u8 = 1;

/// An edge colouring of `K_n` with red and `c` further colours, stored as one
/// adjacency bitset per colour and vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    n: usize,
    c: usize,
    adj: Vec<Vec<FixedBitSet>>,
}

impl Coloring {
    /// Builds the colouring with `color(u, v)` for `u < v`.
    pub fn from_fn(n: usize, c: usize, mut color: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        if c == 0 || c > u8::MAX as usize - 1 {
            return Err(Error::domain("Coloring", "the number of non-red colours must lie in 1..=254"));
        }
        let mut adj = vec![vec![FixedBitSet::with_capacity(n); n]; c + 1];
        for u in 0..n {
            for v in u + 1..n {
                let col = color(u, v);
                if col as usize > c {
                    return Err(Error::domain("Coloring", format!("edge {u}-{v} has colour {col} > {c}")));
                }
                adj[col as usize][u].insert(v);
                adj[col as usize][v].insert(u);
            }
        }
        Ok(Coloring { n, c, adj })
    }

    pub fn uniform(n: usize, c: usize, color: u8) -> Result<Self> {
        Self::from_fn(n, c, |_, _| color)
    }

    /// Each edge is red with probability `red`, otherwise uniform over the
    /// other colours.
    pub fn random(n: usize, c: usize, red: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&red) {
            return Err(Error::domain("Coloring::random", "red probability must lie in [0, 1]"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_fn(n, c, |_, _| {
            if rng.random::<f64>() < red {
                RED
            } else {
                1 + rng.random_range(0..c) as u8
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of non-red colours.
    pub fn colors(&self) -> usize {
        self.c
    }

    pub fn color(&self, u: usize, v: usize) -> u8 {
        assert!(u != v, "no colour on the diagonal");
        (0..=self.c)
            .find(|&col| self.adj[col][u].contains(v))
            .expect("complete colouring") as u8
    }

    /// `N_C(v)`.
    pub fn neighbors(&self, v: usize, color: u8) -> &FixedBitSet {
        &self.adj[color as usize][v]
    }

    pub fn all_vertices(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.n);
        s.insert_range(..);
        s
    }

    pub fn vertex_set(&self, vs: &[usize]) -> Result<FixedBitSet> {
        let mut s = FixedBitSet::with_capacity(self.n);
        for &v in vs {
            if v >= self.n {
                return Err(Error::domain("vertex_set", format!("vertex {v} out of range 0..{}", self.n)));
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Parses the text format: a header `n c`, then one `u v colour` line
    /// per unordered pair. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .enumerate()
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty colouring file".into()))?;
        let nums = |line: &str, lineno: usize| -> Result<Vec<usize>> {
            line.split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("line {}: {t}: {e}", lineno + 1))))
                .collect()
        };
        let h = nums(header, 0)?;
        let [n, c] = h[..] else {
            return Err(Error::Parse(format!("header must be `n c`, got `{header}`")));
        };
        let mut colors = vec![None; n * n];
        for (lineno, line) in lines {
            let f = nums(line, lineno)?;
            let [u, v, col] = f[..] else {
                return Err(Error::Parse(format!("line {}: expected `u v colour`", lineno + 1)));
            };
            if u >= n || v >= n || u == v {
                return Err(Error::Parse(format!("line {}: bad edge {u}-{v}", lineno + 1)));
            }
            if col > c {
                return Err(Error::Parse(format!("line {}: colour {col} > {c}", lineno + 1)));
            }
            let (a, b) = (u.min(v), u.max(v));
            if colors[a * n + b].replace(col as u8).is_some() {
                return Err(Error::Parse(format!("line {}: edge {a}-{b} coloured twice", lineno + 1)));
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if colors[a * n + b].is_none() {
                    return Err(Error::Parse(format!("edge {a}-{b} has no colour")));
                }
            }
        }
        Self::from_fn(n, c, |u, v| colors[u * n + v].expect("checked above"))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.c);
        for u in 0..self.n {
            for v in u + 1..self.n {
                out.push_str(&format!("{u} {v} {}\n", self.color(u, v)));
            }
        }
        out
    }
}

/// Number of colour-`C` edges between `xs` and `ys`.
pub(crate) fn edges_between(col: &Coloring, color: u8, xs: &FixedBitSet, ys: &FixedBitSet) -> u64 {
    xs.ones()
        .map(|v| col.neighbors(v, color).intersection_count(ys) as u64)
        .sum()
}

use serde::{Deserialize, Serialize};

use super::coloring::{Coloring, BLUE, RED};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    X,
    Y,
}

/// A structure whose presence makes a candidate good.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    RedClique {
        vertices: Vec<usize>,
    },
    MonoClique {
        color: u8,
        side: Side,
        vertices: Vec<usize>,
    },
    /// All `S–S` and `S–T` edges blue.
    BlueBook {
        s: Vec<usize>,
        t: Vec<usize>,
    },
}

impl Witness {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }

    /// Clique size, or `|S|` for a book.
    pub fn size(&self) -> usize {
        match self {
            Witness::RedClique { vertices } | Witness::MonoClique { vertices, .. } => vertices.len(),
            Witness::BlueBook { s, .. } => s.len(),
        }
    }

    pub(crate) fn with_vertex(self, v: usize, color: u8) -> Witness {
        let add = |mut vs: Vec<usize>| {
            vs.push(v);
            vs.sort_unstable();
            vs
        };
        match self {
            Witness::RedClique { vertices } if color == RED => Witness::RedClique { vertices: add(vertices) },
            Witness::MonoClique { color: c, side, vertices } if c == color => Witness::MonoClique {
                color: c,
                side,
                vertices: add(vertices),
            },
            w => w,
        }
    }
}

fn distinct_in_range(col: &Coloring, vs: &[usize]) -> bool {
    let mut seen = vec![false; col.n()];
    vs.iter().all(|&v| v < col.n() && !std::mem::replace(&mut seen[v], true))
}

fn monochromatic(col: &Coloring, color: u8, vs: &[usize]) -> bool {
    vs.iter()
        .enumerate()
        .all(|(i, &u)| vs[i + 1..].iter().all(|&v| col.color(u, v) == color))
}

/// Replays `w` against the colouring: every required edge has the required
/// colour, vertices are in range and distinct.
pub fn witness_validate(col: &Coloring, w: &Witness) -> bool {
    match w {
        Witness::RedClique { vertices } => {
            !vertices.is_empty() && distinct_in_range(col, vertices) && monochromatic(col, RED, vertices)
        }
        Witness::MonoClique { color, vertices, .. } => {
            *color != RED
                && (*color as usize) <= col.colors()
                && !vertices.is_empty()
                && distinct_in_range(col, vertices)
                && monochromatic(col, *color, vertices)
        }
        Witness::BlueBook { s, t } => {
            let all: Vec<usize> = s.iter().chain(t).copied().collect();
            !s.is_empty()
                && distinct_in_range(col, &all)
                && monochromatic(col, BLUE, s)
                && s.iter().all(|&u| t.iter().all(|&v| col.color(u, v) == BLUE))
        }
    }
}

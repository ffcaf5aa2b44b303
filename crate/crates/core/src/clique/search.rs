use fixedbitset::FixedBitSet;

use super::coloring::Coloring;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliqueSearch {
    Found(Vec<usize>),
    Absent,
    /// The node budget ran out before the search finished.
    Budget,
}

impl CliqueSearch {
    pub fn found(self) -> Option<Vec<usize>> {
        match self {
            CliqueSearch::Found(v) => Some(v),
            _ => None,
        }
    }
}

/// Depth-first search for a colour-`color` clique of `size` vertices inside
/// `within`. Vertices are tried by decreasing degree inside `within` (ties by
/// index), which finds dense planted structures on the first descent.
pub fn find_clique(col: &Coloring, color: u8, within: &FixedBitSet, size: usize, budget: u64) -> CliqueSearch {
    if size == 0 {
        return CliqueSearch::Found(Vec::new());
    }
    let mut order: Vec<(usize, usize)> = within
        .ones()
        .map(|v| (col.neighbors(v, color).intersection_count(within), v))
        .collect();
    order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let order: Vec<usize> = order.into_iter().map(|(_, v)| v).collect();
    let mut nodes = 0u64;
    let mut current = Vec::with_capacity(size);
    match extend(col, color, &order, size, &mut current, &mut nodes, budget) {
        Some(true) => {
            current.sort_unstable();
            CliqueSearch::Found(current)
        }
        Some(false) => CliqueSearch::Absent,
        None => CliqueSearch::Budget,
    }
}

/// `Some(found)`, or `None` when the budget ran out.
fn extend(
    col: &Coloring,
    color: u8,
    cand: &[usize],
    size: usize,
    current: &mut Vec<usize>,
    nodes: &mut u64,
    budget: u64,
) -> Option<bool> {
    if current.len() == size {
        return Some(true);
    }
    for (i, &v) in cand.iter().enumerate() {
        if current.len() + cand.len() - i < size {
            break;
        }
        *nodes += 1;
        if *nodes > budget {
            return None;
        }
        let nbrs = col.neighbors(v, color);
        let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&u| nbrs.contains(u)).collect();
        current.push(v);
        if extend(col, color, &next, size, current, nodes, budget)? {
            return Some(true);
        }
        current.pop();
    }
    Some(false)
}

use fixedbitset::FixedBitSet;
use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stage::rational_string;

use super::coloring::{edges_between, Coloring, RED};

/// A pair of disjoint nonempty vertex sets.
#[derive(Clone, Debug)]
pub struct Candidate<'a> {
    coloring: &'a Coloring,
    x: FixedBitSet,
    y: FixedBitSet,
}

impl<'a> Candidate<'a> {
    pub fn new(coloring: &'a Coloring, x: &[usize], y: &[usize]) -> Result<Self> {
        Self::from_sets(coloring, coloring.vertex_set(x)?, coloring.vertex_set(y)?)
    }

    pub fn from_sets(coloring: &'a Coloring, x: FixedBitSet, y: FixedBitSet) -> Result<Self> {
        if x.is_clear() || y.is_clear() {
            return Err(Error::domain("Candidate", "X and Y must be nonempty"));
        }
        if !x.is_disjoint(&y) {
            return Err(Error::domain("Candidate", "X and Y must be disjoint"));
        }
        Ok(Candidate { coloring, x, y })
    }

    pub fn coloring(&self) -> &'a Coloring {
        self.coloring
    }

    pub fn x(&self) -> &FixedBitSet {
        &self.x
    }

    pub fn y(&self) -> &FixedBitSet {
        &self.y
    }

    /// `e_R(X, Y)`.
    pub fn red_edges(&self) -> u64 {
        edges_between(self.coloring, RED, &self.x, &self.y)
    }

    /// `d(X, Y) = e_R(X, Y)/(|X||Y|)`.
    pub fn density(&self) -> Rational {
        Rational::from((self.red_edges(), (self.x.count_ones(..) * self.y.count_ones(..)) as u64))
    }
}

/// `e_R(X, Z) − p|X||Z|`; zero for empty `Z`.
pub(crate) fn fp(col: &Coloring, x: &FixedBitSet, z: &FixedBitSet, p: &Rational) -> Rational {
    let e = edges_between(col, RED, x, z);
    let size = (x.count_ones(..) * z.count_ones(..)) as u64;
    Rational::from(e) - p.clone() * size
}

/// `f_p(X, Y) = e_R(X, Y) − p|X||Y|`, exact.
pub fn excess_fp(cand: &Candidate<'_>, p: &Rational) -> Rational {
    fp(cand.coloring, &cand.x, &cand.y, p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalitySides {
    #[serde(with = "rational_string")]
    pub lhs: Rational,
    #[serde(with = "rational_string")]
    pub rhs: Rational,
    pub holds: bool,
}

impl InequalitySides {
    fn new(lhs: Rational, rhs: Rational) -> Self {
        let holds = lhs >= rhs;
        InequalitySides { lhs, rhs, holds }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityReport {
    /// `Σ_{v∈X} f_p(X, N_R(v)∩Y) >= p|X| f_p(X, Y)`.
    pub excess_average: InequalitySides,
    /// `Σ_{v∈X} d(X, N_R(v)∩Y)|N_R(v)∩Y| >= e_R(X, Y) d(X, Y)`.
    pub density_average: InequalitySides,
    pub pass: bool,
}

/// Both averaging inequalities in exact arithmetic. Terms with empty
/// `N_R(v) ∩ Y` contribute zero to the density sum.
pub fn inequality_suite(cand: &Candidate<'_>, p: &Rational) -> InequalityReport {
    let col = cand.coloring;
    let nx = cand.x.count_ones(..) as u64;
    let ny = cand.y.count_ones(..) as u64;
    let mut excess_lhs = Rational::new();
    let mut density_lhs = Rational::new();
    for v in cand.x.ones() {
        let mut z = col.neighbors(v, RED).clone();
        z.intersect_with(&cand.y);
        excess_lhs += fp(col, &cand.x, &z, p);
        if !z.is_clear() {
            // d(X, Z)|Z| = e_R(X, Z)/|X|
            density_lhs += Rational::from((edges_between(col, RED, &cand.x, &z), nx));
        }
    }
    let f = excess_fp(cand, p);
    let excess_rhs = p.clone() * nx * f;
    let e = cand.red_edges();
    let density_rhs = Rational::from((e * e, nx * ny));
    let excess_average = InequalitySides::new(excess_lhs, excess_rhs);
    let density_average = InequalitySides::new(density_lhs, density_rhs);
    let pass = excess_average.holds && density_average.holds;
    InequalityReport {
        excess_average,
        density_average,
        pass,
    }
}

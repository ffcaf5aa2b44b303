//! Uncertified exploration with piecewise-linear `F` and piecewise-constant
//! `M` on the intervals `[i/N, (i+1)/N]`, against the Erdős–Szekeres frontier
//! (`α = 0`, so `Y = 1 − X`).
//!
//! On each interval `ψ` is affine in `λ` for a fixed slope and `M`, so the
//! search tests the two endpoints; the chosen pair is then re-checked on a
//! 100-point grid. `ψ(0) = ln X / 2 < 0` for any finite slope, so the first
//! interval cannot be built this way: it is anchored at the entropy value
//! `F(1/N) = (1/N + 1)ln(1/N + 1) − (1/N)ln(1/N)` and left unchecked.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_SLOPE: f64 = 50.0;
const SLOPE_BLOCK: usize = 256;
const CHECK_POINTS: usize = 100;

fn entropy(lam: f64) -> f64 {
    if lam == 0.0 {
        return 0.0;
    }
    (lam + 1.0) * lam.ln_1p() - lam * lam.ln()
}

/// `ψ` for `F(λ) = f_a + s(λ − a)` and constant `M = m`.
fn slack(f_a: f64, a: f64, lam: f64, s: f64, m: f64) -> f64 {
    let ln_x = (-(-s).exp_m1()).ln() / (1.0 - m) + (-m).ln_1p();
    let ln_y = (-ln_x.exp_m1()).ln();
    f_a + s * (lam - a) + 0.5 * (ln_x + lam * (m.ln() + ln_y))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseProfile {
    pub n: usize,
    /// `i/N` for `i = 0..=N`.
    pub breakpoints: Vec<f64>,
    /// `F` at each breakpoint; `F[0] = 0`.
    pub f: Vec<f64>,
    /// `M` on each interval.
    pub m: Vec<f64>,
    /// Slopes of `F` on each interval.
    pub slopes: Vec<f64>,
}

impl PiecewiseProfile {
    pub fn diagonal_value(&self) -> f64 {
        self.f[self.n].exp()
    }

    /// Minimum of `ψ` over intervals `1..N` on the grid
    /// `a + (j + shift)(b − a)/(points − 1)`, `j < points`, clipped to the
    /// interval; returns `(interval, λ, ψ)`.
    pub fn min_slack(&self, shift: f64, points: usize) -> Option<(usize, f64, f64)> {
        let mut worst: Option<(usize, f64, f64)> = None;
        for i in 1..self.n {
            let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
            for j in 0..points {
                let t = ((j as f64 + shift) / (points - 1).max(1) as f64).min(1.0);
                let lam = a + t * (b - a);
                let v = slack(self.f[i], a, lam, self.slopes[i], self.m[i]);
                if worst.is_none_or(|w| v < w.2) {
                    worst = Some((i, lam, v));
                }
            }
        }
        worst
    }

    /// `breakpoint,F,M` rows; `M` belongs to the interval starting at the
    /// breakpoint and is empty on the last row.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["breakpoint", "F", "M"]).expect("in-memory write");
        for i in 0..=self.n {
            let m = self.m.get(i).map(|m| format!("{m}")).unwrap_or_default();
            w.write_record([format!("{}", self.breakpoints[i]), format!("{}", self.f[i]), m])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMode {
    /// Fit `β` with the linear and cubic coefficients fixed at `−1/4`, `0.08`.
    BetaOnly,
    /// Fit all three coefficients.
    Free,
}

/// Least-squares fit of `F(λ) = H(λ) + (c₁λ + βλ² + c₃λ³)e^{−λ}` to the
/// breakpoint values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothFit {
    pub mode: FitMode,
    pub linear: f64,
    pub beta: f64,
    pub cubic: f64,
    pub max_gap: f64,
    pub rms_gap: f64,
    /// `4e^{(c₁ + β + c₃)/e}`.
    pub diagonal_base: f64,
}

impl SmoothFit {
    pub fn eval(&self, lam: f64) -> f64 {
        entropy(lam) + (self.linear * lam + self.beta * lam * lam + self.cubic * lam.powi(3)) * (-lam).exp()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseExploration {
    pub profile: PiecewiseProfile,
    /// `e^{F(1)}`; exploratory, never certified.
    pub diagonal_value: f64,
    /// Smallest `ψ` on the checked grid of intervals `1..N`.
    pub min_slack: f64,
    /// Intervals fixed by anchoring rather than searched.
    pub anchored_intervals: Vec<usize>,
    pub fit: SmoothFit,
}

fn fit(profile: &PiecewiseProfile, mode: FitMode) -> SmoothFit {
    let pts: Vec<(f64, f64)> = (1..=profile.n)
        .map(|i| (profile.breakpoints[i], profile.f[i] - entropy(profile.breakpoints[i])))
        .collect();
    let (linear, beta, cubic) = match mode {
        FitMode::BetaOnly => {
            let (mut num, mut den) = (0.0, 0.0);
            for &(l, r) in &pts {
                let e = (-l).exp();
                let w = l * l * e;
                num += w * (r - (-0.25 * l + 0.08 * l.powi(3)) * e);
                den += w * w;
            }
            (-0.25, num / den, 0.08)
        }
        FitMode::Free => {
            let mut ata = [[0.0f64; 3]; 3];
            let mut atb = [0.0f64; 3];
            for &(l, r) in &pts {
                let e = (-l).exp();
                let row = [l * e, l * l * e, l.powi(3) * e];
                for a in 0..3 {
                    atb[a] += row[a] * r;
                    for b in 0..3 {
                        ata[a][b] += row[a] * row[b];
                    }
                }
            }
            let c = solve3(ata, atb).unwrap_or([-0.25, 0.0, 0.08]);
            (c[0], c[1], c[2])
        }
    };
    let mut fit = SmoothFit {
        mode,
        linear,
        beta,
        cubic,
        max_gap: 0.0,
        rms_gap: 0.0,
        diagonal_base: 4.0 * ((linear + beta + cubic) / std::f64::consts::E).exp(),
    };
    let mut sq = 0.0;
    for i in 1..=profile.n {
        let g = (profile.f[i] - fit.eval(profile.breakpoints[i])).abs();
        fit.max_gap = fit.max_gap.max(g);
        sq += g * g;
    }
    fit.rms_gap = (sq / profile.n as f64).sqrt();
    fit
}

/// Cramer's rule; `None` for a singular system.
fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&a);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut m = a;
        for r in 0..3 {
            m[r][k] = b[r];
        }
        *o = det(&m) / d;
    }
    Some(out)
}

/// Smallest `M` index on the grid that makes `(s, m)` feasible on `[a, b]`,
/// and the best `min(ψ(a), ψ(b))` seen.
fn first_feasible_m(f_a: f64, a: f64, b: f64, s: f64, ms: &[f64]) -> (Option<usize>, f64) {
    let mut best = f64::NEG_INFINITY;
    for (j, &m) in ms.iter().enumerate() {
        let v = slack(f_a, a, a, s, m).min(slack(f_a, a, b, s, m));
        if v >= 0.0 {
            return (Some(j), v);
        }
        if v > best {
            best = v;
        }
    }
    (None, best)
}

/// Builds the profile left to right, taking on each interval the smallest
/// slope on the `slope_grid` lattice (ties to the smallest `M` on the
/// `m_grid` lattice) for which `ψ >= 0` on the interval.
pub fn piecewise_explore(n: usize, slope_grid: f64, m_grid: f64, mode: FitMode) -> Result<PiecewiseExploration> {
    if n < 2 {
        return Err(Error::domain("piecewise_explore", "N must be at least 2"));
    }
    if !(slope_grid > 0.0 && slope_grid.is_finite()) || !(m_grid > 0.0 && m_grid < 0.5) {
        return Err(Error::domain("piecewise_explore", "grid resolutions must be positive (m_grid < 1/2)"));
    }
    let ms: Vec<f64> = (1..).map(|j| j as f64 * m_grid).take_while(|&m| m < 1.0).collect();
    let max_k = (MAX_SLOPE / slope_grid).ceil() as usize;
    let breakpoints: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let mut f = vec![0.0; n + 1];
    let mut m = vec![0.0; n];
    let mut slopes = vec![0.0; n];

    let b0 = breakpoints[1];
    f[1] = entropy(b0);
    slopes[0] = f[1] / b0;
    m[0] = ms
        .iter()
        .copied()
        .max_by(|x, y| slack(0.0, 0.0, b0, slopes[0], *x).total_cmp(&slack(0.0, 0.0, b0, slopes[0], *y)))
        .expect("nonempty M grid");

    for i in 1..n {
        let (a, b) = (breakpoints[i], breakpoints[i + 1]);
        let mut found = None;
        let mut best_violation = f64::NEG_INFINITY;
        let mut k0 = 1;
        while k0 <= max_k && found.is_none() {
            let k1 = (k0 + SLOPE_BLOCK).min(max_k + 1);
            let block: Vec<(Option<usize>, f64)> = (k0..k1)
                .into_par_iter()
                .map(|k| first_feasible_m(f[i], a, b, k as f64 * slope_grid, &ms))
                .collect();
            for (off, (j, v)) in block.into_iter().enumerate() {
                best_violation = best_violation.max(v);
                if let Some(j) = j {
                    found = Some(((k0 + off) as f64 * slope_grid, ms[j]));
                    break;
                }
            }
            k0 = k1;
        }
        let Some((s, mm)) = found else {
            return Err(Error::Infeasible(format!(
                "interval {i} [{a}, {b}]: no slope up to {MAX_SLOPE} is feasible; best min psi = {best_violation:e}"
            )));
        };
        slopes[i] = s;
        m[i] = mm;
        f[i + 1] = f[i] + s * (b - a);
    }

    let profile = PiecewiseProfile {
        n,
        breakpoints,
        f,
        m,
        slopes,
    };
    let min_slack = profile.min_slack(0.0, CHECK_POINTS).map_or(0.0, |w| w.2);
    if min_slack < 0.0 {
        return Err(Error::InternalContradiction(format!(
            "piecewise profile violates psi >= 0 on its own grid ({min_slack:e})"
        )));
    }
    let fit = fit(&profile, mode);
    Ok(PiecewiseExploration {
        diagonal_value: profile.diagonal_value(),
        min_slack,
        anchored_intervals: vec![0],
        fit,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_intervals() {
        let e = piecewise_explore(10, 1e-3, 1e-3, FitMode::BetaOnly).unwrap();
        let p = &e.profile;
        assert_eq!(p.f[0], 0.0);
        assert!(p.m.iter().all(|&m| m > 0.0 && m < 1.0));
        assert!((e.diagonal_value - 3.8977).abs() < 2e-3, "{}", e.diagonal_value);
        assert!(e.diagonal_value < 4.0);
        assert!(e.min_slack >= 0.0);
    }

    #[test]
    fn coarse_profile_is_feasible() {
        let e = piecewise_explore(2, 1e-3, 1e-3, FitMode::BetaOnly).unwrap();
        assert!((e.diagonal_value - 4.059).abs() < 5e-3, "{}", e.diagonal_value);
        assert!(e.profile.min_slack(0.5, 100).unwrap().2 >= 0.0);
    }

    #[test]
    fn shifted_grid_shows_no_violation() {
        let e = piecewise_explore(10, 1e-3, 1e-3, FitMode::BetaOnly).unwrap();
        for shift in [0.25, 0.5, 0.75] {
            assert!(e.profile.min_slack(shift, 100).unwrap().2 >= 0.0);
        }
    }

    #[test]
    fn free_fit_is_no_worse() {
        let e = piecewise_explore(10, 1e-3, 1e-3, FitMode::BetaOnly).unwrap();
        let free = fit(&e.profile, FitMode::Free);
        assert!(free.rms_gap <= e.fit.rms_gap + 1e-12);
    }

    #[test]
    fn csv_shape() {
        let e = piecewise_explore(2, 1e-2, 1e-2, FitMode::BetaOnly).unwrap();
        let csv = e.profile.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "breakpoint,F,M");
        assert_eq!(lines.len(), 4);
        assert!(lines[3].ends_with(','));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(piecewise_explore(1, 1e-3, 1e-3, FitMode::BetaOnly).is_err());
        assert!(piecewise_explore(4, 0.0, 1e-3, FitMode::BetaOnly).is_err());
    }
}

//! Harnesses shared by the clique property tests and the acceptance target.
#![allow(dead_code)]

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use ramsey_core::clique::{
    blue_book_extract, inequality_suite, recurse_good_traced, witness_validate, Branch, Candidate, Coloring, Side, Witness,
    BLUE, RED,
};
use ramsey_core::{Error, MulticolorTarget};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Densities used for the exhaustive inequality sweep.
pub fn sweep_densities() -> Vec<Rational> {
    vec![q(1, 3), q(1, 2), q(3, 5), q(2, 3), q(9, 10)]
}

#[derive(Debug, Default)]
pub struct InequalityTally {
    pub colorings: u64,
    pub candidates: u64,
    pub failures: Vec<String>,
}

/// Splits `0..n` by base-3 digits of `code`: 1 goes to X, 2 to Y.
fn split(n: usize, mut code: u32) -> (Vec<usize>, Vec<usize>) {
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for v in 0..n {
        match code % 3 {
            1 => x.push(v),
            2 => y.push(v),
            _ => {}
        }
        code /= 3;
    }
    (x, y)
}

/// Both inequalities for every candidate of every 2-colouring of `K_n`,
/// `2 <= n <= max_n`, at each sweep density.
pub fn exhaustive_inequalities(max_n: usize) -> InequalityTally {
    let mut tally = InequalityTally::default();
    let ps = sweep_densities();
    for n in 2..=max_n {
        let edges = n * (n - 1) / 2;
        for mask in 0u32..1 << edges {
            let col = Coloring::from_fn(n, 1, |u, v| {
                // Index of edge {u, v}, u < v, in row order.
                let idx = v * (v - 1) / 2 + u;
                if mask >> idx & 1 == 1 { BLUE } else { RED }
            })
            .unwrap();
            tally.colorings += 1;
            for code in 0..3u32.pow(n as u32) {
                let (x, y) = split(n, code);
                if x.is_empty() || y.is_empty() {
                    continue;
                }
                let cand = Candidate::new(&col, &x, &y).unwrap();
                for p in &ps {
                    tally.candidates += 1;
                    if !inequality_suite(&cand, p).pass {
                        tally.failures.push(format!("n={n} mask={mask:#x} X={x:?} Y={y:?} p={p}"));
                    }
                }
            }
        }
    }
    tally
}

/// A random colouring on at most `max_n` vertices, a random candidate inside
/// it and a random density.
pub fn random_candidate(rng: &mut impl Rng, max_n: usize) -> (Coloring, Vec<usize>, Vec<usize>, Rational) {
    let n = rng.random_range(2..=max_n);
    let c = rng.random_range(1..=3);
    let red = rng.random_range(0.0..=1.0);
    let col = Coloring::random(n, c, red, rng.random()).unwrap();
    loop {
        let (mut x, mut y) = (Vec::new(), Vec::new());
        for v in 0..n {
            match rng.random_range(0..3) {
                0 => x.push(v),
                1 => y.push(v),
                _ => {}
            }
        }
        if !x.is_empty() && !y.is_empty() {
            let d = rng.random_range(2..=1000i64);
            let p = q(rng.random_range(1..d), d);
            return (col, x, y, p);
        }
    }
}

pub fn random_inequalities(count: usize, max_n: usize, seed: u64) -> InequalityTally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = InequalityTally::default();
    for _ in 0..count {
        let (col, x, y, p) = random_candidate(&mut rng, max_n);
        let cand = Candidate::new(&col, &x, &y).unwrap();
        tally.colorings += 1;
        tally.candidates += 1;
        if !inequality_suite(&cand, &p).pass {
            tally.failures.push(format!("n={} X={x:?} Y={y:?} p={p}", col.n()));
        }
    }
    tally
}

/// Parameters of one induction run.
#[derive(Clone, Debug)]
pub struct GoodInstance {
    pub n: usize,
    pub red: f64,
    pub seed: u64,
    pub x_share: f64,
    pub p: Rational,
    pub x: Rational,
    pub k: u32,
    pub parts: Vec<u32>,
    pub ts: Vec<u32>,
    /// When set, edges inside X are non-red except with this probability,
    /// which pushes the induction into the colour branches.
    pub structured: Option<f64>,
}

impl GoodInstance {
    pub fn random(rng: &mut impl Rng) -> Self {
        let (p, x) = [(q(1, 2), q(1, 4)), (q(11, 20), q(3, 10)), (q(3, 5), q(2, 5)), (q(3, 5), q(1, 4))]
            [rng.random_range(0..4)]
        .clone();
        let kind = rng.random_range(0..10);
        if kind < 3 {
            let c = rng.random_range(1..=2usize);
            return GoodInstance {
                n: rng.random_range(40..=200),
                red: rng.random_range(0.9..1.0),
                seed: rng.random(),
                x_share: rng.random_range(0.3..0.6),
                p,
                x,
                k: rng.random_range(2..=3),
                parts: vec![rng.random_range(2..=3); c],
                ts: vec![rng.random_range(2..=4); c],
                structured: Some(rng.random_range(0.0..0.2)),
            };
        }
        if kind < 8 {
            GoodInstance {
                n: rng.random_range(30..=220),
                red: rng.random_range(0.7..0.99),
                seed: rng.random(),
                x_share: rng.random_range(0.3..0.7),
                p,
                x,
                k: rng.random_range(2..=3),
                parts: vec![rng.random_range(2..=3)],
                ts: vec![rng.random_range(2..=3)],
                structured: None,
            }
        } else {
            GoodInstance {
                n: rng.random_range(900..=1500),
                red: rng.random_range(0.95..0.995),
                seed: rng.random(),
                x_share: rng.random_range(0.4..0.6),
                p,
                x,
                k: 2,
                parts: vec![2, 2],
                ts: vec![2, 2],
                structured: None,
            }
        }
    }

    pub fn cut(&self) -> usize {
        (((self.n as f64) * self.x_share).round() as usize).clamp(1, self.n - 1)
    }

    pub fn coloring(&self) -> Coloring {
        let c = self.parts.len();
        let Some(noise) = self.structured else {
            return Coloring::random(self.n, c, self.red, self.seed).unwrap();
        };
        let cut = self.cut();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let other = |rng: &mut ChaCha8Rng| 1 + rng.random_range(0..c) as u8;
        Coloring::from_fn(self.n, c, |u, v| {
            let red_prob = match (u < cut, v < cut) {
                (true, true) => noise,
                (true, false) => self.red,
                _ => 0.5,
            };
            if rng.random_bool(red_prob) { RED } else { other(&mut rng) }
        })
        .unwrap()
    }

    fn theta(&self) -> Vec<Rational> {
        let c = self.parts.len() as i64;
        vec![q(1, c); self.parts.len()]
    }
}

/// Outcome of one run whose hypothesis held, or `None` when it did not.
pub fn run_instance(inst: &GoodInstance) -> Option<std::result::Result<Vec<Branch>, String>> {
    let col = inst.coloring();
    let cut = inst.cut();
    let xs: Vec<usize> = (0..cut).collect();
    let ys: Vec<usize> = (cut..inst.n).collect();
    let cand = Candidate::new(&col, &xs, &ys).unwrap();
    let targets = MulticolorTarget::new(inst.parts.clone()).unwrap();
    let run = recurse_good_traced(&cand, &inst.p, &inst.x, inst.k, &targets, &inst.ts, &inst.theta());
    let (w, trace) = match run {
        Err(Error::HypothesisNotMet { .. }) => return None,
        Err(e) => return Some(Err(format!("{inst:?}: {e}"))),
        Ok(r) => r,
    };
    Some(
        check_run(&col, inst, &w, &trace)
            .map(|()| trace.iter().map(|s| s.branch).collect())
            .map_err(|m| format!("{inst:?}: {m}")),
    )
}

fn check_run(col: &Coloring, inst: &GoodInstance, w: &Witness, trace: &[ramsey_core::clique::Step]) -> Result<(), String> {
    if !witness_validate(col, w) {
        return Err(format!("witness {w:?} does not validate"));
    }
    let size_ok = match w {
        Witness::RedClique { vertices } => vertices.len() == inst.k as usize,
        Witness::MonoClique { color, side, vertices } => {
            let i = *color as usize - 1;
            let want = match side {
                Side::X => inst.ts[i],
                Side::Y => inst.parts[i],
            };
            vertices.len() == want as usize
        }
        Witness::BlueBook { .. } => false,
    };
    if !size_ok {
        return Err(format!("witness {w:?} has the wrong size"));
    }
    // The measure k + Σt falls by one on every non-terminal step.
    let (mut k, mut ts) = (inst.k, inst.ts.clone());
    let Some((last, steps)) = trace.split_last() else {
        return Err("empty trace".into());
    };
    for s in steps {
        match s.branch {
            Branch::Red => k -= 1,
            Branch::Color(c) => ts[c as usize - 1] -= 1,
            _ => return Err(format!("terminal branch {:?} before the end", s.branch)),
        }
        if k == 0 || ts.contains(&0) {
            return Err("measure went below its floor".into());
        }
    }
    if matches!(last.branch, Branch::Red | Branch::Color(_)) {
        return Err("trace ends on a descent".into());
    }
    Ok(())
}

#[derive(Debug, Default)]
pub struct FuzzTally {
    pub attempts: usize,
    pub holding: usize,
    pub valid: usize,
    pub multicolor: usize,
    /// Steps taken per branch kind: red, other colour, base, search in `Y`.
    pub branches: [usize; 4],
    pub failures: Vec<String>,
}

/// Draws instances until `wanted` of them meet the hypothesis.
pub fn fuzz_recurse_good(wanted: usize, seed: u64) -> FuzzTally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = FuzzTally::default();
    while tally.holding < wanted && tally.attempts < 50 * wanted {
        let inst = GoodInstance::random(&mut rng);
        tally.attempts += 1;
        match run_instance(&inst) {
            None => {}
            Some(r) => {
                tally.holding += 1;
                if inst.parts.len() > 1 {
                    tally.multicolor += 1;
                }
                match r {
                    Ok(steps) => {
                        tally.valid += 1;
                        for b in steps {
                            let i = match b {
                                Branch::Red => 0,
                                Branch::Color(_) => 1,
                                Branch::Base => 2,
                                Branch::Exhaustive => 3,
                            };
                            tally.branches[i] += 1;
                        }
                    }
                    Err(m) => tally.failures.push(m),
                }
            }
        }
    }
    tally
}

/// `|X| = 8000` with a blue `K_40` on vertices `0..40`; planted vertices see
/// the rest in blue with probability 3/4, all other pairs are blue with
/// probability 1/2.
pub fn planted_book() -> (Coloring, FixedBitSet) {
    const N: usize = 8000;
    const PLANT: usize = 40;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let col = Coloring::from_fn(N, 1, |u, v| {
        let blue = if v < PLANT {
            true
        } else if u < PLANT {
            rng.random_bool(0.75)
        } else {
            rng.random_bool(0.5)
        };
        if blue { BLUE } else { RED }
    })
    .unwrap();
    let all = col.all_vertices();
    (col, all)
}

pub fn planted_book_witness() -> (Coloring, Witness) {
    let (col, x) = planted_book();
    let w = blue_book_extract(&col, &x, &q(1, 2), 2, 3).unwrap();
    (col, w)
}

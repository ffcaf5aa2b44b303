//! Fixtures shared by the benchmarks.

use rug::Rational;

use ramsey_core::clique::Coloring;
use ramsey_core::region::ProvenAlpha;
use ramsey_core::verifier::{paper_chain_pairs, verify_chain, VerificationPolicy};
use ramsey_core::ExponentStage;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Stage `i` of the published chain together with the alphas it relies on.
pub fn paper_stage(i: usize) -> (ExponentStage, Vec<ProvenAlpha>) {
    let stage = ExponentStage::paper_chain().swap_remove(i);
    let chain = verify_chain(&paper_chain_pairs(), &VerificationPolicy::default()).expect("chain verifies");
    (stage, chain.proven[..=i].to_vec())
}

/// A red-heavy random colouring split into halves.
pub fn halves(n: usize, red: f64, seed: u64) -> (Coloring, Vec<usize>, Vec<usize>) {
    let col = Coloring::random(n, 1, red, seed).expect("valid colouring");
    (col, (0..n / 2).collect(), (n / 2..n).collect())
}

use thiserror::Error;

/// Errors raised by the evaluators, the verifier and the clique engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violated the documented domain of an operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// The value at working precision and at doubled precision disagree.
    #[error("precision check failed for {op}: values differ by {difference} (tolerance {tolerance})")]
    Precision {
        op: &'static str,
        difference: String,
        tolerance: String,
    },

    /// `F'` is not certified positive on the interval, so `X` is undefined.
    #[error("X undefined: F' enclosure [{lo}, {hi}] is not strictly positive on lambda in [{lam_lo}, {lam_hi}]")]
    XUndefined {
        lam_lo: String,
        lam_hi: String,
        lo: String,
        hi: String,
    },

    /// The `X <= 1/2` branch selector for `Y` changes inside the interval.
    #[error("Y branch boundary inside lambda in [{lam_lo}, {lam_hi}]; split the interval")]
    BranchBoundary { lam_lo: String, lam_hi: String },

    /// The inductive hypothesis of the excess-edge lemma does not hold.
    #[error("hypothesis not met: f_p(X,Y) = {lhs} < threshold {rhs}")]
    HypothesisNotMet { lhs: String, rhs: String },

    /// A branch of a proof procedure found no witness where the argument
    /// guarantees one.
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),

    /// The vertex count is below the size the descent theorem requires.
    #[error("coloring has {n} vertices but the bound requires at least {required}")]
    SizePrecondition { n: usize, required: String },

    /// No partition meeting the lemma threshold was found within budget.
    #[error("partition shortfall: best f_p = {best}, threshold {threshold}")]
    PartitionShortfall { best: String, threshold: String },

    /// A hypothesis of an extraction lemma is not met.
    #[error("precondition not met: {0}")]
    Precondition(String),

    /// No candidate in a search satisfied the feasibility conditions.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A search exceeded its configured budget.
    #[error("budget exhausted: {0}")]
    Budget(String),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

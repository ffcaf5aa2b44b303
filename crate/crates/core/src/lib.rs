//! Certified evaluation of Ramsey-number upper bounds.
//!
//! The crate covers closed-form bound evaluators, an interval verifier for the
//! exponent-function feasibility conditions, the parameter search that feeds
//! it, and small-scale executable versions of the clique-finding inductions.

pub mod bounds;
pub mod clique;
pub mod error;
pub mod numeric;
pub mod optimizer;
pub mod region;
pub mod stage;
pub mod verifier;

pub use bounds::MulticolorTarget;
pub use clique::{Coloring, Witness};
pub use error::{Error, Result};
pub use numeric::{ExactReal, Interval, QuadraticSurd, DEFAULT_PRECISION};
pub use stage::{Alpha, ExponentStage};

//! Executable versions of the clique-finding inductions on explicit
//! colourings of `K_n`, and exact small Ramsey numbers.

mod book;
mod candidate;
mod coloring;
mod descend;
mod exact;
mod good;
mod search;
mod witness;

pub use book::{blue_book_extract, book_clique_size};
pub use candidate::{excess_fp, inequality_suite, Candidate, InequalityReport, InequalitySides};
pub use coloring::{Coloring, BLUE, RED};
pub use descend::{descend, descend_with, DescendOptions, DescendRun, Descent, PartitionStrategy};
pub use exact::{ramsey_exact, RamseyOutcome, EXTENSION_BUDGET, MAX_VERTICES};
pub use good::{good_threshold, recurse_good, recurse_good_traced, recurse_good_two_color, Branch, Step};
pub use search::{find_clique, CliqueSearch};
pub use witness::{witness_validate, Side, Witness};

//! Synthetic oversampling of the revert class.
//!
//! Values are generated per quartile interval of an anchor feature. For
//! every numeric feature the original reverts falling in the same interval
//! of that feature are clustered in one dimension, and samples are drawn
//! uniformly between the quartiles of the largest cluster. Identifiers and
//! n-gram maps are copied from observed values.

mod fidelity;
mod generate;
mod kmeans;
mod stats;

pub use fidelity::{fidelity_report, write_fidelity_csv, FidelityRow};
pub use generate::{generate_reverts, merge_balance, Fallback, SynthConfig, SynthOutput, ANCHOR_FEATURE};
pub use kmeans::{kmeans_1d, sse, KMeans};
pub use stats::{quartile_stats, quantile, QuartileStats};

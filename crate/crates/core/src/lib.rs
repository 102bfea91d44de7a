//! Stream classification of wiki review events.
//!
//! The crate covers the whole pipeline: ingesting raw review events and
//! collapsing them into per-editor daily records, text normalization and
//! n-gram vectorization, offline feature analysis and batch classifiers,
//! quartile/cluster-based synthetic oversampling of the revert class,
//! incremental editor profiles, online classifiers under prequential
//! evaluation, and explanations of tree predictions.

pub mod analysis;
pub mod data;
pub mod error;
pub mod explain;
pub mod features;
pub mod profile;
pub mod seed;
pub mod stream;
pub mod synth;
pub mod text;

pub use error::{Error, Result};

/// Class id of non-revert records.
pub const NON_REVERT: usize = 0;
/// Class id of revert records.
pub const REVERT: usize = 1;

/// Human-readable class name used in reports and explanations.
pub fn class_name(class: usize) -> &'static str {
    match class {
        REVERT => "revert",
        _ => "non-revert",
    }
}

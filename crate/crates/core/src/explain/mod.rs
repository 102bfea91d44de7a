//! Explanations of tree predictions: the decision path of one sample, the
//! shortest agreeing path in an ensemble, and natural-language and DOT
//! renderings.

mod dot;
mod path;
mod render;

pub use dot::export_dot;
pub use path::{decision_path, shortest_ensemble_path, Comparison, Explanation, Predicate, PredicateTarget};
pub use render::render_nl;

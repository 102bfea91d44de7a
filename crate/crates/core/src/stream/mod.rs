//! Online classifiers, prequential evaluation and classification metrics.

mod checkpoint;
mod estimator;
mod forest;
mod hoeffding;
mod metrics;
mod model;
mod naive_bayes;
mod prequential;

pub use checkpoint::{AnyModel, Checkpoint, CHECKPOINT_VERSION};
pub use estimator::GaussianEstimator;
pub use forest::{OnlineForest, OnlineForestConfig};
pub use hoeffding::{hoeffding_bound, HoeffdingConfig, HoeffdingTree};
pub use metrics::{compute_metrics, Averaged, ClassMetrics, ConfusionMatrix, MetricsReport};
pub use model::StreamModel;
pub use naive_bayes::IncrementalNb;
pub use prequential::{
    first_unsorted, prequential_run, prequential_vectors, record_dates, EvalWindow, PrequentialConfig, PrequentialResult, StepOutcome,
};

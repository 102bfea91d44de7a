//! Offline analysis: rank correlation, batch interpretable classifiers,
//! forest-based feature importance and selection, and cross-validation.

mod cart;
mod cv;
mod dataset;
mod forest;
mod naive_bayes;
mod ridge;
mod selection;
mod spearman;
mod tree;

pub use cart::{train_cart, CartParams, MaxFeatures};
pub use cv::{batch_metrics_run, cross_validate, Classifier, CrossValidation, FoldStrategy, Learner};
pub use dataset::Dataset;
pub use forest::{train_forest, ForestModel, ForestParams};
pub use naive_bayes::{gaussian_log_density, GaussianNb, GaussianNbLearner, VAR_FLOOR};
pub use ridge::{train_ridge, RidgeLearner, RidgeModel};
pub use selection::{feature_importance, select_features, tree_importance, Importances};
pub use spearman::{rank, spearman, SpearmanResult};
pub use tree::{argmax, gini, DecisionTree, LeafHit, SplitNode, TreeNode};

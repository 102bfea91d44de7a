use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cart::{train_cart, CartParams};
use super::dataset::Dataset;
use super::forest::{train_forest, ForestModel, ForestParams};
use super::naive_bayes::{GaussianNb, GaussianNbLearner};
use super::ridge::{train_ridge, RidgeLearner, RidgeModel};
use super::tree::DecisionTree;
use crate::stream::{ConfusionMatrix, MetricsReport};
use crate::{Error, Result};

pub trait Classifier {
    fn predict(&self, x: &[f64]) -> usize;
}

pub trait Learner {
    type Model: Classifier;
    fn fit(&self, data: &Dataset) -> Result<Self::Model>;
}

impl Classifier for DecisionTree {
    fn predict(&self, x: &[f64]) -> usize {
        DecisionTree::predict(self, x)
    }
}

impl Classifier for ForestModel {
    fn predict(&self, x: &[f64]) -> usize {
        ForestModel::predict(self, x)
    }
}

impl Classifier for GaussianNb {
    fn predict(&self, x: &[f64]) -> usize {
        GaussianNb::predict(self, x)
    }
}

impl Classifier for RidgeModel {
    fn predict(&self, x: &[f64]) -> usize {
        RidgeModel::predict(self, x)
    }
}

impl Learner for CartParams {
    type Model = DecisionTree;
    fn fit(&self, data: &Dataset) -> Result<DecisionTree> {
        train_cart(data, self)
    }
}

impl Learner for ForestParams {
    type Model = ForestModel;
    fn fit(&self, data: &Dataset) -> Result<ForestModel> {
        train_forest(data, self)
    }
}

impl Learner for GaussianNbLearner {
    type Model = GaussianNb;
    fn fit(&self, data: &Dataset) -> Result<GaussianNb> {
        GaussianNb::fit(data)
    }
}

impl Learner for RidgeLearner {
    type Model = RidgeModel;
    fn fit(&self, data: &Dataset) -> Result<RidgeModel> {
        train_ridge(data, self.alpha)
    }
}

fn evaluate<C: Classifier + ?Sized>(model: &C, test: &Dataset) -> ConfusionMatrix {
    let mut cm = ConfusionMatrix::default();
    for i in 0..test.len() {
        cm.record(test.label(i), model.predict(test.row(i)));
    }
    cm
}

/// Fits on `train`, scores on `test`; the elapsed time covers both.
pub fn batch_metrics_run<L: Learner + ?Sized>(learner: &L, train: &Dataset, test: &Dataset) -> Result<MetricsReport> {
    if test.is_empty() {
        return Err(Error::EmptyInput("test set"));
    }
    let start = Instant::now();
    let model = learner.fit(train)?;
    let cm = evaluate(&model, test);
    let mut report = MetricsReport::from_confusion(&cm);
    report.elapsed_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FoldStrategy {
    /// Contiguous blocks in row order.
    Chronological,
    /// Contiguous blocks of a seeded permutation.
    Shuffled { seed: u64 },
}

impl FoldStrategy {
    /// Chronological for time-ordered datasets, shuffled otherwise.
    pub fn for_dataset(data: &Dataset, seed: u64) -> Self {
        if data.chronological {
            FoldStrategy::Chronological
        } else {
            FoldStrategy::Shuffled { seed }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub folds: Vec<MetricsReport>,
    /// Metrics over the summed fold confusion matrices.
    pub pooled: MetricsReport,
}

impl CrossValidation {
    pub fn mean_accuracy(&self) -> f64 {
        self.folds.iter().map(|f| f.accuracy).sum::<f64>() / self.folds.len() as f64
    }
}

/// k-fold cross-validation. The first `n % k` folds get one extra sample.
pub fn cross_validate<L: Learner + ?Sized>(
    learner: &L,
    data: &Dataset,
    k: usize,
    strategy: FoldStrategy,
) -> Result<CrossValidation> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 folds, got {k}")));
    }
    if k > data.len() {
        return Err(Error::InvalidParameter(format!(
            "{k} folds requested for {} samples",
            data.len()
        )));
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    if let FoldStrategy::Shuffled { seed } = strategy {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let n = data.len();
    let mut folds = Vec::with_capacity(k);
    let mut pooled = ConfusionMatrix::default();
    let mut start = 0;
    for f in 0..k {
        let size = n / k + usize::from(f < n % k);
        let test_idx = &order[start..start + size];
        let train_idx: Vec<usize> = order[..start].iter().chain(&order[start + size..]).copied().collect();
        start += size;
        let report = batch_metrics_run(learner, &data.subset(&train_idx), &data.subset(test_idx))?;
        pooled.merge(&report.confusion);
        folds.push(report);
    }
    Ok(CrossValidation {
        folds,
        pooled: MetricsReport::from_confusion(&pooled),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Oracle;
    struct Constant;

    impl Classifier for Oracle {
        fn predict(&self, x: &[f64]) -> usize {
            x[0] as usize
        }
    }
    impl Classifier for Constant {
        fn predict(&self, _: &[f64]) -> usize {
            0
        }
    }
    impl Learner for Oracle {
        type Model = Oracle;
        fn fit(&self, _: &Dataset) -> Result<Oracle> {
            Ok(Oracle)
        }
    }
    impl Learner for Constant {
        type Model = Constant;
        fn fit(&self, _: &Dataset) -> Result<Constant> {
            Ok(Constant)
        }
    }

    fn copy_label(n: usize) -> Dataset {
        let labels: Vec<usize> = (0..n).map(|i| i % 2).collect();
        Dataset::new(labels.iter().map(|&y| vec![y as f64]).collect(), labels, 2).unwrap()
    }

    #[test]
    fn perfect_classifier_all_folds() {
        let cv = cross_validate(&Oracle, &copy_label(40), 10, FoldStrategy::Shuffled { seed: 3 }).unwrap();
        assert_eq!(cv.folds.len(), 10);
        assert!(cv.folds.iter().all(|f| f.accuracy == 1.0));
        assert_eq!(cv.pooled.n_scored, 40);
    }

    #[test]
    fn constant_classifier_half() {
        let d = copy_label(10);
        let r = batch_metrics_run(&Constant, &d, &d).unwrap();
        assert_eq!(r.accuracy, 0.5);
        assert_eq!(r.per_class[1].recall, 0.0);
    }

    #[test]
    fn too_many_folds() {
        assert!(cross_validate(&Oracle, &copy_label(5), 6, FoldStrategy::Chronological).is_err());
    }

    #[test]
    fn fold_sizes_cover_everything() {
        let cv = cross_validate(&Oracle, &copy_label(23), 10, FoldStrategy::Chronological).unwrap();
        let sizes: Vec<u64> = cv.folds.iter().map(|f| f.n_scored).collect();
        assert_eq!(sizes.iter().sum::<u64>(), 23);
        assert_eq!(sizes[0], 3);
        assert_eq!(sizes[9], 2);
    }
}

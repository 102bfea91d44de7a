use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cart::{grow_tree, CartParams, MaxFeatures};
use super::dataset::Dataset;
use super::tree::{argmax, DecisionTree};
use crate::features::FeatureAccess;
use crate::seed::derive_seed;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_estimators: usize,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub max_features: MaxFeatures,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_estimators: 500,
            max_depth: None,
            min_samples_split: 2,
            max_features: MaxFeatures::Sqrt,
            bootstrap: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<DecisionTree>,
    pub n_estimators: usize,
    pub seed: u64,
    /// Out-of-bag accuracy; `None` without bootstrap or when no sample was
    /// ever left out.
    pub oob_score: Option<f64>,
}

impl ForestModel {
    pub fn n_classes(&self) -> usize {
        self.trees.first().map_or(2, |t| t.n_classes)
    }

    pub fn votes<X: FeatureAccess + ?Sized>(&self, x: &X) -> Vec<f64> {
        let mut votes = vec![0.0; self.n_classes()];
        for t in &self.trees {
            votes[t.predict(x)] += 1.0;
        }
        votes
    }

    /// Majority vote; ties go to the lower class id.
    pub fn predict<X: FeatureAccess + ?Sized>(&self, x: &X) -> usize {
        argmax(&self.votes(x))
    }
}

fn tree_seed(seed: u64, t: usize) -> u64 {
    derive_seed(seed, &format!("tree-{t}"))
}

/// Random forest of CART trees with bootstrap samples the size of the
/// training set and per-split feature subsampling. Tree `t` draws from its
/// own generator seeded from `(seed, t)`, so results do not depend on
/// thread scheduling.
pub fn train_forest(data: &Dataset, params: &ForestParams) -> Result<ForestModel> {
    if data.is_empty() {
        return Err(Error::EmptyInput("forest training set"));
    }
    if params.n_estimators == 0 {
        return Err(Error::InvalidParameter("n_estimators must be at least 1".into()));
    }
    let n = data.len();
    let cart = CartParams {
        max_depth: params.max_depth,
        min_samples_split: params.min_samples_split,
        max_features: params.max_features,
    };

    let grown: Vec<(DecisionTree, Vec<bool>)> = (0..params.n_estimators)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(tree_seed(params.seed, t));
            let mut weights = vec![0.0; n];
            if params.bootstrap {
                for _ in 0..n {
                    weights[rng.random_range(0..n)] += 1.0;
                }
            } else {
                weights.fill(1.0);
            }
            let in_bag: Vec<usize> = (0..n).filter(|&i| weights[i] > 0.0).collect();
            let tree = grow_tree(data, &in_bag, &weights, &cart, Some(&mut rng));
            let oob = weights.iter().map(|&w| w == 0.0).collect();
            (tree, oob)
        })
        .collect();

    let oob_score = params.bootstrap.then(|| oob_accuracy(data, &grown)).flatten();
    Ok(ForestModel {
        trees: grown.into_iter().map(|(t, _)| t).collect(),
        n_estimators: params.n_estimators,
        seed: params.seed,
        oob_score,
    })
}

fn oob_accuracy(data: &Dataset, grown: &[(DecisionTree, Vec<bool>)]) -> Option<f64> {
    let mut scored = 0usize;
    let mut correct = 0usize;
    for i in 0..data.len() {
        let mut votes = vec![0.0; data.n_classes()];
        let mut any = false;
        for (tree, oob) in grown {
            if oob[i] {
                votes[tree.predict(data.row(i))] += 1.0;
                any = true;
            }
        }
        if any {
            scored += 1;
            correct += (argmax(&votes) == data.label(i)) as usize;
        }
    }
    (scored > 0).then(|| correct as f64 / scored as f64)
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::hoeffding::{HoeffdingConfig, HoeffdingTree};
use super::model::StreamModel;
use crate::features::FeatureVector;
use crate::seed::derive_seed;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnlineForestConfig {
    pub n_trees: usize,
    pub poisson_lambda: f64,
    pub seed: u64,
    /// Give every member each sample with weight 1 instead of a Poisson
    /// draw.
    pub unit_weights: bool,
    pub tree: HoeffdingConfig,
}

impl Default for OnlineForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 10,
            poisson_lambda: 6.0,
            seed: 0,
            unit_weights: false,
            tree: HoeffdingConfig::default(),
        }
    }
}

/// Online bagging over Hoeffding trees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnlineForest {
    pub config: OnlineForestConfig,
    trees: Vec<HoeffdingTree>,
    rngs: Vec<ChaCha8Rng>,
    n_classes: usize,
}

impl OnlineForest {
    pub fn new(n_classes: usize, config: OnlineForestConfig) -> Result<Self> {
        if config.n_trees == 0 {
            return Err(Error::InvalidParameter("forest needs at least one tree".into()));
        }
        if !(config.poisson_lambda > 0.0) {
            return Err(Error::InvalidParameter("Poisson lambda must be positive".into()));
        }
        config.tree.validate()?;
        Ok(Self {
            trees: (0..config.n_trees)
                .map(|_| HoeffdingTree::new(n_classes, config.tree))
                .collect(),
            rngs: (0..config.n_trees)
                .map(|t| ChaCha8Rng::seed_from_u64(derive_seed(config.seed, &format!("tree-{t}"))))
                .collect(),
            config,
            n_classes,
        })
    }

    pub fn trees(&self) -> &[HoeffdingTree] {
        &self.trees
    }

    /// Per-class counts of member votes; abstaining members do not vote.
    pub fn votes(&self, x: &FeatureVector) -> Vec<f64> {
        let mut votes = vec![0.0; self.n_classes];
        for t in &self.trees {
            if let Some(c) = t.predict(x) {
                votes[c] += 1.0;
            }
        }
        votes
    }
}

impl StreamModel for OnlineForest {
    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn learn_weighted(&mut self, x: &FeatureVector, y: usize, weight: f64) -> Result<()> {
        let poisson = Poisson::new(self.config.poisson_lambda)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        for (tree, rng) in self.trees.iter_mut().zip(&mut self.rngs) {
            let k = if self.config.unit_weights { 1.0 } else { poisson.sample(rng) };
            if k > 0.0 {
                tree.learn_weighted(x, y, k * weight)?;
            }
        }
        Ok(())
    }

    /// Vote shares of the non-abstaining members.
    fn predict_proba(&self, x: &FeatureVector) -> Option<Vec<f64>> {
        let votes = self.votes(x);
        let total: f64 = votes.iter().sum();
        (total > 0.0).then(|| votes.iter().map(|v| v / total).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn stream(n: usize, seed: u64) -> Vec<(FeatureVector, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let y = rng.random_range(0..2);
                let x = vec![rng.random::<f64>(), y as f64 + 0.1 * rng.random::<f64>()];
                (FeatureVector::from_dense(x), y)
            })
            .collect()
    }

    #[test]
    fn single_unit_weight_member_is_a_hoeffding_tree() {
        let cfg = OnlineForestConfig {
            n_trees: 1,
            unit_weights: true,
            ..OnlineForestConfig::default()
        };
        let mut f = OnlineForest::new(2, cfg).unwrap();
        let mut t = HoeffdingTree::new(2, HoeffdingConfig::default());
        for (x, y) in stream(800, 3) {
            assert_eq!(f.predict(&x), t.predict(&x));
            f.learn(&x, y).unwrap();
            t.learn(&x, y).unwrap();
        }
        assert_eq!(f.trees()[0], t);
    }

    #[test]
    fn same_seed_same_votes() {
        let run = || {
            let mut f = OnlineForest::new(2, OnlineForestConfig::default()).unwrap();
            stream(600, 8)
                .into_iter()
                .map(|(x, y)| {
                    let v = f.votes(&x);
                    f.learn(&x, y).unwrap();
                    v
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn rejects_bad_config() {
        let bad = OnlineForestConfig {
            n_trees: 0,
            ..OnlineForestConfig::default()
        };
        assert!(OnlineForest::new(2, bad).is_err());
    }
}

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::estimator::GaussianEstimator;
use super::model::{softmax, StreamModel};
use crate::analysis::{gaussian_log_density, VAR_FLOOR};
use crate::features::FeatureVector;
use crate::{Error, Result};

/// Incremental naive Bayes. Dense features get per-class Gaussian
/// likelihoods; sparse count features share a multinomial likelihood with
/// Laplace smoothing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementalNb {
    n_classes: usize,
    n_features: Option<usize>,
    dense_len: usize,
    class_weight: Vec<f64>,
    /// `[class][dense feature]`
    moments: Vec<Vec<GaussianEstimator>>,
    /// `[class]`: sparse feature -> summed counts
    sparse_counts: Vec<BTreeMap<u32, f64>>,
    sparse_totals: Vec<f64>,
    pub alpha: f64,
}

impl IncrementalNb {
    pub fn new(n_classes: usize) -> Self {
        Self {
            n_classes,
            n_features: None,
            dense_len: 0,
            class_weight: vec![0.0; n_classes],
            moments: vec![Vec::new(); n_classes],
            sparse_counts: vec![BTreeMap::new(); n_classes],
            sparse_totals: vec![0.0; n_classes],
            alpha: 1.0,
        }
    }

    pub fn class_weights(&self) -> &[f64] {
        &self.class_weight
    }

    /// Log prior plus log likelihood per class; `-inf` for unseen classes.
    pub fn joint_log_likelihood(&self, x: &FeatureVector) -> Vec<f64> {
        let total: f64 = self.class_weight.iter().sum();
        let sparse_dim = x.len().saturating_sub(self.dense_len) as f64;
        (0..self.n_classes)
            .map(|c| {
                let w = self.class_weight[c];
                if w <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                let mut s = (w / total).ln();
                for (j, est) in self.moments[c].iter().enumerate() {
                    let v = x.dense.get(j).copied().unwrap_or(0.0);
                    s += gaussian_log_density(v, est.mean, est.variance().max(VAR_FLOOR));
                }
                if sparse_dim > 0.0 {
                    let denom = self.sparse_totals[c] + self.alpha * sparse_dim;
                    for (k, &v) in &x.sparse {
                        let count = self.sparse_counts[c].get(k).copied().unwrap_or(0.0);
                        s += v * ((count + self.alpha) / denom).ln();
                    }
                }
                s
            })
            .collect()
    }
}

impl StreamModel for IncrementalNb {
    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn learn_weighted(&mut self, x: &FeatureVector, y: usize, weight: f64) -> Result<()> {
        if y >= self.n_classes {
            return Err(Error::InvalidParameter(format!("class {y} out of range")));
        }
        if !(weight > 0.0) || !x.is_finite() {
            return Err(Error::InvalidParameter("weights must be positive and features finite".into()));
        }
        match self.n_features {
            None => {
                self.n_features = Some(x.len());
                self.dense_len = x.dense.len();
                for m in &mut self.moments {
                    *m = vec![GaussianEstimator::default(); self.dense_len];
                }
            }
            Some(n) if n != x.len() || x.dense.len() != self.dense_len => {
                return Err(Error::FeatureMismatch {
                    expected: n,
                    actual: x.len(),
                })
            }
            Some(_) => {}
        }
        self.class_weight[y] += weight;
        for (est, &v) in self.moments[y].iter_mut().zip(&x.dense) {
            est.update(v, weight);
        }
        for (&k, &v) in &x.sparse {
            *self.sparse_counts[y].entry(k).or_insert(0.0) += weight * v;
            self.sparse_totals[y] += weight * v;
        }
        Ok(())
    }

    fn predict_proba(&self, x: &FeatureVector) -> Option<Vec<f64>> {
        self.n_features?;
        softmax(&self.joint_log_likelihood(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> FeatureVector {
        FeatureVector::from_dense(xs.to_vec())
    }

    #[test]
    fn abstains_before_learning() {
        assert!(IncrementalNb::new(2).predict(&v(&[0.0])).is_none());
    }

    #[test]
    fn symmetric_separable() {
        let mut nb = IncrementalNb::new(2);
        nb.learn(&v(&[0.0]), 0).unwrap();
        nb.learn(&v(&[1.0]), 1).unwrap();
        assert_eq!(nb.predict(&v(&[0.0])), Some(0));
        assert_eq!(nb.predict(&v(&[1.0])), Some(1));
    }

    #[test]
    fn single_class_dominates() {
        let mut nb = IncrementalNb::new(2);
        for x in [0.0, 5.0, -3.0] {
            nb.learn(&v(&[x]), 1).unwrap();
        }
        for x in [-100.0, 0.0, 100.0] {
            let p = nb.predict_proba(&v(&[x])).unwrap();
            assert_eq!(p, vec![0.0, 1.0]);
        }
    }

    #[test]
    fn hand_computed_density() {
        // class 0: {0, 2}: mean 1, var 1; class 1: {4}: var floored
        let mut nb = IncrementalNb::new(2);
        nb.learn(&v(&[0.0]), 0).unwrap();
        nb.learn(&v(&[2.0]), 0).unwrap();
        nb.learn(&v(&[4.0]), 1).unwrap();
        let jll = nb.joint_log_likelihood(&v(&[1.5]));
        let l0 = (2.0f64 / 3.0).ln() - 0.5 * (2.0 * std::f64::consts::PI).ln() - 0.125;
        let l1 = (1.0f64 / 3.0).ln() - 0.5 * (2.0 * std::f64::consts::PI * 1e-9).ln() - 6.25 / 2e-9;
        assert!((jll[0] - l0).abs() < 1e-12);
        assert!((jll[1] - l1).abs() / l1.abs() < 1e-12);
        let p = nb.predict_proba(&v(&[1.5])).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multinomial_block() {
        let sparse = |k: u32| {
            FeatureVector::new(vec![0.0], [(k, 2.0)].into_iter().collect(), 3)
        };
        let mut nb = IncrementalNb::new(2);
        nb.learn(&sparse(1), 0).unwrap();
        nb.learn(&sparse(2), 1).unwrap();
        assert_eq!(nb.predict(&sparse(1)), Some(0));
        assert_eq!(nb.predict(&sparse(2)), Some(1));
        // class 0 has counts {1: 2}; smoothed P(1|c0) = (2 + 1) / (2 + 2)
        let jll = nb.joint_log_likelihood(&sparse(1));
        let dense = gaussian_log_density(0.0, 0.0, VAR_FLOOR);
        assert!((jll[0] - (0.5f64.ln() + dense + 2.0 * 0.75f64.ln())).abs() < 1e-12);
    }
}

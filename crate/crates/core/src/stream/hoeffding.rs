use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::estimator::GaussianEstimator;
use super::model::StreamModel;
use crate::analysis::{argmax, gini, DecisionTree, SplitNode, TreeNode};
use crate::features::{FeatureAccess, FeatureVector};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoeffdingConfig {
    /// Weight a leaf must gather between split attempts.
    pub grace_period: f64,
    pub split_confidence: f64,
    pub tie_threshold: f64,
    /// Smallest share of a leaf's weight each branch must receive.
    pub min_branch_fraction: f64,
    pub max_depth: Option<usize>,
}

impl Default for HoeffdingConfig {
    fn default() -> Self {
        Self {
            grace_period: 200.0,
            split_confidence: 1e-7,
            tie_threshold: 0.05,
            min_branch_fraction: 0.01,
            max_depth: None,
        }
    }
}

impl HoeffdingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.split_confidence > 0.0 && self.split_confidence < 1.0) {
            return Err(Error::InvalidParameter("split confidence must lie in (0, 1)".into()));
        }
        if !(self.grace_period >= 1.0) {
            return Err(Error::InvalidParameter("grace period must be at least 1".into()));
        }
        Ok(())
    }
}

/// `sqrt(R^2 ln(1/delta) / (2n))`.
pub fn hoeffding_bound(range: f64, delta: f64, n: f64) -> f64 {
    (range * range * (1.0 / delta).ln() / (2.0 * n)).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Leaf {
    /// Estimated mass inherited at creation plus everything observed since.
    class_counts: Vec<f64>,
    observed: Vec<f64>,
    weight_at_last_attempt: f64,
    depth: usize,
    /// `[feature][class]` for the dense columns.
    dense: Vec<Vec<GaussianEstimator>>,
    /// Sparse columns, nonzero values only; zeros are implied.
    sparse: BTreeMap<u32, Vec<GaussianEstimator>>,
}

impl Leaf {
    fn new(class_counts: Vec<f64>, depth: usize, dense_len: usize) -> Self {
        let k = class_counts.len();
        Self {
            observed: vec![0.0; k],
            class_counts,
            weight_at_last_attempt: 0.0,
            depth,
            dense: vec![vec![GaussianEstimator::default(); k]; dense_len],
            sparse: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node {
    Leaf(Leaf),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        class_counts: Vec<f64>,
    },
}

struct SplitCandidate {
    feature: usize,
    threshold: f64,
    merit: f64,
    left: Vec<f64>,
    right: Vec<f64>,
}

/// Very fast decision tree over numeric features. Leaves keep per-class
/// Gaussian summaries; candidate thresholds are midpoints between class
/// means and branch masses are estimated from the Gaussian CDFs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoeffdingTree {
    pub config: HoeffdingConfig,
    n_classes: usize,
    n_features: Option<usize>,
    dense_len: usize,
    nodes: Vec<Node>,
    n_splits: usize,
}

impl HoeffdingTree {
    pub fn new(n_classes: usize, config: HoeffdingConfig) -> Self {
        Self {
            config,
            n_classes,
            n_features: None,
            dense_len: 0,
            nodes: vec![Node::Leaf(Leaf::new(vec![0.0; n_classes], 0, 0))],
            n_splits: 0,
        }
    }

    pub fn n_splits(&self) -> usize {
        self.n_splits
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Feature tested at the root, if the root has split.
    pub fn root_feature(&self) -> Option<usize> {
        match &self.nodes[0] {
            Node::Split { feature, .. } => Some(*feature),
            Node::Leaf(_) => None,
        }
    }

    fn range(&self) -> f64 {
        (self.n_classes as f64).log2()
    }

    fn route<X: FeatureAccess + ?Sized>(&self, x: &X) -> (usize, Option<usize>) {
        let mut id = 0;
        let mut parent = None;
        while let Node::Split {
            feature,
            threshold,
            left,
            right,
            ..
        } = &self.nodes[id]
        {
            parent = Some(id);
            id = if x.value(*feature) <= *threshold { *left } else { *right };
        }
        (id, parent)
    }

    fn counts(&self, id: usize) -> &[f64] {
        match &self.nodes[id] {
            Node::Leaf(l) => &l.class_counts,
            Node::Split { class_counts, .. } => class_counts,
        }
    }

    fn attempt_split(&mut self, id: usize) {
        let Node::Leaf(leaf) = &self.nodes[id] else {
            return;
        };
        if self.config.max_depth.is_some_and(|m| leaf.depth >= m) {
            return;
        }
        if leaf.observed.iter().filter(|&&w| w > 0.0).count() < 2 {
            return;
        }
        let total: f64 = leaf.observed.iter().sum();
        let parent_gini = gini(&leaf.observed);
        let min_branch = self.config.min_branch_fraction * total;

        let mut per_feature: Vec<SplitCandidate> = Vec::new();
        for (j, ests) in leaf.dense.iter().enumerate() {
            if let Some(c) = best_split(j, ests, total, parent_gini, min_branch) {
                per_feature.push(c);
            }
        }
        for (&k, ests) in &leaf.sparse {
            let merged: Vec<GaussianEstimator> = ests
                .iter()
                .zip(&leaf.observed)
                .map(|(e, &w)| e.with_zeros((w - e.weight).max(0.0)))
                .collect();
            if let Some(c) = best_split(k as usize, &merged, total, parent_gini, min_branch) {
                per_feature.push(c);
            }
        }
        // best merit, lowest feature on ties; the runner-up is at least the
        // merit of not splitting (0)
        let Some(best_idx) = (0..per_feature.len()).reduce(|a, b| {
            if per_feature[b].merit > per_feature[a].merit {
                b
            } else {
                a
            }
        }) else {
            return;
        };
        let second = per_feature
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != best_idx)
            .map(|(_, c)| c.merit)
            .fold(0.0, f64::max);
        let best = &per_feature[best_idx];
        let eps = hoeffding_bound(self.range(), self.config.split_confidence, total);
        if best.merit <= 0.0 || !(best.merit - second > eps || eps < self.config.tie_threshold) {
            return;
        }

        let depth = leaf.depth + 1;
        let class_counts = leaf.class_counts.clone();
        let best = per_feature.swap_remove(best_idx);
        let left = self.nodes.len();
        self.nodes.push(Node::Leaf(Leaf::new(best.left, depth, self.dense_len)));
        self.nodes.push(Node::Leaf(Leaf::new(best.right, depth, self.dense_len)));
        self.nodes[id] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right: left + 1,
            class_counts,
        };
        self.n_splits += 1;
        log::trace!(
            "split node {id} on feature {} at {} (merit {:.4})",
            best.feature,
            best.threshold,
            best.merit
        );
    }

    /// Frozen copy as a batch decision tree. Empty leaves take their
    /// parent's majority class.
    pub fn to_decision_tree(&self) -> DecisionTree {
        fn build(t: &HoeffdingTree, id: usize, fallback: usize) -> TreeNode {
            let counts = t.counts(id).to_vec();
            let total: f64 = counts.iter().sum();
            let predicted_class = if total > 0.0 { argmax(&counts) } else { fallback };
            let split = match &t.nodes[id] {
                Node::Leaf(_) => None,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => Some(SplitNode {
                    feature: *feature,
                    threshold: *threshold,
                    left: Box::new(build(t, *left, predicted_class)),
                    right: Box::new(build(t, *right, predicted_class)),
                }),
            };
            TreeNode {
                split,
                gini: gini(&counts),
                class_counts: counts,
                predicted_class,
            }
        }
        DecisionTree {
            root: build(self, 0, 0),
            n_features: self.n_features.unwrap_or(0),
            n_classes: self.n_classes,
        }
    }
}

fn best_split(
    feature: usize,
    ests: &[GaussianEstimator],
    total: f64,
    parent_gini: f64,
    min_branch: f64,
) -> Option<SplitCandidate> {
    let mut means: Vec<f64> = ests.iter().filter(|e| e.weight > 0.0).map(|e| e.mean).collect();
    means.sort_by(f64::total_cmp);
    means.dedup();
    let mut best: Option<SplitCandidate> = None;
    for pair in means.windows(2) {
        let threshold = pair[0] + (pair[1] - pair[0]) / 2.0;
        let left: Vec<f64> = ests.iter().map(|e| e.weight * e.cdf(threshold)).collect();
        let right: Vec<f64> = ests.iter().zip(&left).map(|(e, l)| e.weight - l).collect();
        let wl: f64 = left.iter().sum();
        let wr: f64 = right.iter().sum();
        if wl < min_branch || wr < min_branch {
            continue;
        }
        let merit = parent_gini - (wl * gini(&left) + wr * gini(&right)) / total;
        if best.as_ref().is_none_or(|b| merit > b.merit) {
            best = Some(SplitCandidate {
                feature,
                threshold,
                merit,
                left,
                right,
            });
        }
    }
    best
}

impl StreamModel for HoeffdingTree {
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
                if let Node::Leaf(l) = &mut self.nodes[0] {
                    l.dense = vec![vec![GaussianEstimator::default(); self.n_classes]; self.dense_len];
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

        let mut id = 0;
        loop {
            match &mut self.nodes[id] {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    class_counts,
                } => {
                    class_counts[y] += weight;
                    id = if x.get(*feature) <= *threshold { *left } else { *right };
                }
                Node::Leaf(leaf) => {
                    leaf.class_counts[y] += weight;
                    leaf.observed[y] += weight;
                    for (ests, &v) in leaf.dense.iter_mut().zip(&x.dense) {
                        ests[y].update(v, weight);
                    }
                    let k = self.n_classes;
                    for (&j, &v) in &x.sparse {
                        if v != 0.0 {
                            leaf.sparse
                                .entry(j)
                                .or_insert_with(|| vec![GaussianEstimator::default(); k])[y]
                                .update(v, weight);
                        }
                    }
                    let seen: f64 = leaf.observed.iter().sum();
                    if seen - leaf.weight_at_last_attempt >= self.config.grace_period {
                        leaf.weight_at_last_attempt = seen;
                        self.attempt_split(id);
                    }
                    return Ok(());
                }
            }
        }
    }

    fn predict_proba(&self, x: &FeatureVector) -> Option<Vec<f64>> {
        self.n_features?;
        let (leaf, parent) = self.route(x);
        let mut counts = self.counts(leaf);
        if counts.iter().sum::<f64>() <= 0.0 {
            counts = self.counts(parent?);
        }
        let total: f64 = counts.iter().sum();
        (total > 0.0).then(|| counts.iter().map(|c| c / total).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn label_copy(n: usize, seed: u64) -> Vec<(FeatureVector, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let y = rng.random_range(0..2);
                let x = vec![y as f64, rng.random::<f64>(), rng.random::<f64>()];
                (FeatureVector::from_dense(x), y)
            })
            .collect()
    }

    #[test]
    fn bound_value() {
        let eps = hoeffding_bound(1.0, 1e-7, 200.0);
        assert!((eps - (1e7f64.ln() / 400.0).sqrt()).abs() < 1e-15);
        assert!((eps - 0.2007).abs() < 1e-4);
    }

    #[test]
    fn grace_period_and_label_copy() {
        let mut t = HoeffdingTree::new(2, HoeffdingConfig::default());
        assert!(t.predict(&FeatureVector::from_dense(vec![0.0; 3])).is_none());
        let stream = label_copy(1000, 1);
        for (i, (x, y)) in stream.iter().enumerate() {
            t.learn(x, *y).unwrap();
            if i + 1 < 200 {
                assert_eq!(t.n_splits(), 0);
            }
        }
        assert_eq!(t.root_feature(), Some(0));
        for (x, y) in label_copy(200, 2) {
            assert_eq!(t.predict(&x), Some(y));
        }
    }

    #[test]
    fn snapshot_agrees() {
        let mut t = HoeffdingTree::new(2, HoeffdingConfig::default());
        for (x, y) in label_copy(600, 4) {
            t.learn(&x, y).unwrap();
        }
        let snap = t.to_decision_tree();
        assert_eq!(snap.node_count(), t.node_count());
        for (x, _) in label_copy(100, 5) {
            assert_eq!(Some(snap.predict(&x)), t.predict(&x));
        }
    }

    #[test]
    fn splits_on_sparse_presence() {
        let mut t = HoeffdingTree::new(2, HoeffdingConfig::default());
        for i in 0..400 {
            let y = i % 2;
            let sparse = if y == 1 { [(3u32, 1.0)].into_iter().collect() } else { BTreeMap::new() };
            t.learn(&FeatureVector::new(vec![0.5], sparse, 5), y).unwrap();
        }
        assert_eq!(t.root_feature(), Some(3));
    }

    #[test]
    fn rejects_shape_change() {
        let mut t = HoeffdingTree::new(2, HoeffdingConfig::default());
        t.learn(&FeatureVector::from_dense(vec![1.0]), 0).unwrap();
        assert!(t.learn(&FeatureVector::from_dense(vec![1.0, 2.0]), 0).is_err());
    }
}

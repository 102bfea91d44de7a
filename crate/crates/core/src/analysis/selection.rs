use serde::{Deserialize, Serialize};

use super::forest::ForestModel;
use super::tree::{DecisionTree, TreeNode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Importances {
    /// Normalized to sum 1 unless `all_zero`.
    pub values: Vec<f64>,
    /// No tree in the forest has a split; every value is 0.
    pub all_zero: bool,
}

/// Weighted impurity decrease per feature for one tree (unnormalized).
pub fn tree_importance(tree: &DecisionTree) -> Vec<f64> {
    fn walk(node: &TreeNode, total: f64, out: &mut [f64]) {
        if let Some(s) = &node.split {
            let decrease = node.weight() * node.gini
                - s.left.weight() * s.left.gini
                - s.right.weight() * s.right.gini;
            out[s.feature] += decrease / total;
            walk(&s.left, total, out);
            walk(&s.right, total, out);
        }
    }
    let mut out = vec![0.0; tree.n_features];
    let total = tree.root.weight();
    if total > 0.0 {
        walk(&tree.root, total, &mut out);
    }
    out
}

/// Mean decrease in impurity, normalized per tree, averaged over the
/// forest and normalized again.
pub fn feature_importance(forest: &ForestModel) -> Importances {
    let d = forest.trees.first().map_or(0, |t| t.n_features);
    let mut acc = vec![0.0; d];
    for tree in &forest.trees {
        let imp = tree_importance(tree);
        let sum: f64 = imp.iter().sum();
        if sum > 0.0 {
            for (a, v) in acc.iter_mut().zip(imp) {
                *a += v / sum;
            }
        }
    }
    let sum: f64 = acc.iter().sum();
    if sum > 0.0 {
        acc.iter_mut().for_each(|v| *v /= sum);
        Importances {
            values: acc,
            all_zero: false,
        }
    } else {
        log::warn!("forest has no splits; all feature importances are zero");
        Importances {
            values: vec![0.0; d],
            all_zero: true,
        }
    }
}

/// Keeps feature `i` iff `importances[i] >= threshold`; the default
/// threshold is the mean importance.
pub fn select_features(importances: &[f64], threshold: Option<f64>) -> Vec<bool> {
    let threshold = threshold.unwrap_or_else(|| {
        if importances.is_empty() {
            0.0
        } else {
            importances.iter().sum::<f64>() / importances.len() as f64
        }
    });
    importances.iter().map(|&v| v >= threshold).collect()
}

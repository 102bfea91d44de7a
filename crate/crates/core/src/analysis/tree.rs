//! Binary decision tree shared by the batch CART learner, the forest and
//! snapshots of Hoeffding trees.

use serde::{Deserialize, Serialize};

use crate::features::FeatureAccess;
use crate::{Error, Result};

/// Samples with `x[feature] <= threshold` go left, the rest go right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitNode {
    pub feature: usize,
    pub threshold: f64,
    pub left: Box<TreeNode>,
    pub right: Box<TreeNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    /// `None` for leaves.
    pub split: Option<SplitNode>,
    /// Per-class (weighted) sample counts reaching this node.
    pub class_counts: Vec<f64>,
    pub gini: f64,
    pub predicted_class: usize,
}

impl TreeNode {
    pub fn leaf(class_counts: Vec<f64>) -> Self {
        let gini = gini(&class_counts);
        let predicted_class = argmax(&class_counts);
        Self {
            split: None,
            class_counts,
            gini,
            predicted_class,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.split.is_none()
    }

    pub fn weight(&self) -> f64 {
        self.class_counts.iter().sum()
    }

    pub fn node_count(&self) -> usize {
        match &self.split {
            None => 1,
            Some(s) => 1 + s.left.node_count() + s.right.node_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match &self.split {
            None => 0,
            Some(s) => 1 + s.left.depth().max(s.right.depth()),
        }
    }
}

/// Gini impurity `1 - sum p_c^2`; 0 for an empty node.
pub fn gini(counts: &[f64]) -> f64 {
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    1.0 - counts.iter().map(|c| (c / total).powi(2)).sum::<f64>()
}

/// Index of the largest value, lowest index on ties.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub root: TreeNode,
    pub n_features: usize,
    pub n_classes: usize,
}

/// Leaf reached by a sample; `node_id` is the pre-order index.
#[derive(Debug, Clone, Copy)]
pub struct LeafHit<'a> {
    pub node: &'a TreeNode,
    pub node_id: usize,
}

impl DecisionTree {
    pub fn check_features<X: FeatureAccess + ?Sized>(&self, x: &X) -> Result<()> {
        if x.n_features() != self.n_features {
            return Err(Error::FeatureMismatch {
                expected: self.n_features,
                actual: x.n_features(),
            });
        }
        Ok(())
    }

    pub fn leaf<X: FeatureAccess + ?Sized>(&self, x: &X) -> LeafHit<'_> {
        let mut node = &self.root;
        let mut id = 0;
        while let Some(s) = &node.split {
            if x.value(s.feature) <= s.threshold {
                id += 1;
                node = &s.left;
            } else {
                id += 1 + s.left.node_count();
                node = &s.right;
            }
        }
        LeafHit { node, node_id: id }
    }

    fn walk<X: FeatureAccess + ?Sized>(&self, x: &X) -> &TreeNode {
        let mut node = &self.root;
        while let Some(s) = &node.split {
            node = if x.value(s.feature) <= s.threshold {
                &s.left
            } else {
                &s.right
            };
        }
        node
    }

    pub fn predict<X: FeatureAccess + ?Sized>(&self, x: &X) -> usize {
        self.walk(x).predicted_class
    }

    /// `None` when the reached leaf has no training mass.
    pub fn predict_proba<X: FeatureAccess + ?Sized>(&self, x: &X) -> Option<Vec<f64>> {
        let leaf = self.walk(x);
        let total = leaf.weight();
        (total > 0.0).then(|| leaf.class_counts.iter().map(|c| c / total).collect())
    }

    pub fn node_count(&self) -> usize {
        self.root.node_count()
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    /// Nodes in pre-order, paired with their parent's pre-order id.
    pub fn preorder(&self) -> Vec<(&TreeNode, Option<usize>)> {
        let mut out = Vec::with_capacity(self.node_count());
        let mut stack: Vec<(&TreeNode, Option<usize>)> = vec![(&self.root, None)];
        while let Some((node, parent)) = stack.pop() {
            let id = out.len();
            out.push((node, parent));
            if let Some(s) = &node.split {
                stack.push((&s.right, Some(id)));
                stack.push((&s.left, Some(id)));
            }
        }
        out
    }
}

use serde::{Deserialize, Serialize};

use crate::analysis::{argmax, DecisionTree};
use crate::features::{FeatureAccess, FeatureName, FeatureSchema, TextBlock};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    /// `x <= threshold`, displayed as `<`.
    Below,
    /// `x > threshold`.
    Above,
}

impl Comparison {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Below => "<",
            Comparison::Above => ">",
        }
    }

    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Comparison::Below => value <= threshold,
            Comparison::Above => value > threshold,
        }
    }
}

/// What a predicate's feature is, as far as rendering is concerned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PredicateTarget {
    Numeric,
    /// Count of an n-gram in inserted (`deleted == false`) or deleted text.
    Ngram { term: String, deleted: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predicate {
    pub feature: usize,
    pub name: String,
    pub target: PredicateTarget,
    pub comparison: Comparison,
    pub threshold: f64,
}

impl Predicate {
    pub fn holds<X: FeatureAccess + ?Sized>(&self, x: &X) -> bool {
        self.comparison.holds(x.value(self.feature), self.threshold)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub sample_id: String,
    pub predicates: Vec<Predicate>,
    pub predicted_class: usize,
    pub tree_id: usize,
    /// Pre-order ids of the visited nodes, root first, leaf last.
    pub node_ids: Vec<usize>,
    /// Gini impurity of each visited node.
    pub ginis: Vec<f64>,
}

impl Explanation {
    pub fn leaf_id(&self) -> usize {
        *self.node_ids.last().expect("a path always reaches a leaf")
    }

    /// All predicates hold for `x`.
    pub fn holds<X: FeatureAccess + ?Sized>(&self, x: &X) -> bool {
        self.predicates.iter().all(|p| p.holds(x))
    }
}

fn predicate(schema: &FeatureSchema, feature: usize, comparison: Comparison, threshold: f64) -> Predicate {
    let name = schema.name(feature);
    let target = match &name {
        FeatureName::Ngram { block, term, .. } => PredicateTarget::Ngram {
            term: term.to_string(),
            deleted: *block == TextBlock::Deleted,
        },
        _ => PredicateTarget::Numeric,
    };
    Predicate {
        feature,
        name: name.label(),
        target,
        comparison,
        threshold,
    }
}

/// The predicates met by `x` from the root of `tree` to its leaf.
pub fn decision_path<X: FeatureAccess + ?Sized>(
    tree: &DecisionTree,
    x: &X,
    schema: &FeatureSchema,
    sample_id: &str,
    tree_id: usize,
) -> Result<Explanation> {
    tree.check_features(x)?;
    let mut node = &tree.root;
    let mut id = 0;
    let mut predicates = Vec::new();
    let mut node_ids = vec![0];
    let mut ginis = vec![node.gini];
    while let Some(s) = &node.split {
        let v = x.value(s.feature);
        let comparison = if v <= s.threshold {
            id += 1;
            node = &s.left;
            Comparison::Below
        } else {
            id += 1 + s.left.node_count();
            node = &s.right;
            Comparison::Above
        };
        predicates.push(predicate(schema, s.feature, comparison, s.threshold));
        node_ids.push(id);
        ginis.push(node.gini);
    }
    Ok(Explanation {
        sample_id: sample_id.to_string(),
        predicates,
        predicted_class: node.predicted_class,
        tree_id,
        node_ids,
        ginis,
    })
}

/// Among the trees whose prediction matches the ensemble's majority vote,
/// the path with the fewest predicates (lowest tree id on ties). Trees
/// without a feature space (never trained) abstain.
pub fn shortest_ensemble_path<X: FeatureAccess + ?Sized>(
    trees: &[DecisionTree],
    x: &X,
    schema: &FeatureSchema,
    sample_id: &str,
) -> Result<Explanation> {
    let voting: Vec<usize> = (0..trees.len()).filter(|&t| trees[t].n_features > 0).collect();
    if voting.is_empty() {
        return Err(Error::NotTrained);
    }
    let mut paths = Vec::with_capacity(voting.len());
    for &t in &voting {
        paths.push(decision_path(&trees[t], x, schema, sample_id, t)?);
    }
    let mut votes = vec![0.0; trees[voting[0]].n_classes.max(2)];
    for p in &paths {
        votes[p.predicted_class] += 1.0;
    }
    let majority = argmax(&votes);
    paths
        .into_iter()
        .filter(|p| p.predicted_class == majority)
        .min_by_key(|p| (p.predicates.len(), p.tree_id))
        .ok_or(Error::NotTrained)
}

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::tree::{argmax, gini, DecisionTree, SplitNode, TreeNode};
use crate::{Error, Result};

/// Candidate features examined at each split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    All,
    /// `max(1, floor(sqrt(d)))` features drawn per split.
    Sqrt,
}

impl MaxFeatures {
    pub fn resolve(self, d: usize) -> usize {
        match self {
            MaxFeatures::All => d,
            MaxFeatures::Sqrt => ((d as f64).sqrt().floor() as usize).clamp(1, d.max(1)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartParams {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub max_features: MaxFeatures,
}

impl Default for CartParams {
    fn default() -> Self {
        Self {
            max_depth: None,
            min_samples_split: 2,
            max_features: MaxFeatures::All,
        }
    }
}

/// Greedy gini CART.
///
/// Thresholds are midpoints between consecutive distinct values. Among
/// equal gains the lowest feature index wins, then the lowest threshold.
/// Any impure node with a usable threshold is split, even at zero gain.
pub fn train_cart(data: &Dataset, params: &CartParams) -> Result<DecisionTree> {
    if data.is_empty() {
        return Err(Error::EmptyInput("CART training set"));
    }
    if data.n_features() == 0 {
        return Err(Error::InvalidParameter("CART needs at least one feature".into()));
    }
    let weights = vec![1.0; data.len()];
    let idx: Vec<usize> = (0..data.len()).collect();
    Ok(grow_tree(data, &idx, &weights, params, None::<&mut rand::rngs::ThreadRng>))
}

/// Grows a tree over `indices` with per-sample `weights` (bootstrap
/// multiplicities). With `rng`, `max_features` columns are drawn per split.
pub(crate) fn grow_tree<R: Rng>(
    data: &Dataset,
    indices: &[usize],
    weights: &[f64],
    params: &CartParams,
    mut rng: Option<&mut R>,
) -> DecisionTree {
    let root = build(data, indices.to_vec(), weights, params, 0, &mut rng);
    DecisionTree {
        root,
        n_features: data.n_features(),
        n_classes: data.n_classes(),
    }
}

fn class_counts(data: &Dataset, idx: &[usize], weights: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; data.n_classes()];
    for &i in idx {
        c[data.label(i)] += weights[i];
    }
    c
}

struct Candidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

fn build<R: Rng>(
    data: &Dataset,
    idx: Vec<usize>,
    weights: &[f64],
    params: &CartParams,
    depth: usize,
    rng: &mut Option<&mut R>,
) -> TreeNode {
    let counts = class_counts(data, &idx, weights);
    let node_gini = gini(&counts);
    let n_samples: f64 = counts.iter().sum();
    let stop = node_gini <= 0.0
        || params.max_depth.is_some_and(|m| depth >= m)
        || n_samples < params.min_samples_split as f64;
    if stop {
        return TreeNode::leaf(counts);
    }

    let d = data.n_features();
    let features: Vec<usize> = match rng.as_deref_mut() {
        Some(r) => {
            let m = params.max_features.resolve(d);
            let mut f = sample(r, d, m).into_vec();
            f.sort_unstable();
            f
        }
        None => (0..params.max_features.resolve(d)).collect(),
    };

    let mut best: Option<Candidate> = None;
    for &f in &features {
        if let Some(c) = best_threshold(data, &idx, weights, f, &counts, node_gini) {
            if best.as_ref().is_none_or(|b| c.gain > b.gain) {
                best = Some(c);
            }
        }
    }
    let Some(best) = best else {
        return TreeNode::leaf(counts);
    };

    let (left, right): (Vec<usize>, Vec<usize>) = idx
        .into_iter()
        .partition(|&i| data.row(i)[best.feature] <= best.threshold);
    let left = build(data, left, weights, params, depth + 1, rng);
    let right = build(data, right, weights, params, depth + 1, rng);
    TreeNode {
        split: Some(SplitNode {
            feature: best.feature,
            threshold: best.threshold,
            left: Box::new(left),
            right: Box::new(right),
        }),
        predicted_class: argmax(&counts),
        class_counts: counts,
        gini: node_gini,
    }
}

fn best_threshold(
    data: &Dataset,
    idx: &[usize],
    weights: &[f64],
    feature: usize,
    parent: &[f64],
    parent_gini: f64,
) -> Option<Candidate> {
    let mut points: Vec<(f64, usize, f64)> = idx
        .iter()
        .map(|&i| (data.row(i)[feature], data.label(i), weights[i]))
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = parent.iter().sum();
    let mut left = vec![0.0; parent.len()];
    let mut best: Option<Candidate> = None;
    for k in 0..points.len().saturating_sub(1) {
        let (v, y, w) = points[k];
        left[y] += w;
        let next = points[k + 1].0;
        if next <= v {
            continue;
        }
        let mut threshold = v + (next - v) / 2.0;
        if threshold >= next {
            threshold = v;
        }
        let right: Vec<f64> = parent.iter().zip(&left).map(|(p, l)| p - l).collect();
        let wl: f64 = left.iter().sum();
        let wr = total - wl;
        let gain = parent_gini - (wl * gini(&left) + wr * gini(&right)) / total;
        if best.as_ref().is_none_or(|b| gain > b.gain) {
            best = Some(Candidate {
                feature,
                threshold,
                gain,
            });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(rows: &[&[f64]], labels: &[usize]) -> Dataset {
        Dataset::new(rows.iter().map(|r| r.to_vec()).collect(), labels.to_vec(), 2).unwrap()
    }

    fn accuracy(t: &DecisionTree, d: &Dataset) -> f64 {
        (0..d.len()).filter(|&i| t.predict(d.row(i)) == d.label(i)).count() as f64 / d.len() as f64
    }

    #[test]
    fn pure_data_is_single_leaf() {
        let d = ds(&[&[1.0], &[2.0], &[3.0]], &[1, 1, 1]);
        let t = train_cart(&d, &CartParams::default()).unwrap();
        assert!(t.root.is_leaf());
        assert_eq!(t.root.predicted_class, 1);
    }

    #[test]
    fn separable_one_dimensional() {
        let d = ds(&[&[0.0], &[1.0], &[0.0], &[1.0]], &[0, 1, 0, 1]);
        let t = train_cart(&d, &CartParams::default()).unwrap();
        assert_eq!(t.depth(), 1);
        let s = t.root.split.as_ref().unwrap();
        assert!(s.threshold > 0.0 && s.threshold < 1.0);
        assert_eq!(accuracy(&t, &d), 1.0);
    }

    #[test]
    fn xor_needs_depth_two() {
        let d = ds(&[&[0.0, 0.0], &[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]], &[0, 1, 1, 0]);
        let params = CartParams {
            max_depth: Some(2),
            ..CartParams::default()
        };
        let t = train_cart(&d, &params).unwrap();
        assert_eq!(accuracy(&t, &d), 1.0);
        // zero-gain tie at the root resolves to feature 0
        assert_eq!(t.root.split.as_ref().unwrap().feature, 0);
        let shallow = train_cart(
            &d,
            &CartParams {
                max_depth: Some(1),
                ..params
            },
        )
        .unwrap();
        assert_eq!(accuracy(&shallow, &d), 0.5);
    }

    #[test]
    fn empty_dataset_is_rejected() {
        let d = Dataset::new(vec![], vec![], 2).unwrap();
        assert!(train_cart(&d, &CartParams::default()).is_err());
    }

    #[test]
    fn min_samples_split_stops_growth() {
        let d = ds(&[&[0.0], &[1.0]], &[0, 1]);
        let t = train_cart(
            &d,
            &CartParams {
                min_samples_split: 3,
                ..CartParams::default()
            },
        )
        .unwrap();
        assert!(t.root.is_leaf());
    }
}

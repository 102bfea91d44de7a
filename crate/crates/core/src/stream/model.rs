use crate::analysis::argmax;
use crate::features::FeatureVector;
use crate::Result;

/// Incremental classifier fed one sample at a time.
pub trait StreamModel {
    fn n_classes(&self) -> usize;

    /// Learns one sample with a positive weight.
    fn learn_weighted(&mut self, x: &FeatureVector, y: usize, weight: f64) -> Result<()>;

    fn learn(&mut self, x: &FeatureVector, y: usize) -> Result<()> {
        self.learn_weighted(x, y, 1.0)
    }

    /// Class probabilities summing to 1, or `None` while the model has
    /// nothing to go on.
    fn predict_proba(&self, x: &FeatureVector) -> Option<Vec<f64>>;

    /// Most probable class, lower id on ties; `None` means abstention.
    fn predict(&self, x: &FeatureVector) -> Option<usize> {
        self.predict_proba(x).map(|p| argmax(&p))
    }
}

/// Normalizes log scores into probabilities; `-inf` entries get 0.
pub(crate) fn softmax(log_scores: &[f64]) -> Option<Vec<f64>> {
    let max = log_scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return None;
    }
    let exp: Vec<f64> = log_scores.iter().map(|&s| (s - max).exp()).collect();
    let sum: f64 = exp.iter().sum();
    Some(exp.into_iter().map(|e| e / sum).collect())
}

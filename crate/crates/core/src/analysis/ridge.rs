use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::{Error, Result, REVERT};

/// Ridge regression on +1/-1 targets used as a classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RidgeModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub alpha: f64,
}

impl RidgeModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.intercept
    }

    /// Positive scores map to the revert class; zero stays non-revert.
    pub fn predict(&self, x: &[f64]) -> usize {
        if self.decision(x) > 0.0 {
            REVERT
        } else {
            1 - REVERT
        }
    }
}

/// Solves `(Xc'Xc + alpha I) w = Xc'yc` on centered data; the intercept is
/// left unregularized.
pub fn train_ridge(data: &Dataset, alpha: f64) -> Result<RidgeModel> {
    if data.is_empty() {
        return Err(Error::EmptyInput("ridge training set"));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("ridge alpha must be > 0, got {alpha}")));
    }
    if data.n_classes() != 2 {
        return Err(Error::InvalidParameter("ridge classifier is binary".into()));
    }
    if data.class_counts().contains(&0) {
        return Err(Error::InvalidParameter("ridge classifier needs both classes".into()));
    }
    let n = data.len();
    let d = data.n_features();
    let y: Vec<f64> = data
        .labels()
        .iter()
        .map(|&l| if l == REVERT { 1.0 } else { -1.0 })
        .collect();
    let x_mean: Vec<f64> = (0..d)
        .map(|j| data.rows().iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let y_mean = y.iter().sum::<f64>() / n as f64;

    let xc = DMatrix::from_fn(n, d, |i, j| data.row(i)[j] - x_mean[j]);
    let yc = DVector::from_iterator(n, y.iter().map(|v| v - y_mean));
    let gram = xc.transpose() * &xc;
    let rhs = xc.transpose() * yc;

    let mut system = gram.clone() + DMatrix::identity(d, d) * alpha;
    let chol = match system.clone().cholesky() {
        Some(c) => c,
        None => {
            system += DMatrix::identity(d, d) * 1e-12;
            system.cholesky().ok_or(Error::Singular)?
        }
    };
    let w = chol.solve(&rhs);
    let weights: Vec<f64> = w.iter().copied().collect();
    let intercept = y_mean - weights.iter().zip(&x_mean).map(|(a, b)| a * b).sum::<f64>();
    Ok(RidgeModel {
        weights,
        intercept,
        alpha,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RidgeLearner {
    pub alpha: f64,
}

impl Default for RidgeLearner {
    fn default() -> Self {
        Self { alpha: 1.0 }
    }
}

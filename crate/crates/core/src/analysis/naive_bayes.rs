use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::tree::argmax;
use crate::{Error, Result};

/// Lower bound applied to every per-class variance.
pub const VAR_FLOOR: f64 = 1e-9;

pub fn gaussian_log_density(x: f64, mean: f64, var: f64) -> f64 {
    -0.5 * (2.0 * std::f64::consts::PI * var).ln() - (x - mean).powi(2) / (2.0 * var)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ClassMoments {
    count: usize,
    means: Vec<f64>,
    vars: Vec<f64>,
}

/// Batch Gaussian naive Bayes with population variances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNb {
    classes: Vec<Option<ClassMoments>>,
    total: usize,
}

impl GaussianNb {
    pub fn fit(data: &Dataset) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyInput("naive Bayes training set"));
        }
        let d = data.n_features();
        let mut classes = Vec::with_capacity(data.n_classes());
        for c in 0..data.n_classes() {
            let rows: Vec<&[f64]> = (0..data.len())
                .filter(|&i| data.label(i) == c)
                .map(|i| data.row(i))
                .collect();
            if rows.is_empty() {
                classes.push(None);
                continue;
            }
            let n = rows.len() as f64;
            let means: Vec<f64> = (0..d).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n).collect();
            let vars = (0..d)
                .map(|j| {
                    let v = rows.iter().map(|r| (r[j] - means[j]).powi(2)).sum::<f64>() / n;
                    v.max(VAR_FLOOR)
                })
                .collect();
            classes.push(Some(ClassMoments {
                count: rows.len(),
                means,
                vars,
            }));
        }
        Ok(Self {
            classes,
            total: data.len(),
        })
    }

    /// Log prior plus log likelihood per class; `None` for unseen classes.
    pub fn joint_log_likelihood(&self, x: &[f64]) -> Vec<Option<f64>> {
        self.classes
            .iter()
            .map(|c| {
                c.as_ref().map(|m| {
                    (m.count as f64 / self.total as f64).ln()
                        + x.iter()
                            .zip(m.means.iter().zip(&m.vars))
                            .map(|(&v, (&mu, &var))| gaussian_log_density(v, mu, var))
                            .sum::<f64>()
                })
            })
            .collect()
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        let scores: Vec<f64> = self
            .joint_log_likelihood(x)
            .into_iter()
            .map(|s| s.unwrap_or(f64::NEG_INFINITY))
            .collect();
        argmax(&scores)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GaussianNbLearner;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_posterior() {
        // class 0: x = {0, 2} -> mean 1, var 1; class 1: x = {4} -> var floored
        let d = Dataset::new(vec![vec![0.0], vec![2.0], vec![4.0]], vec![0, 0, 1], 2).unwrap();
        let nb = GaussianNb::fit(&d).unwrap();
        let jll = nb.joint_log_likelihood(&[1.5]);
        let expected0 = (2.0f64 / 3.0).ln() - 0.5 * (2.0 * std::f64::consts::PI).ln() - 0.25 / 2.0;
        assert!((jll[0].unwrap() - expected0).abs() < 1e-12);
        assert_eq!(nb.predict(&[1.5]), 0);
        assert_eq!(nb.predict(&[4.0]), 1);
    }
}

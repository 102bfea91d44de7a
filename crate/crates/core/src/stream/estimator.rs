use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

/// Weighted running mean and variance (Welford/West update).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GaussianEstimator {
    pub weight: f64,
    pub mean: f64,
    pub m2: f64,
}

impl GaussianEstimator {
    pub fn update(&mut self, value: f64, weight: f64) {
        self.weight += weight;
        let delta = value - self.mean;
        self.mean += weight * delta / self.weight;
        self.m2 += weight * delta * (value - self.mean);
    }

    /// Population variance; 0 with no mass.
    pub fn variance(&self) -> f64 {
        if self.weight > 0.0 {
            (self.m2 / self.weight).max(0.0)
        } else {
            0.0
        }
    }

    /// The same estimator after adding `zeros` observations of value 0.
    pub fn with_zeros(&self, zeros: f64) -> Self {
        if zeros <= 0.0 {
            return *self;
        }
        let weight = self.weight + zeros;
        let mean = self.weight * self.mean / weight;
        let m2 = self.m2 + self.weight * zeros / weight * self.mean * self.mean;
        Self { weight, mean, m2 }
    }

    /// Estimated fraction of the mass at or below `t`.
    pub fn cdf(&self, t: f64) -> f64 {
        if self.weight <= 0.0 {
            return 0.0;
        }
        let std = self.variance().sqrt();
        if std <= 1e-12 * self.mean.abs().max(1.0) {
            return if self.mean <= t { 1.0 } else { 0.0 };
        }
        0.5 * (1.0 + erf((t - self.mean) / (std * std::f64::consts::SQRT_2)))
    }
}

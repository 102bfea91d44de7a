use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuartileStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl QuartileStats {
    /// Bounds of interval `r` (0..4). The first interval is closed, the
    /// others are open on the left so every value falls in exactly one.
    pub fn interval(&self, r: usize) -> (f64, f64) {
        let edges = [self.min, self.q1, self.median, self.q3, self.max];
        (edges[r], edges[r + 1])
    }

    pub fn in_interval(&self, r: usize, v: f64) -> bool {
        let (lo, hi) = self.interval(r);
        if r == 0 {
            lo <= v && v <= hi
        } else {
            lo < v && v <= hi
        }
    }

    /// Q1, median and Q3.
    pub fn quartiles(&self) -> [f64; 3] {
        [self.q1, self.median, self.q3]
    }
}

/// Quantile of already sorted values with linear interpolation between
/// order statistics (position `p * (n - 1)`).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn quartile_stats(values: &[f64]) -> Result<QuartileStats> {
    if values.is_empty() {
        return Err(Error::EmptyInput("quartile statistics"));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(QuartileStats {
        min: v[0],
        q1: quantile(&v, 0.25),
        median: quantile(&v, 0.5),
        q3: quantile(&v, 0.75),
        max: v[v.len() - 1],
    })
}

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const MAX_ITER: usize = 100;
const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeans {
    pub assignments: Vec<usize>,
    pub centroids: Vec<f64>,
}

impl KMeans {
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.centroids.len()];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }

    /// Members of the most populated cluster (lowest index on ties).
    pub fn largest_cluster(&self, values: &[f64]) -> Vec<f64> {
        let sizes = self.cluster_sizes();
        let best = (0..sizes.len()).fold(0, |b, c| if sizes[c] > sizes[b] { c } else { b });
        values
            .iter()
            .zip(&self.assignments)
            .filter(|(_, &a)| a == best)
            .map(|(&v, _)| v)
            .collect()
    }
}

/// Within-cluster sum of squared distances to the cluster means.
pub fn sse(values: &[f64], assignments: &[usize], k: usize) -> f64 {
    let mut sum = vec![0.0; k];
    let mut n = vec![0usize; k];
    for (&v, &a) in values.iter().zip(assignments) {
        sum[a] += v;
        n[a] += 1;
    }
    values
        .iter()
        .zip(assignments)
        .map(|(&v, &a)| (v - sum[a] / n[a] as f64).powi(2))
        .sum()
}

fn nearest(v: f64, centroids: &[f64]) -> usize {
    let mut best = 0;
    for (c, &m) in centroids.iter().enumerate() {
        if (v - m).abs() < (v - centroids[best]).abs() {
            best = c;
        }
    }
    best
}

fn means(values: &[f64], assignments: &[usize], old: &[f64]) -> Vec<f64> {
    let k = old.len();
    let mut sum = vec![0.0; k];
    let mut n = vec![0usize; k];
    for (&v, &a) in values.iter().zip(assignments) {
        sum[a] += v;
        n[a] += 1;
    }
    (0..k)
        .map(|c| if n[c] > 0 { sum[c] / n[c] as f64 } else { old[c] })
        .collect()
}

/// One-dimensional k-means.
///
/// Initial centroids are `k` distinct values picked with the seeded
/// generator (fewer clusters when there are fewer distinct values). Lloyd
/// iterations run until no centroid moves more than 1e-9 or 100 rounds,
/// then single-point moves that lower the within-cluster error are applied
/// until none is left, so no reassignment of one point can improve the
/// result.
pub fn kmeans_1d(values: &[f64], k: usize, seed: u64) -> Result<KMeans> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if values.len() < k {
        return Err(Error::InvalidParameter(format!(
            "{} values cannot form {k} clusters",
            values.len()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite value".into()));
    }
    let mut distinct = values.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let k = k.min(distinct.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids: Vec<f64> = sample(&mut rng, distinct.len(), k).iter().map(|i| distinct[i]).collect();
    centroids.sort_by(f64::total_cmp);

    let mut assignments: Vec<usize> = values.iter().map(|&v| nearest(v, &centroids)).collect();
    for _ in 0..MAX_ITER {
        let updated = means(values, &assignments, &centroids);
        let shift = updated
            .iter()
            .zip(&centroids)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        centroids = updated;
        assignments = values.iter().map(|&v| nearest(v, &centroids)).collect();
        if shift < TOL {
            break;
        }
    }

    // single-point refinement
    let mut n = vec![0usize; k];
    for &a in &assignments {
        n[a] += 1;
    }
    let mut mu = means(values, &assignments, &centroids);
    loop {
        let mut moved = false;
        for (i, &v) in values.iter().enumerate() {
            let a = assignments[i];
            if n[a] < 2 {
                continue;
            }
            let removal = n[a] as f64 / (n[a] - 1) as f64 * (v - mu[a]).powi(2);
            let mut best: Option<(usize, f64)> = None;
            for b in (0..k).filter(|&b| b != a) {
                let add = n[b] as f64 / (n[b] + 1) as f64 * (v - mu[b]).powi(2);
                let gain = removal - add;
                if gain > 1e-12 * removal.max(1e-300) && best.is_none_or(|(_, g)| gain > g) {
                    best = Some((b, gain));
                }
            }
            if let Some((b, _)) = best {
                mu[a] = (mu[a] * n[a] as f64 - v) / (n[a] - 1) as f64;
                mu[b] = (mu[b] * n[b] as f64 + v) / (n[b] + 1) as f64;
                n[a] -= 1;
                n[b] += 1;
                assignments[i] = b;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    let centroids = means(values, &assignments, &mu);
    Ok(KMeans { assignments, centroids })
}

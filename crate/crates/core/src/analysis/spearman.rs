use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpearmanResult {
    pub coefficient: f64,
    pub n: usize,
}

/// 1-based ranks; tied values share the mean of their positions.
pub fn rank(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mean_rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = mean_rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman's rank correlation: the product-moment formula applied to the
/// rank variables.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<SpearmanResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::EmptyInput("spearman needs at least two samples"));
    }
    let rx = rank(x);
    let ry = rank(y);
    let n = x.len() as f64;
    let (mut sx, mut sy, mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sx += a;
        sy += b;
        sxy += a * b;
        sxx += a * a;
        syy += b * b;
    }
    let dx = n * sxx - sx * sx;
    let dy = n * syy - sy * sy;
    if dx <= 0.0 || dy <= 0.0 {
        return Err(Error::ConstantInput("spearman input has no variation"));
    }
    let r = (n * sxy - sx * sy) / (dx.sqrt() * dy.sqrt());
    Ok(SpearmanResult {
        coefficient: r.clamp(-1.0, 1.0),
        n: x.len(),
    })
}

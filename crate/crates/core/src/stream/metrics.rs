use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Binary confusion matrix indexed `[actual][predicted]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 2]; 2],
}

impl ConfusionMatrix {
    /// Builds a matrix from true negatives, false positives, false
    /// negatives and true positives (class 1 positive).
    pub fn from_cells(tn: u64, fp: u64, fn_: u64, tp: u64) -> Self {
        Self {
            counts: [[tn, fp], [fn_, tp]],
        }
    }

    pub fn record(&mut self, actual: usize, predicted: usize) {
        self.counts[actual][predicted] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        self.counts[0][0] + self.counts[1][1]
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        for a in 0..2 {
            for p in 0..2 {
                self.counts[a][p] += other.counts[a][p];
            }
        }
    }

    /// `[tn, fp, fn, tp]`.
    pub fn cells(&self) -> [u64; 4] {
        [self.counts[0][0], self.counts[0][1], self.counts[1][0], self.counts[1][1]]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Averaged {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub confusion: ConfusionMatrix,
    /// Number of scored samples; equals the confusion total.
    pub n_scored: u64,
    pub accuracy: f64,
    pub per_class: [ClassMetrics; 2],
    pub macro_avg: Averaged,
    pub micro_avg: Averaged,
    pub elapsed_secs: f64,
    /// Nothing was scored; every rate is 0.
    pub empty: bool,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn f_measure(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Accuracy, per-class, macro and micro precision/recall/F from a
/// confusion matrix. 0/0 is taken as 0.
pub fn compute_metrics(confusion: &ConfusionMatrix) -> Result<MetricsReport> {
    let total = confusion.total();
    if total == 0 {
        return Err(Error::EmptyInput("confusion matrix"));
    }
    let c = &confusion.counts;
    let per_class: [ClassMetrics; 2] = std::array::from_fn(|k| {
        let tp = c[k][k];
        let predicted = c[0][k] + c[1][k];
        let actual = c[k][0] + c[k][1];
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, actual);
        ClassMetrics {
            precision,
            recall,
            f1: f_measure(precision, recall),
            support: actual,
        }
    });
    let macro_avg = Averaged {
        precision: (per_class[0].precision + per_class[1].precision) / 2.0,
        recall: (per_class[0].recall + per_class[1].recall) / 2.0,
        f1: (per_class[0].f1 + per_class[1].f1) / 2.0,
    };
    // pooled over both classes: every sample is one prediction and one
    // actual, so pooled TP / pooled predictions = correct / total
    let pooled_tp = confusion.correct();
    let micro_p = ratio(pooled_tp, total);
    let micro_r = ratio(pooled_tp, total);
    Ok(MetricsReport {
        confusion: *confusion,
        n_scored: total,
        accuracy: ratio(pooled_tp, total),
        per_class,
        macro_avg,
        micro_avg: Averaged {
            precision: micro_p,
            recall: micro_r,
            f1: f_measure(micro_p, micro_r),
        },
        elapsed_secs: 0.0,
        empty: false,
    })
}

impl MetricsReport {
    /// Report for a window in which nothing was scored.
    pub fn empty() -> Self {
        Self {
            confusion: ConfusionMatrix::default(),
            n_scored: 0,
            accuracy: 0.0,
            per_class: [ClassMetrics::default(); 2],
            macro_avg: Averaged::default(),
            micro_avg: Averaged::default(),
            elapsed_secs: 0.0,
            empty: true,
        }
    }

    /// Metrics for `confusion`, or the empty report when it has no samples.
    pub fn from_confusion(confusion: &ConfusionMatrix) -> Self {
        compute_metrics(confusion).unwrap_or_else(|_| Self::empty())
    }

    pub const CSV_HEADER: &'static str = "window,n_scored,tn,fp,fn,tp,accuracy,\
macro_precision,macro_recall,macro_f1,micro_precision,micro_recall,micro_f1,elapsed_secs";

    pub fn write_csv_row<W: Write>(&self, mut w: W, window: &str) -> Result<()> {
        let [tn, fp, fn_, tp] = self.confusion.cells();
        writeln!(
            w,
            "{window},{},{tn},{fp},{fn_},{tp},{},{},{},{},{},{},{},{}",
            self.n_scored,
            self.accuracy,
            self.macro_avg.precision,
            self.macro_avg.recall,
            self.macro_avg.f1,
            self.micro_avg.precision,
            self.micro_avg.recall,
            self.micro_avg.f1,
            self.elapsed_secs
        )?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_correct() {
        let m = compute_metrics(&ConfusionMatrix::from_cells(5, 0, 0, 5)).unwrap();
        assert_eq!(m.accuracy, 1.0);
        assert_eq!(m.macro_avg.f1, 1.0);
        assert_eq!(m.per_class[0].recall, 1.0);
    }

    #[test]
    fn hand_computed() {
        let m = compute_metrics(&ConfusionMatrix::from_cells(6, 1, 1, 2)).unwrap();
        assert!((m.accuracy - 0.8).abs() < 1e-15);
        assert!((m.per_class[1].precision - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.per_class[1].recall - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.per_class[0].f1 - 6.0 / 7.0).abs() < 1e-15);
        assert!((m.macro_avg.f1 - (6.0 / 7.0 + 2.0 / 3.0) / 2.0).abs() < 1e-15);
        assert_eq!(m.micro_avg.precision, m.accuracy);
    }

    #[test]
    fn missing_class_rates_are_zero() {
        // constant predictor on a 50/50 split
        let m = compute_metrics(&ConfusionMatrix::from_cells(5, 0, 5, 0)).unwrap();
        assert_eq!(m.accuracy, 0.5);
        assert_eq!(m.per_class[1].recall, 0.0);
        assert_eq!(m.per_class[1].precision, 0.0);
        assert_eq!(m.per_class[1].f1, 0.0);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(compute_metrics(&ConfusionMatrix::default()).is_err());
        assert!(MetricsReport::from_confusion(&ConfusionMatrix::default()).empty);
    }
}

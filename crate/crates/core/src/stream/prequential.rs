use std::time::Instant;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::metrics::{ConfusionMatrix, MetricsReport};
use super::model::StreamModel;
use crate::data::DailyRecord;
use crate::features::FeatureVector;
use crate::profile::ProfileStore;
use crate::{Error, Result};

/// Which part of the stream is scored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EvalWindow {
    All,
    /// Only the trailing fraction of the stream, e.g. `Last(0.1)`.
    Last(f64),
}

impl EvalWindow {
    /// First scored index for a stream of length `n`.
    pub fn start(self, n: usize) -> usize {
        match self {
            EvalWindow::All => 0,
            EvalWindow::Last(frac) => n - ((frac.clamp(0.0, 1.0) * n as f64).round() as usize).min(n),
        }
    }

    pub fn label(self) -> String {
        match self {
            EvalWindow::All => "all".to_string(),
            EvalWindow::Last(frac) => format!("last{}", (frac * 100.0).round()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrequentialConfig {
    /// Records at the head of the stream that are never scored.
    pub warmup: usize,
    pub window: EvalWindow,
    pub vocab_len: usize,
}

impl Default for PrequentialConfig {
    fn default() -> Self {
        Self {
            warmup: 1,
            window: EvalWindow::All,
            vocab_len: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub index: usize,
    pub label: usize,
    /// `None` when the model abstained.
    pub prediction: Option<usize>,
    pub scored: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrequentialResult {
    pub report: MetricsReport,
    pub steps: Vec<StepOutcome>,
}

/// Test-then-train over ready-made feature vectors.
pub fn prequential_vectors<M, I>(samples: I, n: usize, model: &mut M, warmup: usize, window: EvalWindow) -> Result<PrequentialResult>
where
    M: StreamModel + ?Sized,
    I: IntoIterator<Item = Result<(FeatureVector, usize)>>,
{
    let start = Instant::now();
    let first_scored = warmup.max(window.start(n));
    let mut cm = ConfusionMatrix::default();
    let mut steps = Vec::with_capacity(n);
    for (index, sample) in samples.into_iter().enumerate() {
        let (x, y) = sample?;
        let prediction = model.predict(&x);
        let scored = index >= first_scored && prediction.is_some();
        if let (true, Some(p)) = (scored, prediction) {
            cm.record(y, p);
        }
        steps.push(StepOutcome {
            index,
            label: y,
            prediction,
            scored,
        });
        model.learn(&x, y)?;
    }
    let mut report = MetricsReport::from_confusion(&cm);
    if report.empty {
        log::warn!("prequential run scored no records");
    }
    report.elapsed_secs = start.elapsed().as_secs_f64();
    Ok(PrequentialResult { report, steps })
}

/// Index of the first record dated before its predecessor.
pub fn first_unsorted(records: &[DailyRecord]) -> Option<usize> {
    records.windows(2).position(|w| w[1].date < w[0].date).map(|i| i + 1)
}

/// Test-then-train over a dated stream of daily records: each record first
/// updates its editor's profile, the profile vector is classified and
/// scored, and the model then learns the record's label.
pub fn prequential_run<M: StreamModel + ?Sized>(
    records: &[DailyRecord],
    model: &mut M,
    profiles: &mut ProfileStore,
    config: &PrequentialConfig,
) -> Result<PrequentialResult> {
    if let Some(i) = first_unsorted(records) {
        return Err(Error::Unsorted(i));
    }
    let vocab_len = config.vocab_len;
    let samples = records.iter().map(|r| {
        let profile = profiles.absorb(r)?;
        Ok((profile.feature_vector(vocab_len)?, r.label()))
    });
    prequential_vectors(samples, records.len(), model, config.warmup, config.window)
}

/// Date of every record, for lining up outcomes with the stream.
pub fn record_dates(records: &[DailyRecord]) -> Vec<NaiveDate> {
    records.iter().map(|r| r.date).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::tests::blank_record;
    use crate::stream::IncrementalNb;

    fn day(d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(2021, 3, d).unwrap()
    }

    #[test]
    fn one_class_stream_is_perfect_for_nb() {
        let records: Vec<DailyRecord> = (1..=20)
            .map(|d| {
                let mut r = blank_record(&format!("e{}", d % 3), day(d));
                r.avg_links = d as f64;
                r.revert_label = true;
                r
            })
            .collect();
        let mut nb = IncrementalNb::new(2);
        let res = prequential_run(&records, &mut nb, &mut ProfileStore::new(), &PrequentialConfig::default()).unwrap();
        assert_eq!(res.report.n_scored, 19);
        assert_eq!(res.report.accuracy, 1.0);
        assert!(!res.steps[0].scored);
    }

    #[test]
    fn warmup_covering_everything_is_empty() {
        let records: Vec<DailyRecord> = (1..=5).map(|d| blank_record("e", day(d))).collect();
        let cfg = PrequentialConfig {
            warmup: 5,
            ..PrequentialConfig::default()
        };
        let res = prequential_run(&records, &mut IncrementalNb::new(2), &mut ProfileStore::new(), &cfg).unwrap();
        assert!(res.report.empty);
        assert_eq!(res.report.n_scored, 0);
    }

    #[test]
    fn unsorted_stream_rejected() {
        let records = vec![blank_record("a", day(3)), blank_record("b", day(4)), blank_record("c", day(2))];
        let err = prequential_run(&records, &mut IncrementalNb::new(2), &mut ProfileStore::new(), &PrequentialConfig::default());
        assert!(matches!(err, Err(Error::Unsorted(2))));
    }

    #[test]
    fn window_start() {
        assert_eq!(EvalWindow::Last(0.9).start(100), 10);
        assert_eq!(EvalWindow::Last(0.1).start(100), 90);
        assert_eq!(EvalWindow::All.start(7), 0);
        assert_eq!(EvalWindow::Last(0.9).label(), "last90");
    }
}

use std::collections::BTreeSet;

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::kmeans::kmeans_1d;
use super::stats::{quartile_stats, QuartileStats};
use crate::data::{DailyRecord, SparseCounts};
use crate::features::{DENSE_FEATURES, MEAN_LEN, MEAN_OFFSET};
use crate::seed::derive_seed;
use crate::{Error, Result};

/// Position of `avg_revision_size` among the averaged columns.
pub const ANCHOR_FEATURE: usize = 22;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub count: usize,
    pub seed: u64,
    pub k: usize,
    /// Inclusive date range for synthetic records; defaults to the span of
    /// the original reverts.
    pub date_range: Option<(NaiveDate, NaiveDate)>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            count: 0,
            seed: 0,
            k: 2,
            date_range: None,
        }
    }
}

/// An interval of a feature with no original value, for which the whole
/// revert set was used instead.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fallback {
    pub feature: String,
    pub interval: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthOutput {
    pub records: Vec<DailyRecord>,
    pub fallbacks: Vec<Fallback>,
    /// Fewer than four samples were requested, so all came from the first
    /// interval.
    pub single_interval: bool,
}

/// Observed identifier values of one anchor interval, deduplicated and
/// ordered so draws are reproducible.
struct Pool {
    editors: Vec<String>,
    bot_flags: Vec<bool>,
    creator_flags: Vec<bool>,
    inserted: Vec<SparseCounts>,
    deleted: Vec<SparseCounts>,
}

impl Pool {
    fn new(records: &[&DailyRecord]) -> Self {
        fn distinct<T: Ord + Clone>(it: impl Iterator<Item = T>) -> Vec<T> {
            it.collect::<BTreeSet<T>>().into_iter().collect()
        }
        Self {
            editors: distinct(records.iter().map(|r| r.editor_id.clone())),
            bot_flags: distinct(records.iter().map(|r| r.bot_flag)),
            creator_flags: distinct(records.iter().map(|r| r.editor_is_creator)),
            inserted: distinct(records.iter().map(|r| r.inserted_ngrams.clone())),
            deleted: distinct(records.iter().map(|r| r.deleted_ngrams.clone())),
        }
    }
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.random_range(0..items.len())]
}

/// Sampling range for one feature in one interval: the quartiles of the
/// largest 1-D cluster among the originals lying in that interval.
fn sampling_range(values: &[f64], stats: &QuartileStats, r: usize, k: usize, seed: u64) -> Result<(f64, f64, bool)> {
    let subset: Vec<f64> = values.iter().copied().filter(|&v| stats.in_interval(r, v)).collect();
    let (subset, fallback) = if subset.is_empty() {
        (values.to_vec(), true)
    } else {
        (subset, false)
    };
    let km = kmeans_1d(&subset, k.min(subset.len()), seed)?;
    let cluster = quartile_stats(&km.largest_cluster(&subset))?;
    Ok((cluster.q1, cluster.q3, fallback))
}

/// Generates `count` synthetic revert records from the original reverts.
pub fn generate_reverts(original: &[DailyRecord], config: &SynthConfig) -> Result<SynthOutput> {
    let reverts: Vec<&DailyRecord> = original.iter().filter(|r| r.revert_label).collect();
    if reverts.is_empty() {
        return Err(Error::EmptyInput("revert records"));
    }
    if config.k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let (start, end) = match config.date_range {
        Some((s, e)) if s > e => {
            return Err(Error::InvalidParameter(format!("date range {s}..{e} is reversed")))
        }
        Some(range) => range,
        None => (
            reverts.iter().map(|r| r.date).min().unwrap_or_default(),
            reverts.iter().map(|r| r.date).max().unwrap_or_default(),
        ),
    };
    let span_days = (end - start).num_days();

    let columns: Vec<Vec<f64>> = {
        let rows: Vec<[f64; MEAN_LEN]> = reverts.iter().map(|r| r.mean_values()).collect();
        (0..MEAN_LEN).map(|f| rows.iter().map(|row| row[f]).collect()).collect()
    };
    let stats: Vec<QuartileStats> = columns.iter().map(|c| quartile_stats(c)).collect::<Result<_>>()?;

    let single_interval = config.count < 4;
    if single_interval && config.count > 0 {
        log::warn!("only {} synthetic records requested; all drawn from the first interval", config.count);
    }
    let per_interval: [usize; 4] = if single_interval {
        [config.count, 0, 0, 0]
    } else {
        std::array::from_fn(|r| config.count / 4 + usize::from(r < config.count % 4))
    };

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, "synth"));
    let mut fallbacks = Vec::new();
    let mut records = Vec::with_capacity(config.count);
    let anchor = &stats[ANCHOR_FEATURE];

    for (r, &n) in per_interval.iter().enumerate() {
        if n == 0 {
            continue;
        }
        let mut ranges = Vec::with_capacity(MEAN_LEN);
        for f in 0..MEAN_LEN {
            let seed = derive_seed(config.seed, &format!("kmeans-{f}-{r}"));
            let (lo, hi, fell_back) = sampling_range(&columns[f], &stats[f], r, config.k, seed)?;
            if fell_back {
                let feature = DENSE_FEATURES[MEAN_OFFSET + f].key.to_string();
                log::info!("no original revert in interval {} of {feature}; using all reverts", r + 1);
                fallbacks.push(Fallback { feature, interval: r });
            }
            ranges.push((lo, hi));
        }
        let members: Vec<&DailyRecord> = reverts
            .iter()
            .copied()
            .filter(|rec| anchor.in_interval(r, rec.avg_revision_size))
            .collect();
        let pool = Pool::new(if members.is_empty() { &reverts } else { &members });

        for _ in 0..n {
            let mut values = [0.0; MEAN_LEN];
            for (v, &(lo, hi)) in values.iter_mut().zip(&ranges) {
                *v = if hi > lo { rng.random_range(lo..=hi) } else { lo };
            }
            let offset = if span_days > 0 { rng.random_range(0..=span_days) } else { 0 };
            let mut rec = DailyRecord {
                editor_id: pick(&mut rng, &pool.editors).clone(),
                date: start + chrono::Duration::days(offset),
                bot_flag: *pick(&mut rng, &pool.bot_flags),
                editor_is_creator: *pick(&mut rng, &pool.creator_flags),
                inserted_ngrams: pick(&mut rng, &pool.inserted).clone(),
                deleted_ngrams: pick(&mut rng, &pool.deleted).clone(),
                revert_label: true,
                synthetic: true,
                n_reviews: 0,
                ..reverts[0].clone()
            };
            rec.set_mean_values(&values);
            records.push(rec);
        }
    }
    Ok(SynthOutput {
        records,
        fallbacks,
        single_interval,
    })
}

/// Original and synthetic records in one stream ordered by
/// (date, editor_id, synthetic flag); equal keys keep their input order.
pub fn merge_balance(original: &[DailyRecord], synthetic: &[DailyRecord]) -> Vec<DailyRecord> {
    let mut out: Vec<DailyRecord> = original.iter().chain(synthetic).cloned().collect();
    out.sort_by(|a, b| {
        (a.date, &a.editor_id, a.synthetic).cmp(&(b.date, &b.editor_id, b.synthetic))
    });
    out
}

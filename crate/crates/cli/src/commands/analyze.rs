use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use revstream::analysis::{
    cross_validate, feature_importance, select_features, spearman, train_forest, CartParams, Dataset, FoldStrategy,
    ForestParams, GaussianNbLearner, Learner, RidgeLearner,
};
use revstream::data::DailyRecord;
use revstream::features::{profile_len, FeatureSchema, DENSE_LEN};
use revstream::seed::derive_seed;
use revstream::stream::MetricsReport;
use revstream::Error;

use crate::config::{PipelineConfig, UsageError};
use crate::io::{read_daily, read_vocab_opt, say, write_json, write_with};
use crate::PreconditionError;

/// Dense columns, then the inserted and deleted n-gram blocks when
/// `vocab_len > 0`.
fn record_row(r: &DailyRecord, vocab_len: usize) -> Vec<f64> {
    let mut row = vec![0.0; profile_len(vocab_len)];
    row[..DENSE_LEN].copy_from_slice(&r.dense_values());
    for (block, counts) in [&r.inserted_ngrams, &r.deleted_ngrams].into_iter().enumerate() {
        let offset = DENSE_LEN + block * vocab_len;
        for (&k, &v) in counts {
            if (k as usize) < vocab_len {
                row[offset + k as usize] = v as f64;
            }
        }
    }
    row
}

fn subsample(records: Vec<DailyRecord>, keep: Option<usize>, seed: u64) -> Vec<DailyRecord> {
    let Some(keep) = keep else {
        return records;
    };
    let non_revert: Vec<usize> = (0..records.len()).filter(|&i| !records[i].revert_label).collect();
    if non_revert.len() <= keep {
        return records;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "subsample"));
    let mut drop = vec![true; records.len()];
    for j in sample(&mut rng, non_revert.len(), keep) {
        drop[non_revert[j]] = false;
    }
    records
        .into_iter()
        .enumerate()
        .filter(|&(i, ref r)| r.revert_label || !drop[i])
        .map(|(_, r)| r)
        .collect()
}

#[derive(Serialize)]
struct Selection<'a> {
    threshold: f64,
    all_zero: bool,
    n_selected: usize,
    selected: Vec<String>,
    mask: &'a [bool],
}

#[derive(Serialize)]
struct CvEntry {
    model: &'static str,
    folds: usize,
    mean_accuracy: Option<f64>,
    pooled: Option<MetricsReport>,
    error: Option<String>,
}

fn cv_entry<L: Learner>(model: &'static str, learner: &L, data: &Dataset, k: usize, seed: u64) -> CvEntry {
    let strategy = FoldStrategy::for_dataset(data, derive_seed(seed, "cv"));
    match cross_validate(learner, data, k, strategy) {
        Ok(cv) => {
            let mut pooled = cv.pooled.clone();
            pooled.elapsed_secs = 0.0;
            CvEntry {
                model,
                folds: k,
                mean_accuracy: Some(cv.mean_accuracy()),
                pooled: Some(pooled),
                error: None,
            }
        }
        Err(e) => {
            log::warn!("cross-validation of {model} failed: {e}");
            CvEntry {
                model,
                folds: k,
                mean_accuracy: None,
                pooled: None,
                error: Some(e.to_string()),
            }
        }
    }
}

pub fn run(cfg: &PipelineConfig, quiet: bool) -> anyhow::Result<()> {
    let a = &cfg.analysis;
    if a.n_estimators == 0 {
        return Err(UsageError("analysis.n_estimators must be at least 1".into()).into());
    }
    let records = read_daily(&cfg.daily_path(), "daily records")?;
    if records.is_empty() {
        return Err(PreconditionError("no daily records to analyze".into()).into());
    }
    let vocab = if a.include_ngrams {
        read_vocab_opt(&cfg.vocab_path())?
    } else {
        None
    };
    let vocab_len = vocab.as_ref().map_or(0, |v| v.len());
    let schema = match &vocab {
        Some(v) => FeatureSchema::profile(v),
        None => FeatureSchema::Profile { terms: Vec::new() },
    };

    let records = subsample(records, a.non_revert_sample, cfg.seed);
    let rows: Vec<Vec<f64>> = records.iter().map(|r| record_row(r, vocab_len)).collect();
    let labels: Vec<usize> = records.iter().map(DailyRecord::label).collect();
    let data = Dataset::new(rows, labels, 2)?.chronological();
    let d = data.n_features();
    let names: Vec<String> = (0..d).map(|i| schema.name(i).label()).collect();

    let y: Vec<f64> = data.labels().iter().map(|&l| l as f64).collect();
    let mut constant = 0;
    write_with(&cfg.out_path("spearman.csv"), |w| {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["index", "feature", "coefficient", "n", "status"])?;
        for (j, name) in names.iter().enumerate() {
            let (coef, n, status) = match spearman(&data.column(j), &y) {
                Ok(s) => (s.coefficient.to_string(), s.n, "ok"),
                Err(Error::ConstantInput(_)) => {
                    constant += 1;
                    (String::new(), data.len(), "constant")
                }
                Err(e) => return Err(e.into()),
            };
            wtr.write_record([j.to_string(), name.clone(), coef, n.to_string(), status.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    })?;
    if constant > 0 {
        log::warn!("{constant} of {d} features are constant (or the labels are); no correlation reported for them");
    }

    let params = ForestParams {
        n_estimators: a.n_estimators,
        max_depth: a.max_depth,
        max_features: a.max_features,
        seed: derive_seed(cfg.seed, "forest"),
        ..ForestParams::default()
    };
    let forest = train_forest(&data, &params)?;
    let imp = feature_importance(&forest);
    let mask = select_features(&imp.values, a.threshold);
    let threshold = a
        .threshold
        .unwrap_or_else(|| imp.values.iter().sum::<f64>() / imp.values.len().max(1) as f64);
    write_with(&cfg.out_path("importances.csv"), |w| {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["index", "feature", "importance", "selected"])?;
        for (j, name) in names.iter().enumerate() {
            wtr.write_record([j.to_string(), name.clone(), imp.values[j].to_string(), mask[j].to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    })?;
    let selected: Vec<String> = (0..d).filter(|&j| mask[j]).map(|j| names[j].clone()).collect();
    write_json(
        &cfg.out_path("selected_features.json"),
        &Selection {
            threshold,
            all_zero: imp.all_zero,
            n_selected: selected.len(),
            selected,
            mask: &mask,
        },
    )?;

    if a.cv_folds > 0 {
        let k = a.cv_folds;
        if k < 2 || k > data.len() {
            return Err(UsageError(format!("cv_folds must lie in 2..={}, got {k}", data.len())).into());
        }
        let entries = vec![
            cv_entry("random_forest", &params, &data, k, cfg.seed),
            cv_entry("decision_tree", &CartParams::default(), &data, k, cfg.seed),
            cv_entry("gaussian_nb", &GaussianNbLearner, &data, k, cfg.seed),
            cv_entry("ridge", &RidgeLearner { alpha: a.ridge_alpha }, &data, k, cfg.seed),
        ];
        for e in &entries {
            if let Some(acc) = e.mean_accuracy {
                say(quiet, format_args!("{}: mean {k}-fold accuracy {acc:.4}", e.model));
            }
        }
        write_json(&cfg.out_path("cv.json"), &entries)?;
    }

    say(
        quiet,
        format_args!(
            "analyzed {} records over {} features: {} constant, {} selected (threshold {:.6})",
            data.len(),
            d,
            constant,
            mask.iter().filter(|&&m| m).count(),
            threshold
        ),
    );
    Ok(())
}

use std::io::Write;

use serde::Serialize;

use revstream::data::DailyRecord;
use revstream::profile::ProfileStore;
use revstream::seed::derive_seed;
use revstream::stream::{
    prequential_run, AnyModel, Checkpoint, HoeffdingTree, IncrementalNb, MetricsReport, OnlineForest,
    OnlineForestConfig, PrequentialConfig,
};

use crate::config::{ModelKind, PipelineConfig, UsageError};
use crate::io::{read_daily, read_vocab_opt, say, write_json, write_with};

#[derive(Serialize)]
struct MetricsFile<'a> {
    model: ModelKind,
    window: String,
    warmup: usize,
    n_records: usize,
    vocab_len: usize,
    report: &'a MetricsReport,
}

#[derive(Serialize)]
struct Timing {
    elapsed_secs: f64,
    records_per_sec: f64,
}

/// Columns spanned by the records' n-gram keys.
fn inferred_vocab_len(records: &[DailyRecord]) -> usize {
    records
        .iter()
        .flat_map(|r| r.inserted_ngrams.keys().chain(r.deleted_ngrams.keys()))
        .map(|&k| k as usize + 1)
        .max()
        .unwrap_or(0)
}

pub fn build_model(cfg: &PipelineConfig) -> anyhow::Result<AnyModel> {
    let s = &cfg.stream;
    let tree = s.hoeffding();
    tree.validate().map_err(|e| UsageError(format!("stream config: {e}")))?;
    Ok(match s.model {
        ModelKind::Nb => AnyModel::NaiveBayes(IncrementalNb::new(2)),
        ModelKind::Ht => AnyModel::HoeffdingTree(HoeffdingTree::new(2, tree)),
        ModelKind::Arf => {
            let fc = OnlineForestConfig {
                n_trees: s.n_trees,
                poisson_lambda: s.poisson_lambda,
                seed: derive_seed(cfg.seed, "stream"),
                tree,
                ..OnlineForestConfig::default()
            };
            let forest = OnlineForest::new(2, fc).map_err(|e| UsageError(format!("stream config: {e}")))?;
            AnyModel::OnlineForest(forest)
        }
    })
}

pub fn run(cfg: &PipelineConfig, quiet: bool) -> anyhow::Result<()> {
    let records = read_daily(&cfg.balanced_path(), "balanced stream")?;
    let vocab_len = match read_vocab_opt(&cfg.vocab_path())? {
        Some(v) => v.len(),
        None => {
            let n = inferred_vocab_len(&records);
            log::warn!("no vocabulary file; assuming {n} n-gram columns");
            n
        }
    };
    let mut model = build_model(cfg)?;
    let window = cfg.stream.eval_window.window();
    let pcfg = PrequentialConfig {
        warmup: cfg.stream.warmup,
        window,
        vocab_len,
    };
    let mut profiles = ProfileStore::new();
    let result = prequential_run(&records, &mut model, &mut profiles, &pcfg)?;

    let elapsed = result.report.elapsed_secs;
    let mut report = result.report;
    report.elapsed_secs = 0.0;
    let label = window.label();
    write_json(
        &cfg.out_path("metrics.json"),
        &MetricsFile {
            model: cfg.stream.model,
            window: label.clone(),
            warmup: cfg.stream.warmup,
            n_records: records.len(),
            vocab_len,
            report: &report,
        },
    )?;
    write_with(&cfg.out_path("metrics.csv"), |w| {
        writeln!(w, "{}", MetricsReport::CSV_HEADER)?;
        report.write_csv_row(&mut *w, &label)?;
        Ok(())
    })?;
    write_json(
        &cfg.out_path("timing.json"),
        &Timing {
            elapsed_secs: elapsed,
            records_per_sec: if elapsed > 0.0 { records.len() as f64 / elapsed } else { 0.0 },
        },
    )?;
    let checkpoint = Checkpoint::new(model, vocab_len);
    write_with(&cfg.checkpoint_path(), |w| Ok(checkpoint.write_json(w)?))?;

    say(
        quiet,
        format_args!(
            "{:?} on {} records, window {}: scored {}, accuracy {:.4}, macro P {:.4} R {:.4} F {:.4}; {:.2}s",
            cfg.stream.model,
            records.len(),
            label,
            report.n_scored,
            report.accuracy,
            report.macro_avg.precision,
            report.macro_avg.recall,
            report.macro_avg.f1,
            elapsed
        ),
    );
    Ok(())
}

use serde::Serialize;

use revstream::data::{write_daily_jsonl, DailyRecord};
use revstream::synth::{fidelity_report, generate_reverts, merge_balance, write_fidelity_csv, Fallback, SynthConfig};

use crate::config::{PipelineConfig, UsageError};
use crate::io::{read_daily, say, write_json, write_with};
use crate::PreconditionError;

#[derive(Serialize)]
struct BalanceSummary<'a> {
    original: usize,
    original_reverts: usize,
    synthetic: usize,
    merged: usize,
    merged_reverts: usize,
    single_interval: bool,
    fallbacks: &'a [Fallback],
}

pub fn run(cfg: &PipelineConfig, quiet: bool) -> anyhow::Result<()> {
    let original = read_daily(&cfg.daily_path(), "daily records")?;
    let reverts: Vec<DailyRecord> = original.iter().filter(|r| r.revert_label).cloned().collect();
    let count = cfg.synth.count;
    if count > 0 && reverts.is_empty() {
        return Err(PreconditionError("no revert records to oversample".into()).into());
    }
    if cfg.synth.k == 0 {
        return Err(UsageError("synth.k must be at least 1".into()).into());
    }

    let synth = if count == 0 {
        Vec::new()
    } else {
        let out = generate_reverts(
            &original,
            &SynthConfig {
                count,
                seed: cfg.seed,
                k: cfg.synth.k,
                date_range: cfg.synth.date_range.map(|[a, b]| (a, b)),
            },
        )?;
        for f in &out.fallbacks {
            log::warn!("{} interval {} had no original values; used all reverts", f.feature, f.interval);
        }
        if out.single_interval {
            log::warn!("fewer than four samples requested; all drawn from the first interval");
        }
        write_json(
            &cfg.out_path("balance_summary.json"),
            &BalanceSummary {
                original: original.len(),
                original_reverts: reverts.len(),
                synthetic: out.records.len(),
                merged: original.len() + out.records.len(),
                merged_reverts: reverts.len() + out.records.len(),
                single_interval: out.single_interval,
                fallbacks: &out.fallbacks,
            },
        )?;
        out.records
    };

    let merged = merge_balance(&original, &synth);
    write_with(&cfg.balanced_path(), |w| Ok(write_daily_jsonl(w, &merged)?))?;
    let rows = if synth.is_empty() {
        Vec::new()
    } else {
        fidelity_report(&reverts, &synth)?
    };
    write_with(&cfg.out_path("fidelity.csv"), |w| Ok(write_fidelity_csv(w, &rows)?))?;

    let merged_reverts = merged.iter().filter(|r| r.revert_label).count();
    say(
        quiet,
        format_args!(
            "balanced stream: {} records ({} original, {} synthetic); {} revert, {} non-revert",
            merged.len(),
            original.len(),
            synth.len(),
            merged_reverts,
            merged.len() - merged_reverts
        ),
    );
    Ok(())
}

use std::collections::BTreeSet;
use std::io::Write;

use revstream::explain::{decision_path, export_dot, render_nl, shortest_ensemble_path, Explanation};
use revstream::features::{FeatureSchema, FeatureVector};
use revstream::profile::ProfileStore;
use revstream::stream::{AnyModel, Checkpoint};

use crate::config::PipelineConfig;
use crate::io::{open, read_daily, read_vocab_opt, say, write_with};
use crate::PreconditionError;

pub fn run(cfg: &PipelineConfig, samples: &[usize], quiet: bool) -> anyhow::Result<()> {
    let ckpt_path = cfg.checkpoint_path();
    let checkpoint = Checkpoint::read_json(open(&ckpt_path, "checkpoint")?)?;
    if matches!(checkpoint.model, AnyModel::NaiveBayes(_)) {
        return Err(PreconditionError("naive Bayes checkpoints have no decision paths to explain".into()).into());
    }
    let records = read_daily(&cfg.balanced_path(), "balanced stream")?;
    let wanted: BTreeSet<usize> = samples.iter().copied().collect();
    if let Some(&bad) = wanted.iter().find(|&&i| i >= records.len()) {
        return Err(PreconditionError(format!(
            "unknown sample {bad}: the stream has {} records",
            records.len()
        ))
        .into());
    }

    let vocab_len = checkpoint.vocab_len;
    let schema = match read_vocab_opt(&cfg.vocab_path())? {
        Some(v) if v.len() == vocab_len => FeatureSchema::profile(&v),
        found => {
            if found.is_some() {
                log::warn!("vocabulary does not match the checkpoint; n-gram columns left unnamed");
            }
            FeatureSchema::Profile { terms: Vec::new() }
        }
    };

    // profiles as they stood when each sample was classified
    let last = *wanted.iter().next_back().expect("at least one sample");
    let mut profiles = ProfileStore::new();
    let mut vectors: Vec<(usize, FeatureVector)> = Vec::with_capacity(wanted.len());
    for (i, r) in records[..=last].iter().enumerate() {
        let profile = profiles.absorb(r)?;
        if wanted.contains(&i) {
            vectors.push((i, profile.feature_vector(vocab_len)?));
        }
    }

    let trees = checkpoint.model.decision_trees();
    let mut explanations: Vec<Explanation> = Vec::with_capacity(vectors.len());
    for (i, x) in &vectors {
        let id = i.to_string();
        let e = match &checkpoint.model {
            AnyModel::HoeffdingTree(_) => {
                if trees[0].n_features == 0 {
                    return Err(revstream::Error::NotTrained.into());
                }
                decision_path(&trees[0], x, &schema, &id, 0)?
            }
            _ => shortest_ensemble_path(&trees, x, &schema, &id)?,
        };
        let dot = export_dot(&trees[e.tree_id], &schema, Some(&e));
        let dot_path = cfg.out_path(&format!("tree_{}_sample_{}.dot", e.tree_id, i));
        write_with(&dot_path, |w| Ok(w.write_all(dot.as_bytes())?))?;
        say(quiet, format_args!("sample {i}: tree {} -> {}", e.tree_id, dot_path.display()));
        explanations.push(e);
    }

    let text: Vec<String> = explanations.iter().map(render_nl).collect();
    write_with(&cfg.out_path("explanations.txt"), |w| Ok(w.write_all(text.join("\n").as_bytes())?))?;
    if !quiet {
        print!("{}", text.join("\n"));
    }
    Ok(())
}

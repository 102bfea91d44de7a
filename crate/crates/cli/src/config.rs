//! Pipeline configuration read from a TOML file. Every field has a
//! default, and command-line flags override whatever the file says.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use revstream::analysis::MaxFeatures;
use revstream::stream::{EvalWindow, HoeffdingConfig};
use revstream::text::NgramConfig;

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    pub out_dir: PathBuf,
    pub paths: Paths,
    pub ngram: NgramSection,
    pub analysis: AnalysisSection,
    pub synth: SynthSection,
    pub stream: StreamSection,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            out_dir: PathBuf::from("out"),
            paths: Paths::default(),
            ngram: NgramSection::default(),
            analysis: AnalysisSection::default(),
            synth: SynthSection::default(),
            stream: StreamSection::default(),
        }
    }
}

/// Input and intermediate files. Intermediate files default to fixed
/// names under `out_dir` so the commands chain without extra flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub events: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub bad_words: Option<PathBuf>,
    pub reverted_words: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub daily: Option<PathBuf>,
    pub vocab: Option<PathBuf>,
    pub balanced: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NgramSection {
    pub word_range: [usize; 2],
    pub char_range: [usize; 2],
    pub max_df: f64,
    pub min_df: f64,
    pub max_features: Option<usize>,
}

impl Default for NgramSection {
    fn default() -> Self {
        let d = NgramConfig::default();
        Self {
            word_range: [d.word_range.0, d.word_range.1],
            char_range: [d.char_range.0, d.char_range.1],
            max_df: d.max_df,
            min_df: d.min_df,
            max_features: d.max_features,
        }
    }
}

impl NgramSection {
    pub fn to_config(&self) -> NgramConfig {
        NgramConfig {
            word_range: (self.word_range[0], self.word_range[1]),
            char_range: (self.char_range[0], self.char_range[1]),
            max_df: self.max_df,
            min_df: self.min_df,
            max_features: self.max_features,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    pub n_estimators: usize,
    pub max_depth: Option<usize>,
    pub max_features: MaxFeatures,
    /// Importance threshold; the mean importance when unset.
    pub threshold: Option<f64>,
    /// Keep this many non-revert records (uniformly drawn) for selection.
    pub non_revert_sample: Option<usize>,
    pub include_ngrams: bool,
    /// Cross-validation folds for the batch classifiers; 0 skips it.
    pub cv_folds: usize,
    pub ridge_alpha: f64,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self {
            n_estimators: 500,
            max_depth: None,
            max_features: MaxFeatures::Sqrt,
            threshold: None,
            non_revert_sample: None,
            include_ngrams: true,
            cv_folds: 0,
            ridge_alpha: 1.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSection {
    pub count: usize,
    pub k: usize,
    pub date_range: Option<[NaiveDate; 2]>,
}

impl Default for SynthSection {
    fn default() -> Self {
        Self {
            count: 40000,
            k: 2,
            date_range: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Nb,
    Ht,
    Arf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum WindowSpec {
    All,
    Last90,
    Last10,
}

impl WindowSpec {
    pub fn window(self) -> EvalWindow {
        match self {
            WindowSpec::All => EvalWindow::All,
            WindowSpec::Last90 => EvalWindow::Last(0.9),
            WindowSpec::Last10 => EvalWindow::Last(0.1),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StreamSection {
    pub model: ModelKind,
    pub eval_window: WindowSpec,
    pub warmup: usize,
    pub n_trees: usize,
    pub poisson_lambda: f64,
    pub grace_period: f64,
    pub split_confidence: f64,
    pub tie_threshold: f64,
    pub max_depth: Option<usize>,
}

impl Default for StreamSection {
    fn default() -> Self {
        let ht = HoeffdingConfig::default();
        Self {
            model: ModelKind::Arf,
            eval_window: WindowSpec::Last90,
            warmup: 1,
            n_trees: 10,
            poisson_lambda: 6.0,
            grace_period: ht.grace_period,
            split_confidence: ht.split_confidence,
            tie_threshold: ht.tie_threshold,
            max_depth: ht.max_depth,
        }
    }
}

impl StreamSection {
    pub fn hoeffding(&self) -> HoeffdingConfig {
        HoeffdingConfig {
            grace_period: self.grace_period,
            split_confidence: self.split_confidence,
            tie_threshold: self.tie_threshold,
            max_depth: self.max_depth,
            ..HoeffdingConfig::default()
        }
    }
}

/// Marks errors in the configuration or command line.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

impl PipelineConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).map_err(|e| UsageError(format!("config {}: {e}", path.display())).into())
    }

    pub fn out_path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    pub fn daily_path(&self) -> PathBuf {
        self.paths.daily.clone().unwrap_or_else(|| self.out_path("daily.jsonl"))
    }

    pub fn vocab_path(&self) -> PathBuf {
        self.paths.vocab.clone().unwrap_or_else(|| self.out_path("vocab.json"))
    }

    pub fn balanced_path(&self) -> PathBuf {
        self.paths.balanced.clone().unwrap_or_else(|| self.out_path("balanced.jsonl"))
    }

    pub fn checkpoint_path(&self) -> PathBuf {
        self.paths.checkpoint.clone().unwrap_or_else(|| self.out_path("checkpoint.json"))
    }
}

/// Fails with a usage error when a required input file is missing.
pub fn require_file(path: &Path, what: &str) -> anyhow::Result<()> {
    if !path.is_file() {
        bail!(UsageError(format!("{what} {} does not exist", path.display())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg: PipelineConfig = toml::from_str(
            r#"
            seed = 7
            [synth]
            count = 8
            date_range = ["2020-01-01", "2020-02-01"]
            [stream]
            model = "ht"
            eval_window = "last10"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.synth.count, 8);
        assert_eq!(cfg.synth.k, 2);
        assert_eq!(cfg.stream.model, ModelKind::Ht);
        assert_eq!(cfg.stream.eval_window.window(), EvalWindow::Last(0.1));
        assert_eq!(cfg.analysis.n_estimators, 500);
        assert_eq!(cfg.daily_path(), PathBuf::from("out/daily.jsonl"));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<PipelineConfig>("sed = 1").is_err());
    }
}

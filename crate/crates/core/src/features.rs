//! Column layout of the classifier feature space.
//!
//! A profile vector is laid out as 33 dense columns (two static flags
//! followed by 31 running averages, ORES blocks expanded one column per
//! probability), then the inserted-text n-gram block and the deleted-text
//! n-gram block. Each n-gram block holds the word n-grams followed by the
//! char n-grams of the fitted vocabulary.

use std::collections::BTreeMap;

use crate::text::{NgramKind, NgramVocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    /// Identifier-like flag, fixed at the first observation of an editor.
    Static,
    /// Running average of a probability in [0, 1].
    Probability,
    /// Running average of a polarity in [-1, 1].
    Polarity,
    /// Running average of a non-negative count or rate.
    Count,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenseFeature {
    /// snake_case key used in CSV reports.
    pub key: &'static str,
    /// Label used in explanations.
    pub label: &'static str,
    pub kind: FeatureKind,
}

const fn f(key: &'static str, label: &'static str, kind: FeatureKind) -> DenseFeature {
    DenseFeature { key, label, kind }
}

use FeatureKind::{Count, Polarity, Probability, Static};

pub const DENSE_LEN: usize = 33;
/// Index of the first running-average column.
pub const MEAN_OFFSET: usize = 2;
pub const MEAN_LEN: usize = DENSE_LEN - MEAN_OFFSET;

pub const BOT_FLAG: usize = 0;
pub const EDITOR_IS_CREATOR: usize = 1;
pub const AVG_REVISION_SIZE: usize = 24;
pub const AVG_REPEATED_LINKS: usize = 26;

pub static DENSE_FEATURES: [DenseFeature; DENSE_LEN] = [
    f("bot_flag", "Bot flag", Static),
    f("editor_is_creator", "Editor is the creator of the article", Static),
    f("avg_revisions_per_article", "The average number of revisions per article", Count),
    f("avg_revisions_per_week", "The average number of revisions per week", Count),
    f("avg_articles_per_week", "The average number of articles revised per week", Count),
    f("ores_damaging_false", "Average ORES edit quality probability - damagingFalseAvg", Probability),
    f("ores_damaging_true", "Average ORES edit quality probability - damagingTrueAvg", Probability),
    f("ores_goodfaith_false", "Average ORES edit quality probability - goodfaithFalseAvg", Probability),
    f("ores_goodfaith_true", "Average ORES edit quality probability - goodfaithTrueAvg", Probability),
    f("ores_item_a", "Average ORES item quality probability - AAvg", Probability),
    f("ores_item_b", "Average ORES item quality probability - BAvg", Probability),
    f("ores_item_c", "Average ORES item quality probability - CAvg", Probability),
    f("ores_item_d", "Average ORES item quality probability - DAvg", Probability),
    f("ores_item_e", "Average ORES item quality probability - EAvg", Probability),
    f("ores_article_ok", "Average ORES article quality probability - OKAvg", Probability),
    f("ores_article_attack", "Average ORES article quality probability - attackAvg", Probability),
    f("ores_article_spam", "Average ORES article quality probability - spamAvg", Probability),
    f("ores_article_vandalism", "Average ORES article quality probability - vandalismAvg", Probability),
    f("ores_wp10_b", "Average ORES article quality probability - WP10BAvg", Probability),
    f("ores_wp10_c", "Average ORES article quality probability - WP10CAvg", Probability),
    f("ores_wp10_fa", "Average ORES article quality probability - WP10FAAvg", Probability),
    f("ores_wp10_ga", "Average ORES article quality probability - WP10GAAvg", Probability),
    f("ores_wp10_start", "Average ORES article quality probability - WP10StartAvg", Probability),
    f("ores_wp10_stub", "Average ORES article quality probability - WP10StubAvg", Probability),
    f("avg_revision_size", "The average size of the revision", Count),
    f("avg_links", "The average number of links", Count),
    f("avg_repeated_links", "The average number of repeated links", Count),
    f("avg_reverted_words", "The average number of common reverted words", Count),
    f("avg_bad_words", "The average number of bad words", Count),
    f("avg_inserted_chars", "The average number of inserted characters", Count),
    f("avg_deleted_chars", "The average number of deleted characters", Count),
    f("avg_polarity_inserted", "The average polarity of inserted text", Polarity),
    f("avg_polarity_deleted", "The average polarity of deleted text", Polarity),
];

/// Dense columns followed by a sparse tail.
///
/// Sparse keys are absolute column indices, all `>= dense.len()` and
/// `< len`. Absent keys read as zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureVector {
    pub dense: Vec<f64>,
    pub sparse: BTreeMap<u32, f64>,
    len: usize,
}

impl FeatureVector {
    pub fn new(dense: Vec<f64>, sparse: BTreeMap<u32, f64>, len: usize) -> Self {
        debug_assert!(len >= dense.len());
        debug_assert!(sparse
            .keys()
            .all(|&k| (k as usize) >= dense.len() && (k as usize) < len));
        Self { dense, sparse, len }
    }

    pub fn from_dense(dense: Vec<f64>) -> Self {
        let len = dense.len();
        Self {
            dense,
            sparse: BTreeMap::new(),
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> f64 {
        if i < self.dense.len() {
            self.dense[i]
        } else {
            self.sparse.get(&(i as u32)).copied().unwrap_or(0.0)
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.dense.iter().chain(self.sparse.values()).all(|v| v.is_finite())
    }
}

/// Read access to one sample's feature values, dense or sparse.
pub trait FeatureAccess {
    fn n_features(&self) -> usize;
    fn value(&self, i: usize) -> f64;
}

impl FeatureAccess for FeatureVector {
    fn n_features(&self) -> usize {
        self.len
    }
    fn value(&self, i: usize) -> f64 {
        self.get(i)
    }
}

impl FeatureAccess for [f64] {
    fn n_features(&self) -> usize {
        self.len()
    }
    fn value(&self, i: usize) -> f64 {
        self[i]
    }
}

impl FeatureAccess for Vec<f64> {
    fn n_features(&self) -> usize {
        self.len()
    }
    fn value(&self, i: usize) -> f64 {
        self[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextBlock {
    Inserted,
    Deleted,
}

/// What one column of the feature space means.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureName<'a> {
    Dense(&'static DenseFeature),
    Ngram {
        block: TextBlock,
        kind: NgramKind,
        term: &'a str,
    },
    Generic(usize),
}

impl FeatureName<'_> {
    pub fn label(&self) -> String {
        match self {
            FeatureName::Dense(d) => d.label.to_string(),
            FeatureName::Ngram { block, term, .. } => match block {
                TextBlock::Inserted => format!("Inserted n-gram '{term}'"),
                TextBlock::Deleted => format!("Deleted n-gram '{term}'"),
            },
            FeatureName::Generic(i) => format!("feature{i}"),
        }
    }
}

/// Resolves column indices to names.
#[derive(Debug, Clone)]
pub enum FeatureSchema {
    /// Plain numbered columns (`feature0`, `feature1`, ...).
    Generic(usize),
    /// Profile layout over a fitted vocabulary.
    Profile { terms: Vec<(NgramKind, String)> },
}

impl FeatureSchema {
    pub fn generic(n: usize) -> Self {
        FeatureSchema::Generic(n)
    }

    pub fn profile(vocab: &NgramVocabulary) -> Self {
        FeatureSchema::Profile {
            terms: vocab.terms(),
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            FeatureSchema::Generic(n) => *n,
            FeatureSchema::Profile { terms } => profile_len(terms.len()),
        }
    }

    pub fn name(&self, i: usize) -> FeatureName<'_> {
        match self {
            FeatureSchema::Generic(_) => FeatureName::Generic(i),
            FeatureSchema::Profile { terms } => {
                if i < DENSE_LEN {
                    return FeatureName::Dense(&DENSE_FEATURES[i]);
                }
                let v = terms.len();
                let j = i - DENSE_LEN;
                let (block, k) = if j < v {
                    (TextBlock::Inserted, j)
                } else {
                    (TextBlock::Deleted, j - v)
                };
                match terms.get(k) {
                    Some((kind, term)) => FeatureName::Ngram {
                        block,
                        kind: *kind,
                        term,
                    },
                    None => FeatureName::Generic(i),
                }
            }
        }
    }
}

/// Width of a profile vector over a vocabulary of `vocab_len` terms.
pub fn profile_len(vocab_len: usize) -> usize {
    DENSE_LEN + 2 * vocab_len
}

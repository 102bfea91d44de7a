use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::data::SparseCounts;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NgramConfig {
    /// Inclusive word n-gram lengths.
    pub word_range: (usize, usize),
    /// Inclusive char n-gram lengths.
    pub char_range: (usize, usize),
    /// Maximum document frequency as a fraction of the corpus.
    pub max_df: f64,
    /// Minimum document frequency as a fraction of the corpus.
    pub min_df: f64,
    /// Keep only the most frequent terms when set.
    pub max_features: Option<usize>,
}

impl Default for NgramConfig {
    fn default() -> Self {
        Self {
            word_range: (1, 4),
            char_range: (1, 4),
            max_df: 0.7,
            min_df: 0.001,
            max_features: None,
        }
    }
}

impl NgramConfig {
    fn validate(&self) -> Result<()> {
        let ok_range = |(lo, hi): (usize, usize)| lo >= 1 && lo <= hi;
        if !ok_range(self.word_range) || !ok_range(self.char_range) {
            return Err(Error::InvalidParameter("n-gram ranges must satisfy 1 <= lo <= hi".into()));
        }
        if !(0.0..=1.0).contains(&self.min_df) || !(0.0..=1.0).contains(&self.max_df) {
            return Err(Error::InvalidParameter("min_df and max_df must lie in [0, 1]".into()));
        }
        if self.min_df > self.max_df {
            return Err(Error::InvalidParameter("min_df exceeds max_df".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NgramKind {
    Word,
    Char,
}

/// Fitted word and char n-gram vocabularies.
///
/// Word and char spaces are concatenated, words first: a word n-gram with
/// index `i` maps to column `i`, a char n-gram with index `j` to column
/// `word_len() + j`. Indices within each space follow lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NgramVocabulary {
    pub config: NgramConfig,
    pub word_ngrams: BTreeMap<String, u32>,
    pub char_ngrams: BTreeMap<String, u32>,
}

impl NgramVocabulary {
    pub fn word_len(&self) -> usize {
        self.word_ngrams.len()
    }

    /// Total number of columns (word + char).
    pub fn len(&self) -> usize {
        self.word_ngrams.len() + self.char_ngrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn column(&self, kind: NgramKind, ngram: &str) -> Option<u32> {
        match kind {
            NgramKind::Word => self.word_ngrams.get(ngram).copied(),
            NgramKind::Char => self
                .char_ngrams
                .get(ngram)
                .map(|j| j + self.word_ngrams.len() as u32),
        }
    }

    /// Terms in column order.
    pub fn terms(&self) -> Vec<(NgramKind, String)> {
        let mut out = vec![(NgramKind::Word, String::new()); self.len()];
        for (t, &i) in &self.word_ngrams {
            out[i as usize] = (NgramKind::Word, t.clone());
        }
        let w = self.word_len();
        for (t, &j) in &self.char_ngrams {
            out[w + j as usize] = (NgramKind::Char, t.clone());
        }
        out
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    pub fn read_json<R: Read>(r: R) -> Result<Self> {
        let vocab: Self = serde_json::from_reader(r)?;
        let dense = |m: &BTreeMap<String, u32>| {
            let mut idx: Vec<u32> = m.values().copied().collect();
            idx.sort_unstable();
            idx.iter().enumerate().all(|(i, &v)| v as usize == i)
        };
        if !dense(&vocab.word_ngrams) || !dense(&vocab.char_ngrams) {
            return Err(Error::InvalidParameter("vocabulary indices are not dense".into()));
        }
        Ok(vocab)
    }
}

pub(crate) fn word_ngrams(tokens: &[String], (lo, hi): (usize, usize)) -> Vec<String> {
    let mut out = Vec::new();
    for n in lo..=hi {
        if n > tokens.len() {
            break;
        }
        out.extend(tokens.windows(n).map(|w| w.join(" ")));
    }
    out
}

pub(crate) fn char_ngrams(tokens: &[String], (lo, hi): (usize, usize)) -> Vec<String> {
    let text: Vec<char> = tokens.join(" ").chars().collect();
    let mut out = Vec::new();
    for n in lo..=hi {
        if n > text.len() {
            break;
        }
        out.extend(text.windows(n).map(|w| w.iter().collect::<String>()));
    }
    out
}

/// Builds the vocabulary from normalized documents, keeping n-grams whose
/// document frequency fraction lies in `[min_df, max_df]`.
pub fn fit_ngram_vocabulary(documents: &[Vec<String>], config: NgramConfig) -> Result<NgramVocabulary> {
    config.validate()?;
    if documents.is_empty() {
        return Err(Error::EmptyInput("n-gram corpus"));
    }
    let n_docs = documents.len() as f64;
    let word_counts = document_frequencies(documents, |d| word_ngrams(d, config.word_range));
    let char_counts = document_frequencies(documents, |d| char_ngrams(d, config.char_range));

    let keep = |counts: HashMap<String, (usize, usize)>| -> Vec<(String, usize)> {
        counts
            .into_iter()
            .filter(|(_, (df, _))| {
                let frac = *df as f64 / n_docs;
                frac >= config.min_df && frac <= config.max_df
            })
            .map(|(t, (_, tf))| (t, tf))
            .collect()
    };
    let mut words = keep(word_counts);
    let mut chars = keep(char_counts);

    if let Some(limit) = config.max_features {
        // rank both spaces together by corpus frequency, ties lexicographic
        let mut all: Vec<(NgramKind, String, usize)> = words
            .drain(..)
            .map(|(t, tf)| (NgramKind::Word, t, tf))
            .chain(chars.drain(..).map(|(t, tf)| (NgramKind::Char, t, tf)))
            .collect();
        all.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| (a.0, &a.1).cmp(&(b.0, &b.1))));
        all.truncate(limit);
        for (kind, t, tf) in all {
            match kind {
                NgramKind::Word => words.push((t, tf)),
                NgramKind::Char => chars.push((t, tf)),
            }
        }
    }

    let index = |mut terms: Vec<(String, usize)>| -> BTreeMap<String, u32> {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        terms
            .into_iter()
            .enumerate()
            .map(|(i, (t, _))| (t, i as u32))
            .collect()
    };
    Ok(NgramVocabulary {
        config,
        word_ngrams: index(words),
        char_ngrams: index(chars),
    })
}

/// term -> (document frequency, total term frequency)
fn document_frequencies<F>(documents: &[Vec<String>], extract: F) -> HashMap<String, (usize, usize)>
where
    F: Fn(&[String]) -> Vec<String>,
{
    let mut counts: HashMap<String, (usize, usize)> = HashMap::new();
    for doc in documents {
        let grams = extract(doc);
        let mut seen = HashSet::new();
        for g in grams {
            let entry = counts.entry(g.clone()).or_default();
            entry.1 += 1;
            if seen.insert(g) {
                entry.0 += 1;
            }
        }
    }
    counts
}

/// Counts of in-vocabulary n-grams in `tokens`, keyed by column.
pub fn vectorize(tokens: &[String], vocab: &NgramVocabulary) -> SparseCounts {
    let mut out = SparseCounts::new();
    for g in word_ngrams(tokens, vocab.config.word_range) {
        if let Some(i) = vocab.column(NgramKind::Word, &g) {
            *out.entry(i).or_insert(0) += 1;
        }
    }
    for g in char_ngrams(tokens, vocab.config.char_range) {
        if let Some(i) = vocab.column(NgramKind::Char, &g) {
            *out.entry(i).or_insert(0) += 1;
        }
    }
    out
}

//! Incremental editor profiles.
//!
//! Each daily record updates its editor's profile: the two identifier flags
//! are fixed at the first record, the 31 averaged columns keep running
//! means, and the n-gram maps keep running sums.

use std::collections::BTreeMap;
use std::io::Write;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::data::{DailyRecord, SparseCounts};
use crate::features::{profile_len, FeatureVector, DENSE_LEN, MEAN_LEN, MEAN_OFFSET};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RunningMean {
    pub mean: f64,
    pub count: u64,
}

impl RunningMean {
    pub fn update(&mut self, value: f64) {
        self.count += 1;
        self.mean += (value - self.mean) / self.count as f64;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EditorProfile {
    pub editor_id: String,
    pub bot_flag: bool,
    pub editor_is_creator: bool,
    pub means: Vec<RunningMean>,
    pub inserted_ngrams: SparseCounts,
    pub deleted_ngrams: SparseCounts,
    pub last_updated: Option<NaiveDate>,
}

impl EditorProfile {
    /// Empty profile; the static flags are taken from the first record.
    pub fn new(editor_id: impl Into<String>) -> Self {
        Self {
            editor_id: editor_id.into(),
            bot_flag: false,
            editor_is_creator: false,
            means: vec![RunningMean::default(); MEAN_LEN],
            inserted_ngrams: SparseCounts::new(),
            deleted_ngrams: SparseCounts::new(),
            last_updated: None,
        }
    }

    pub fn observation_count(&self) -> u64 {
        self.means.first().map_or(0, |m| m.count)
    }

    /// Absorbs one daily record.
    pub fn update(&mut self, record: &DailyRecord) -> Result<()> {
        if record.editor_id != self.editor_id {
            return Err(Error::EditorMismatch {
                profile: self.editor_id.clone(),
                record: record.editor_id.clone(),
            });
        }
        match self.last_updated {
            Some(last) if record.date < last => {
                return Err(Error::TimeRegression {
                    last: last.to_string(),
                    record: record.date.to_string(),
                })
            }
            Some(_) => {
                if record.bot_flag != self.bot_flag || record.editor_is_creator != self.editor_is_creator {
                    log::debug!(
                        "editor {}: static flags changed on {}, keeping first values",
                        self.editor_id,
                        record.date
                    );
                }
            }
            None => {
                self.bot_flag = record.bot_flag;
                self.editor_is_creator = record.editor_is_creator;
            }
        }
        for (m, v) in self.means.iter_mut().zip(record.mean_values()) {
            m.update(v);
        }
        crate::data::merge_counts(&mut self.inserted_ngrams, &record.inserted_ngrams);
        crate::data::merge_counts(&mut self.deleted_ngrams, &record.deleted_ngrams);
        self.last_updated = Some(record.date);
        Ok(())
    }

    /// Current state as a classifier input over a vocabulary of
    /// `vocab_len` columns: 33 dense columns, then the inserted block, then
    /// the deleted block.
    pub fn feature_vector(&self, vocab_len: usize) -> Result<FeatureVector> {
        if self.observation_count() == 0 {
            return Err(Error::NotTrained);
        }
        let mut dense = Vec::with_capacity(DENSE_LEN);
        dense.push(self.bot_flag as u8 as f64);
        dense.push(self.editor_is_creator as u8 as f64);
        dense.extend(self.means.iter().map(|m| m.mean));
        debug_assert_eq!(dense.len(), MEAN_OFFSET + MEAN_LEN);

        let mut sparse = BTreeMap::new();
        for (block, counts) in [&self.inserted_ngrams, &self.deleted_ngrams].into_iter().enumerate() {
            let offset = DENSE_LEN + block * vocab_len;
            for (&k, &v) in counts {
                if (k as usize) < vocab_len && v > 0 {
                    sparse.insert((offset + k as usize) as u32, v as f64);
                }
            }
        }
        Ok(FeatureVector::new(dense, sparse, profile_len(vocab_len)))
    }
}

/// Profiles keyed by editor id, created on first sight.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ProfileStore {
    profiles: BTreeMap<String, EditorProfile>,
}

impl ProfileStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn absorb(&mut self, record: &DailyRecord) -> Result<&EditorProfile> {
        let profile = self
            .profiles
            .entry(record.editor_id.clone())
            .or_insert_with(|| EditorProfile::new(record.editor_id.clone()));
        profile.update(record)?;
        Ok(profile)
    }

    pub fn get(&self, editor_id: &str) -> Option<&EditorProfile> {
        self.profiles.get(editor_id)
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EditorProfile> {
        self.profiles.values()
    }

    /// One JSON profile per line, ordered by editor id.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for p in self.profiles.values() {
            serde_json::to_writer(&mut w, p)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

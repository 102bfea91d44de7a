use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, Write};

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use super::event::ReviewEvent;
use super::ores::{ArticleQuality, EditQuality, ItemQuality, OresScores, Wp10, ORES_LEN};
use crate::features::{DENSE_FEATURES, DENSE_LEN, MEAN_LEN, MEAN_OFFSET};
use crate::text::{normalize_text, vectorize, NgramVocabulary, WordList};
use crate::{Error, Result};

/// Sparse n-gram counts keyed by vocabulary column.
pub type SparseCounts = BTreeMap<u32, u64>;

/// One editor's activity on one UTC calendar day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailyRecord {
    pub editor_id: String,
    pub date: NaiveDate,
    pub bot_flag: bool,
    pub editor_is_creator: bool,
    pub avg_revisions_per_article: f64,
    pub avg_revisions_per_week: f64,
    pub avg_articles_per_week: f64,
    pub avg_ores_edit_quality: EditQuality,
    pub avg_ores_item_quality: ItemQuality,
    pub avg_ores_article_quality: ArticleQuality,
    pub avg_ores_wp10: Wp10,
    pub avg_revision_size: f64,
    pub avg_links: f64,
    pub avg_repeated_links: f64,
    pub avg_reverted_words: f64,
    pub avg_bad_words: f64,
    pub avg_inserted_chars: f64,
    pub avg_deleted_chars: f64,
    pub avg_polarity_inserted: f64,
    pub avg_polarity_deleted: f64,
    pub inserted_ngrams: SparseCounts,
    pub deleted_ngrams: SparseCounts,
    pub revert_label: bool,
    #[serde(default)]
    pub synthetic: bool,
    /// Number of reviews folded into this record (0 for synthetic ones).
    #[serde(default)]
    pub n_reviews: u64,
}

impl DailyRecord {
    pub fn ores(&self) -> OresScores {
        OresScores {
            edit: self.avg_ores_edit_quality,
            item: self.avg_ores_item_quality,
            article: self.avg_ores_article_quality,
            wp10: self.avg_ores_wp10,
        }
    }

    /// The 31 averaged columns in feature-layout order.
    pub fn mean_values(&self) -> [f64; MEAN_LEN] {
        let mut out = [0.0; MEAN_LEN];
        out[0] = self.avg_revisions_per_article;
        out[1] = self.avg_revisions_per_week;
        out[2] = self.avg_articles_per_week;
        out[3..3 + ORES_LEN].copy_from_slice(&self.ores().to_array());
        out[22..].copy_from_slice(&[
            self.avg_revision_size,
            self.avg_links,
            self.avg_repeated_links,
            self.avg_reverted_words,
            self.avg_bad_words,
            self.avg_inserted_chars,
            self.avg_deleted_chars,
            self.avg_polarity_inserted,
            self.avg_polarity_deleted,
        ]);
        out
    }

    pub fn set_mean_values(&mut self, v: &[f64; MEAN_LEN]) {
        self.avg_revisions_per_article = v[0];
        self.avg_revisions_per_week = v[1];
        self.avg_articles_per_week = v[2];
        let ores = OresScores::from_slice(&v[3..3 + ORES_LEN]);
        self.avg_ores_edit_quality = ores.edit;
        self.avg_ores_item_quality = ores.item;
        self.avg_ores_article_quality = ores.article;
        self.avg_ores_wp10 = ores.wp10;
        self.avg_revision_size = v[22];
        self.avg_links = v[23];
        self.avg_repeated_links = v[24];
        self.avg_reverted_words = v[25];
        self.avg_bad_words = v[26];
        self.avg_inserted_chars = v[27];
        self.avg_deleted_chars = v[28];
        self.avg_polarity_inserted = v[29];
        self.avg_polarity_deleted = v[30];
    }

    /// All dense columns with flags encoded as 0/1.
    pub fn dense_values(&self) -> [f64; DENSE_LEN] {
        let mut out = [0.0; DENSE_LEN];
        out[0] = self.bot_flag as u8 as f64;
        out[1] = self.editor_is_creator as u8 as f64;
        out[MEAN_OFFSET..].copy_from_slice(&self.mean_values());
        out
    }

    pub fn label(&self) -> usize {
        self.revert_label as usize
    }
}

struct EditorHistory {
    reviews: u64,
    articles: HashSet<String>,
    first_week: i64,
}

/// Monday-aligned week number; ISO weeks always start on Monday so
/// consecutive values are consecutive ISO weeks.
fn week_index(day: NaiveDate) -> i64 {
    let monday = day.num_days_from_ce() as i64 - day.weekday().num_days_from_monday() as i64;
    monday.div_euclid(7)
}

/// Collapses individual reviews into one record per (editor, UTC day).
///
/// Per-review numeric fields are averaged over the day; n-gram maps are the
/// sum over the day's texts; the three rate features use the editor's
/// whole history up to and including the day; the day is labelled revert
/// when any of its reviews was reverted. Output is sorted by
/// (date, editor_id).
pub fn aggregate_daily(
    events: &[ReviewEvent],
    vocab: &NgramVocabulary,
    stopwords: &WordList,
) -> Vec<DailyRecord> {
    let mut groups: BTreeMap<(NaiveDate, &str), Vec<&ReviewEvent>> = BTreeMap::new();
    for e in events {
        groups
            .entry((e.date.date_naive(), e.editor.id.as_str()))
            .or_default()
            .push(e);
    }

    let mut history: HashMap<&str, EditorHistory> = HashMap::new();
    let mut out = Vec::with_capacity(groups.len());
    for ((day, editor), mut day_events) in groups {
        // canonical order so that float sums ignore input order
        day_events.sort_by(|a, b| {
            (a.date, &a.review_id, &a.article).cmp(&(b.date, &b.review_id, &b.article))
        });

        let h = history.entry(editor).or_insert_with(|| EditorHistory {
            reviews: 0,
            articles: HashSet::new(),
            first_week: week_index(day),
        });
        h.reviews += day_events.len() as u64;
        for e in &day_events {
            h.articles.insert(e.article.clone());
        }
        let weeks = (week_index(day) - h.first_week + 1).max(1) as f64;
        let articles = h.articles.len().max(1) as f64;

        let n = day_events.len() as f64;
        let mean = |f: &dyn Fn(&ReviewEvent) -> f64| day_events.iter().map(|e| f(e)).sum::<f64>() / n;

        let mut ores = [0.0; ORES_LEN];
        for e in &day_events {
            for (acc, v) in ores.iter_mut().zip(e.ores().to_array()) {
                *acc += v;
            }
        }
        for v in &mut ores {
            *v = (*v / n).clamp(0.0, 1.0);
        }
        let ores = OresScores::from_slice(&ores);

        let mut inserted = SparseCounts::new();
        let mut deleted = SparseCounts::new();
        for e in &day_events {
            merge_counts(&mut inserted, &vectorize(&normalize_text(&e.inserted_text, stopwords), vocab));
            merge_counts(&mut deleted, &vectorize(&normalize_text(&e.deleted_text, stopwords), vocab));
        }

        out.push(DailyRecord {
            editor_id: editor.to_string(),
            date: day,
            bot_flag: day_events.iter().any(|e| e.bot_flag),
            editor_is_creator: day_events.iter().any(|e| e.editor_is_creator),
            avg_revisions_per_article: h.reviews as f64 / articles,
            avg_revisions_per_week: h.reviews as f64 / weeks,
            avg_articles_per_week: h.articles.len() as f64 / weeks,
            avg_ores_edit_quality: ores.edit,
            avg_ores_item_quality: ores.item,
            avg_ores_article_quality: ores.article,
            avg_ores_wp10: ores.wp10,
            avg_revision_size: mean(&|e| e.revision_size as f64),
            avg_links: mean(&|e| e.n_links as f64),
            avg_repeated_links: mean(&|e| e.n_repeated_links as f64),
            avg_reverted_words: mean(&|e| e.n_reverted_words as f64),
            avg_bad_words: mean(&|e| e.n_bad_words as f64),
            avg_inserted_chars: mean(&|e| e.n_inserted_chars as f64),
            avg_deleted_chars: mean(&|e| e.n_deleted_chars as f64),
            avg_polarity_inserted: mean(&|e| e.polarity_inserted).clamp(-1.0, 1.0),
            avg_polarity_deleted: mean(&|e| e.polarity_deleted).clamp(-1.0, 1.0),
            inserted_ngrams: inserted,
            deleted_ngrams: deleted,
            revert_label: day_events.iter().any(|e| e.revert_flag),
            synthetic: false,
            n_reviews: day_events.len() as u64,
        });
    }
    out
}

pub(crate) fn merge_counts(into: &mut SparseCounts, from: &SparseCounts) {
    for (&k, &v) in from {
        *into.entry(k).or_insert(0) += v;
    }
}

pub fn write_daily_jsonl<W: Write>(mut w: W, records: &[DailyRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_daily_jsonl<R: BufRead>(reader: R) -> Result<Vec<DailyRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: DailyRecord = serde_json::from_str(&line).map_err(|e| {
            Error::InvalidParameter(format!("daily record line {}: {e}", i + 1))
        })?;
        out.push(rec);
    }
    Ok(out)
}

fn sparse_field(counts: &SparseCounts) -> String {
    counts
        .iter()
        .map(|(k, v)| format!("{k}:{v}"))
        .collect::<Vec<_>>()
        .join("|")
}

/// CSV with one column per dense feature; n-gram maps as `key:count`
/// pairs joined by `|`.
pub fn write_daily_csv<W: Write>(w: W, records: &[DailyRecord]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec!["editor_id", "date"];
    header.extend(DENSE_FEATURES.iter().map(|f| f.key));
    header.extend(["inserted_ngrams", "deleted_ngrams", "revert_label", "synthetic", "n_reviews"]);
    wtr.write_record(&header)?;
    for r in records {
        let mut row = vec![r.editor_id.clone(), r.date.to_string()];
        row.extend(r.dense_values().iter().map(|v| v.to_string()));
        row.push(sparse_field(&r.inserted_ngrams));
        row.push(sparse_field(&r.deleted_ngrams));
        row.push(r.revert_label.to_string());
        row.push(r.synthetic.to_string());
        row.push(r.n_reviews.to_string());
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::event::tests::sample_event;
    use crate::text::NgramConfig;
    use chrono::{TimeZone, Utc};

    fn empty_vocab() -> NgramVocabulary {
        NgramVocabulary {
            config: NgramConfig::default(),
            word_ngrams: BTreeMap::new(),
            char_ngrams: BTreeMap::new(),
        }
    }

    #[test]
    fn empty_input_gives_empty_output() {
        assert!(aggregate_daily(&[], &empty_vocab(), &WordList::default()).is_empty());
    }

    #[test]
    fn same_day_sizes_are_averaged() {
        let mut a = sample_event("r1");
        let mut b = sample_event("r2");
        a.revision_size = 10;
        b.revision_size = 20;
        b.date = Utc.with_ymd_and_hms(2019, 3, 4, 23, 59, 59).unwrap();
        let out = aggregate_daily(&[a, b], &empty_vocab(), &WordList::default());
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].avg_revision_size, 15.0);
        assert_eq!(out[0].n_reviews, 2);
    }

    #[test]
    fn single_review_is_identity() {
        let e = sample_event("r1");
        let out = aggregate_daily(std::slice::from_ref(&e), &empty_vocab(), &WordList::default());
        let r = &out[0];
        assert_eq!(r.avg_revision_size, e.revision_size as f64);
        assert_eq!(r.avg_links, e.n_links as f64);
        assert_eq!(r.avg_polarity_inserted, e.polarity_inserted);
        assert_eq!(r.ores(), e.ores());
        assert_eq!(r.avg_revisions_per_article, 1.0);
        assert_eq!(r.avg_revisions_per_week, 1.0);
        assert_eq!(r.avg_articles_per_week, 1.0);
        assert!(!r.revert_label);
    }

    #[test]
    fn any_revert_marks_the_day() {
        let a = sample_event("r1");
        let mut b = sample_event("r2");
        b.revert_flag = true;
        let out = aggregate_daily(&[a, b], &empty_vocab(), &WordList::default());
        assert!(out[0].revert_label);
    }

    #[test]
    fn rates_span_iso_weeks() {
        // 2019-03-04 is a Monday; 2019-03-18 is two weeks later
        let a = sample_event("r1");
        let mut b = sample_event("r2");
        b.date = Utc.with_ymd_and_hms(2019, 3, 18, 8, 0, 0).unwrap();
        b.article = "Porto".into();
        let out = aggregate_daily(&[a, b], &empty_vocab(), &WordList::default());
        assert_eq!(out.len(), 2);
        assert_eq!(out[1].avg_revisions_per_week, 2.0 / 3.0);
        assert_eq!(out[1].avg_articles_per_week, 2.0 / 3.0);
        assert_eq!(out[1].avg_revisions_per_article, 1.0);
    }

    #[test]
    fn week_index_is_monday_aligned() {
        let sun = NaiveDate::from_ymd_opt(2019, 3, 3).unwrap();
        let mon = NaiveDate::from_ymd_opt(2019, 3, 4).unwrap();
        let next_sun = NaiveDate::from_ymd_opt(2019, 3, 10).unwrap();
        assert_eq!(week_index(sun) + 1, week_index(mon));
        assert_eq!(week_index(mon), week_index(next_sun));
    }

    #[test]
    fn csv_serializes_sparse_maps() {
        let mut r = aggregate_daily(&[sample_event("r1")], &empty_vocab(), &WordList::default());
        r[0].inserted_ngrams = [(3, 2), (7, 1)].into_iter().collect();
        let mut buf = Vec::new();
        write_daily_csv(&mut buf, &r).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("3:2|7:1"));
        assert_eq!(text.lines().count(), 2);
    }
}

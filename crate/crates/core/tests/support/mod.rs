#![allow(dead_code)]

pub mod dot;

use chrono::{Duration, NaiveDate, TimeZone, Utc};
use rand::Rng;

use revstream::data::{
    ArticleQuality, DailyRecord, EditQuality, ItemQuality, OresScores, Party, ReviewEvent, SparseCounts, Wp10,
    ORES_LEN,
};
use revstream::features::MEAN_LEN;

pub fn day(offset: i64) -> NaiveDate {
    NaiveDate::from_ymd_opt(2019, 1, 1).unwrap() + Duration::days(offset)
}

/// A record with every averaged column at zero.
pub fn record(editor: &str, date: NaiveDate, revert: bool) -> DailyRecord {
    DailyRecord {
        editor_id: editor.to_string(),
        date,
        bot_flag: false,
        editor_is_creator: false,
        avg_revisions_per_article: 0.0,
        avg_revisions_per_week: 0.0,
        avg_articles_per_week: 0.0,
        avg_ores_edit_quality: EditQuality::default(),
        avg_ores_item_quality: ItemQuality::default(),
        avg_ores_article_quality: ArticleQuality::default(),
        avg_ores_wp10: Wp10::default(),
        avg_revision_size: 0.0,
        avg_links: 0.0,
        avg_repeated_links: 0.0,
        avg_reverted_words: 0.0,
        avg_bad_words: 0.0,
        avg_inserted_chars: 0.0,
        avg_deleted_chars: 0.0,
        avg_polarity_inserted: 0.0,
        avg_polarity_deleted: 0.0,
        inserted_ngrams: SparseCounts::new(),
        deleted_ngrams: SparseCounts::new(),
        revert_label: revert,
        synthetic: false,
        n_reviews: 1,
    }
}

fn probs<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|v| v / s).collect()
}

/// ORES blocks with each block summing to one; `damaging` sets the
/// damaging-true probability.
pub fn ores<R: Rng>(rng: &mut R, damaging: f64) -> OresScores {
    let mut v = Vec::with_capacity(ORES_LEN);
    v.extend([1.0 - damaging, damaging, damaging, 1.0 - damaging]);
    v.extend(probs(rng, 5));
    v.extend(probs(rng, 4));
    v.extend(probs(rng, 6));
    OresScores::from_slice(&v)
}

/// A record with random but plausible averaged columns.
pub fn random_record<R: Rng>(rng: &mut R, editor: &str, date: NaiveDate, revert: bool) -> DailyRecord {
    let mut r = record(editor, date, revert);
    let mut means = [0.0; MEAN_LEN];
    for (i, m) in means.iter_mut().enumerate() {
        *m = match i {
            3..=21 => 0.0,
            29 | 30 => rng.random_range(-1.0..=1.0),
            _ => rng.random_range(0.0..500.0),
        };
    }
    r.set_mean_values(&means);
    let damaging = rng.random_range(0.0..=1.0);
    let o = ores(rng, damaging);
    r.avg_ores_edit_quality = o.edit;
    r.avg_ores_item_quality = o.item;
    r.avg_ores_article_quality = o.article;
    r.avg_ores_wp10 = o.wp10;
    r.bot_flag = rng.random_bool(0.1);
    r
}

/// A review event at `date` + `hour`.
pub fn event(review: &str, editor: &str, date: NaiveDate, hour: u32) -> ReviewEvent {
    let dt = Utc.from_utc_datetime(&date.and_hms_opt(hour, 0, 0).unwrap());
    ReviewEvent {
        date: dt,
        review_id: review.to_string(),
        editor: Party {
            name: editor.to_string(),
            id: editor.to_string(),
        },
        creator: Party {
            name: "creator".into(),
            id: "c".into(),
        },
        article: "article".into(),
        bot_flag: false,
        editor_is_creator: false,
        revision_size: 0,
        n_links: 0,
        n_repeated_links: 0,
        inserted_text: String::new(),
        deleted_text: String::new(),
        n_inserted_chars: 0,
        n_deleted_chars: 0,
        n_reverted_words: 0,
        n_bad_words: 0,
        polarity_inserted: 0.0,
        polarity_deleted: 0.0,
        ores_edit_quality: EditQuality {
            damaging_false: 1.0,
            damaging_true: 0.0,
            goodfaith_false: 0.0,
            goodfaith_true: 1.0,
        },
        ores_item_quality: ItemQuality::default(),
        ores_article_quality: ArticleQuality::default(),
        ores_wp10: Wp10::default(),
        revert_flag: false,
    }
}

/// Daily records of editors with fixed roles over `days` days, sorted by
/// date. Vandals have high damaging probabilities, small revisions and
/// negative polarity; every one of their days is a revert.
pub fn separable_stream<R: Rng>(rng: &mut R, n: usize, editors: usize, days: i64) -> Vec<DailyRecord> {
    let mut out: Vec<DailyRecord> = (0..n)
        .map(|_| {
            let e = rng.random_range(0..editors);
            let vandal = e % 2 == 1;
            let date = day(rng.random_range(0..days));
            let mut r = random_record(rng, &format!("editor{e:04}"), date, vandal);
            let damaging = if vandal {
                rng.random_range(0.6..0.95)
            } else {
                rng.random_range(0.02..0.4)
            };
            let o = ores(rng, damaging);
            r.avg_ores_edit_quality = o.edit;
            r.avg_revision_size = if vandal {
                rng.random_range(5.0..80.0)
            } else {
                rng.random_range(60.0..900.0)
            };
            r.avg_polarity_inserted = if vandal {
                rng.random_range(-0.9..0.1)
            } else {
                rng.random_range(-0.1..0.9)
            };
            r
        })
        .collect();
    out.sort_by(|a, b| (a.date, &a.editor_id).cmp(&(b.date, &b.editor_id)));
    out
}

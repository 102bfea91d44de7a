use std::fmt;
use std::io::{BufRead, Write};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::ores::{ArticleQuality, EditQuality, ItemQuality, OresScores, Wp10};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Party {
    pub name: String,
    pub id: String,
}

/// One timestamped wiki edit with its side features, precomputed ORES
/// probabilities and the inserted/deleted text of the diff.
///
/// Character counts are taken from the source as-is and may disagree with
/// the cleaned text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewEvent {
    #[serde(with = "second_precision")]
    pub date: DateTime<Utc>,
    pub review_id: String,
    pub editor: Party,
    pub creator: Party,
    pub article: String,
    pub bot_flag: bool,
    pub editor_is_creator: bool,
    pub revision_size: u64,
    pub n_links: u64,
    pub n_repeated_links: u64,
    pub inserted_text: String,
    pub deleted_text: String,
    pub n_inserted_chars: u64,
    pub n_deleted_chars: u64,
    pub n_reverted_words: u64,
    pub n_bad_words: u64,
    pub polarity_inserted: f64,
    pub polarity_deleted: f64,
    pub ores_edit_quality: EditQuality,
    pub ores_item_quality: ItemQuality,
    pub ores_article_quality: ArticleQuality,
    pub ores_wp10: Wp10,
    pub revert_flag: bool,
}

const MANDATORY_FIELDS: [&str; 23] = [
    "date",
    "review_id",
    "editor",
    "creator",
    "article",
    "bot_flag",
    "editor_is_creator",
    "revision_size",
    "n_links",
    "n_repeated_links",
    "inserted_text",
    "deleted_text",
    "n_inserted_chars",
    "n_deleted_chars",
    "n_reverted_words",
    "n_bad_words",
    "polarity_inserted",
    "polarity_deleted",
    "ores_edit_quality",
    "ores_item_quality",
    "ores_article_quality",
    "ores_wp10",
    "revert_flag",
];

impl ReviewEvent {
    pub fn ores(&self) -> OresScores {
        OresScores {
            edit: self.ores_edit_quality,
            item: self.ores_item_quality,
            article: self.ores_article_quality,
            wp10: self.ores_wp10,
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        self.ores().validate()?;
        for (name, p) in [
            ("polarity_inserted", self.polarity_inserted),
            ("polarity_deleted", self.polarity_deleted),
        ] {
            if !p.is_finite() || !(-1.0..=1.0).contains(&p) {
                return Err(format!("{name} out of [-1, 1]: {p}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseIssueKind {
    MissingField(String),
    InvalidUtf8,
    Malformed(String),
    Invalid(String),
}

/// A record-level problem; the offending line is skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseIssue {
    /// 1-based line number.
    pub line: usize,
    pub kind: ParseIssueKind,
}

impl fmt::Display for ParseIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseIssueKind::MissingField(name) => {
                write!(f, "line {}: missing field `{}`", self.line, name)
            }
            ParseIssueKind::InvalidUtf8 => write!(f, "line {}: not valid UTF-8", self.line),
            ParseIssueKind::Malformed(msg) => write!(f, "line {}: malformed: {}", self.line, msg),
            ParseIssueKind::Invalid(msg) => write!(f, "line {}: invalid: {}", self.line, msg),
        }
    }
}

#[derive(Debug, Default)]
pub struct ParsedStream {
    pub events: Vec<ReviewEvent>,
    pub issues: Vec<ParseIssue>,
}

/// Parses newline-delimited JSON review events.
///
/// Bad lines are skipped and reported; only a failure to read the source
/// itself is returned as an error. Blank lines are ignored.
pub fn parse_review_stream<R: BufRead>(mut reader: R) -> Result<ParsedStream> {
    let mut out = ParsedStream::default();
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let Ok(text) = std::str::from_utf8(&buf) else {
            out.issues.push(ParseIssue {
                line: line_no,
                kind: ParseIssueKind::InvalidUtf8,
            });
            continue;
        };
        let text = text.trim();
        if text.is_empty() {
            continue;
        }
        match parse_line(text) {
            Ok(event) => out.events.push(event),
            Err(kind) => out.issues.push(ParseIssue {
                line: line_no,
                kind,
            }),
        }
    }
    Ok(out)
}

fn parse_line(text: &str) -> std::result::Result<ReviewEvent, ParseIssueKind> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ParseIssueKind::Malformed(e.to_string()))?;
    let Some(obj) = value.as_object() else {
        return Err(ParseIssueKind::Malformed("expected a JSON object".into()));
    };
    if let Some(missing) = MANDATORY_FIELDS
        .iter()
        .find(|f| obj.get(**f).is_none_or(|v| v.is_null()))
    {
        return Err(ParseIssueKind::MissingField(missing.to_string()));
    }
    let event: ReviewEvent =
        serde_json::from_value(value).map_err(|e| ParseIssueKind::Invalid(e.to_string()))?;
    event.validate().map_err(ParseIssueKind::Invalid)?;
    Ok(event)
}

pub fn write_events_jsonl<W: Write>(mut w: W, events: &[ReviewEvent]) -> Result<()> {
    for e in events {
        serde_json::to_writer(&mut w, e)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// ISO-8601 UTC timestamps truncated to whole seconds.
mod second_precision {
    use chrono::{DateTime, SecondsFormat, Utc};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&d.to_rfc3339_opts(SecondsFormat::Secs, true))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
        let raw = String::deserialize(d)?;
        let parsed = DateTime::parse_from_rfc3339(&raw).map_err(de::Error::custom)?;
        let utc = parsed.with_timezone(&Utc);
        Ok(DateTime::from_timestamp(utc.timestamp(), 0).unwrap_or(utc))
    }
}

//! Review event and daily record schemas, stream parsing and daily
//! aggregation.

mod daily;
mod event;
mod ores;

pub use daily::{
    aggregate_daily, read_daily_jsonl, write_daily_csv, write_daily_jsonl, DailyRecord,
    SparseCounts,
};
pub use event::{
    parse_review_stream, write_events_jsonl, ParseIssue, ParseIssueKind, ParsedStream, Party,
    ReviewEvent,
};
pub(crate) use daily::merge_counts;
pub use ores::{ArticleQuality, EditQuality, ItemQuality, OresScores, Wp10, ORES_LEN};

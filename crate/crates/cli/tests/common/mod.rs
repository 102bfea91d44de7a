#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_revstream"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn revstream")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn tempdir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

/// One review event as a JSON object.
pub fn event(day: u32, hour: u32, editor: &str, article: &str, review: &str, vandal: bool, jitter: f64) -> Value {
    let damaging = if vandal { 0.8 + 0.1 * jitter } else { 0.1 + 0.1 * jitter };
    let (inserted, deleted) = if vandal {
        ("you are stupid lol lol", "the old harbour has a fine museum")
    } else {
        ("the museum opens daily near the harbour", "")
    };
    json!({
        "date": format!("2020-01-{:02}T{:02}:00:00Z", day, hour),
        "review_id": review,
        "editor": {"name": editor, "id": editor},
        "creator": {"name": "creator", "id": "c0"},
        "article": article,
        "bot_flag": false,
        "editor_is_creator": false,
        "revision_size": if vandal { 40 } else { 300 } + (jitter * 20.0) as u64,
        "n_links": if vandal { 0 } else { 3 },
        "n_repeated_links": 0,
        "inserted_text": inserted,
        "deleted_text": deleted,
        "n_inserted_chars": inserted.len(),
        "n_deleted_chars": deleted.len(),
        "n_reverted_words": if vandal { 2 } else { 0 },
        "n_bad_words": if vandal { 1 } else { 0 },
        "polarity_inserted": if vandal { -0.6 } else { 0.3 },
        "polarity_deleted": 0.0,
        "ores_edit_quality": {
            "damaging_false": 1.0 - damaging, "damaging_true": damaging,
            "goodfaith_false": damaging, "goodfaith_true": 1.0 - damaging
        },
        "ores_item_quality": {"a": 0.2, "b": 0.2, "c": 0.2, "d": 0.2, "e": 0.2},
        "ores_article_quality": {
            "ok": 1.0 - damaging, "attack": damaging / 3.0, "spam": damaging / 3.0, "vandalism": damaging / 3.0
        },
        "ores_wp10": {"b": 0.1, "c": 0.1, "fa": 0.1, "ga": 0.1, "start": 0.3, "stub": 0.3},
        "revert_flag": vandal
    })
}

/// Events over 28 days from 12 editors, a third of them vandals whose
/// edits are always reverted.
pub fn corpus() -> Vec<Value> {
    let mut out = Vec::new();
    let mut n = 0u32;
    for day in 1..=28u32 {
        for ed in 0..12u32 {
            if (day + ed) % 3 == 0 {
                continue;
            }
            let vandal = ed % 3 == 0;
            let jitter = ((n * 7919) % 101) as f64 / 100.0;
            out.push(event(
                day,
                ed % 24,
                &format!("ed{ed:02}"),
                &format!("article{}", (day + ed) % 5),
                &format!("r{n}"),
                vandal,
                jitter,
            ));
            n += 1;
        }
    }
    out
}

pub fn write_events(path: &Path, events: &[Value]) {
    let mut s = String::new();
    for e in events {
        s.push_str(&e.to_string());
        s.push('\n');
    }
    fs::write(path, s).unwrap();
}

pub const SMALL_CONFIG: &str = r#"
seed = 11

[ngram]
min_df = 0.0
max_df = 1.0
word_range = [1, 2]
char_range = [2, 3]

[analysis]
n_estimators = 15

[synth]
count = 80

[stream]
n_trees = 5
grace_period = 20.0
split_confidence = 0.01
tie_threshold = 0.3
"#;

/// Writes the events and config into `dir` and returns the common flags.
pub fn setup(dir: &Path) -> Vec<String> {
    write_events(&dir.join("events.jsonl"), &corpus());
    fs::write(dir.join("config.toml"), SMALL_CONFIG).unwrap();
    vec![
        "--config".into(),
        dir.join("config.toml").display().to_string(),
        "--out-dir".into(),
        dir.join("out").display().to_string(),
        "--quiet".into(),
    ]
}

pub fn run_in(common: &[String], args: &[&str]) -> Output {
    let mut all: Vec<&str> = args.to_vec();
    all.extend(common.iter().map(String::as_str));
    run(&all)
}

pub fn ok(out: &Output) {
    assert_eq!(code(out), 0, "stderr: {}", stderr(out));
}

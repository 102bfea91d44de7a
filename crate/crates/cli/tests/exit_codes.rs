mod common;

use std::fs;

use common::*;

fn prepared(name: &str) -> (std::path::PathBuf, Vec<String>) {
    let dir = tempdir(name);
    let common = setup(&dir);
    let events = dir.join("events.jsonl").display().to_string();
    ok(&run_in(&common, &["preprocess", "--events", &events]));
    (dir, common)
}

#[test]
fn missing_events_file_is_a_usage_error() {
    let dir = tempdir("exit_missing_events");
    let out = run(&["preprocess", "--events", dir.join("nope.jsonl").to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn no_events_flag_is_a_usage_error() {
    let dir = tempdir("exit_no_events");
    let out = run(&["preprocess", "--out-dir", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempdir("exit_bad_config");
    fs::write(dir.join("c.toml"), "seeed = 3\n").unwrap();
    let out = run(&["analyze", "--config", dir.join("c.toml").to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn unknown_flag_value_is_a_usage_error() {
    let out = run(&["stream", "--model", "svm"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn corrupt_daily_records_are_a_data_error() {
    let dir = tempdir("exit_corrupt_daily");
    fs::write(dir.join("daily.jsonl"), "{\"editor_id\": 3}\n").unwrap();
    let out = run(&["analyze", "--daily", dir.join("daily.jsonl").to_str().unwrap(), "--out-dir", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn unsorted_stream_is_a_precondition_failure_naming_the_index() {
    let (dir, common) = prepared("exit_unsorted");
    let daily = fs::read_to_string(dir.join("out/daily.jsonl")).unwrap();
    let mut lines: Vec<&str> = daily.lines().collect();
    let last = lines.pop().unwrap();
    lines.insert(0, last);
    fs::write(dir.join("out/balanced.jsonl"), lines.join("\n")).unwrap();
    let out = run_in(&common, &["stream"]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("index 1"), "{}", stderr(&out));
}

#[test]
fn balancing_without_reverts_is_fatal() {
    let (dir, common) = prepared("exit_no_reverts");
    let daily = fs::read_to_string(dir.join("out/daily.jsonl")).unwrap();
    let kept: Vec<&str> = daily.lines().filter(|l| l.contains("\"revert_label\":false")).collect();
    fs::write(dir.join("out/daily.jsonl"), kept.join("\n")).unwrap();
    let out = run_in(&common, &["balance", "--count", "10"]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    ok(&run_in(&common, &["balance", "--count", "0"]));
}

#[test]
fn explain_rejects_unknown_samples_and_naive_bayes() {
    let (_dir, common) = prepared("exit_explain");
    ok(&run_in(&common, &["balance", "--count", "0"]));
    ok(&run_in(&common, &["stream", "--model", "ht"]));
    let out = run_in(&common, &["explain", "--sample", "100000"]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("unknown sample 100000"));

    ok(&run_in(&common, &["stream", "--model", "nb"]));
    let out = run_in(&common, &["explain", "--sample", "1"]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
}

#[test]
fn explain_requires_a_sample() {
    let out = run(&["explain"]);
    assert_eq!(code(&out), 2);
}

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use revstream::data::{read_daily_jsonl, DailyRecord};
use revstream::text::NgramVocabulary;

use crate::config::require_file;

pub fn open(path: &Path, what: &str) -> anyhow::Result<BufReader<File>> {
    require_file(path, what)?;
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(f))
}

pub fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

/// Writes through `body` and flushes, attaching the path to any failure.
pub fn write_with<F>(path: &Path, body: F) -> anyhow::Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> anyhow::Result<()>,
{
    let mut w = create(path)?;
    body(&mut w).with_context(|| format!("writing {}", path.display()))?;
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    write_with(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        w.write_all(b"\n")?;
        Ok(())
    })
}

pub fn read_daily(path: &Path, what: &str) -> anyhow::Result<Vec<DailyRecord>> {
    let r = open(path, what)?;
    read_daily_jsonl(r).with_context(|| format!("reading {}", path.display()))
}

pub fn read_vocab(path: &Path) -> anyhow::Result<NgramVocabulary> {
    let r = open(path, "vocabulary")?;
    NgramVocabulary::read_json(r).with_context(|| format!("reading {}", path.display()))
}

/// The vocabulary when its file exists.
pub fn read_vocab_opt(path: &Path) -> anyhow::Result<Option<NgramVocabulary>> {
    if path.is_file() {
        read_vocab(path).map(Some)
    } else {
        Ok(None)
    }
}

pub fn say(quiet: bool, msg: std::fmt::Arguments<'_>) {
    if !quiet {
        println!("{msg}");
    }
}

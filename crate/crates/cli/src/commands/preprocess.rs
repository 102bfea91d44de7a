use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Context;

use revstream::data::{aggregate_daily, parse_review_stream, write_daily_csv, write_daily_jsonl, ParseIssueKind, ReviewEvent};
use revstream::text::{count_wordlist, fit_ngram_vocabulary, normalize_text, polarity, Lexicon, NgramVocabulary, WordList};

use crate::config::{PipelineConfig, UsageError};
use crate::io::{open, say, write_with};

fn word_list(path: Option<&Path>, what: &str) -> anyhow::Result<Option<WordList>> {
    path.map(|p| {
        WordList::read(open(p, what)?).with_context(|| format!("reading {}", p.display()))
    })
    .transpose()
}

/// Overwrites the text-derived event fields from the supplied resources;
/// fields without a resource keep their source values.
fn recompute_text_stats(
    events: &mut [ReviewEvent],
    stopwords: &WordList,
    bad: Option<&WordList>,
    reverted: Option<&WordList>,
    lexicon: Option<&Lexicon>,
) {
    if bad.is_none() && reverted.is_none() && lexicon.is_none() {
        return;
    }
    for e in events {
        let inserted = normalize_text(&e.inserted_text, stopwords);
        if let Some(list) = bad {
            e.n_bad_words = count_wordlist(&inserted, list);
        }
        if let Some(list) = reverted {
            e.n_reverted_words = count_wordlist(&inserted, list);
        }
        if let Some(lex) = lexicon {
            let deleted = normalize_text(&e.deleted_text, stopwords);
            e.polarity_inserted = polarity(&inserted, lex);
            e.polarity_deleted = polarity(&deleted, lex);
        }
    }
}

fn issue_kind(kind: &ParseIssueKind) -> &'static str {
    match kind {
        ParseIssueKind::MissingField(_) => "missing field",
        ParseIssueKind::InvalidUtf8 => "invalid utf-8",
        ParseIssueKind::Malformed(_) => "malformed",
        ParseIssueKind::Invalid(_) => "invalid value",
    }
}

pub fn run(cfg: &PipelineConfig, quiet: bool) -> anyhow::Result<()> {
    let events_path = cfg
        .paths
        .events
        .as_deref()
        .ok_or_else(|| UsageError("no events file given (--events or paths.events)".into()))?;
    let reader = open(events_path, "events file")?;
    let stopwords = word_list(cfg.paths.stopwords.as_deref(), "stopword list")?.unwrap_or_default();
    let bad = word_list(cfg.paths.bad_words.as_deref(), "bad-word list")?;
    let reverted = word_list(cfg.paths.reverted_words.as_deref(), "reverted-word list")?;
    let lexicon = cfg
        .paths
        .lexicon
        .as_deref()
        .map(|p| Lexicon::read(open(p, "lexicon")?).with_context(|| format!("reading {}", p.display())))
        .transpose()?;

    let parsed = parse_review_stream(reader).with_context(|| format!("reading {}", events_path.display()))?;
    let mut by_kind: BTreeMap<&str, usize> = BTreeMap::new();
    for issue in &parsed.issues {
        log::debug!("{issue}");
        *by_kind.entry(issue_kind(&issue.kind)).or_default() += 1;
    }
    for (kind, n) in &by_kind {
        log::warn!("skipped {n} event line(s): {kind}");
    }
    if let Some(first) = parsed.issues.first() {
        log::warn!("first skipped line: {first}");
    }
    let mut events = parsed.events;
    if events.is_empty() {
        log::warn!("no valid events in {}", events_path.display());
    }
    recompute_text_stats(&mut events, &stopwords, bad.as_ref(), reverted.as_ref(), lexicon.as_ref());

    let ngram = cfg.ngram.to_config();
    let docs: Vec<Vec<String>> = events
        .iter()
        .flat_map(|e| [&e.inserted_text, &e.deleted_text])
        .map(|t| normalize_text(t, &stopwords))
        .filter(|d| !d.is_empty())
        .collect();
    let vocab = if docs.is_empty() {
        NgramVocabulary {
            config: ngram,
            word_ngrams: BTreeMap::new(),
            char_ngrams: BTreeMap::new(),
        }
    } else {
        fit_ngram_vocabulary(&docs, ngram).map_err(|e| UsageError(format!("n-gram config: {e}")))?
    };

    let daily = aggregate_daily(&events, &vocab, &stopwords);
    let daily_path = cfg.daily_path();
    write_with(&daily_path, |w| Ok(write_daily_jsonl(w, &daily)?))?;
    write_with(&daily_path.with_extension("csv"), |w| Ok(write_daily_csv(w, &daily)?))?;
    write_with(&cfg.vocab_path(), |w| Ok(vocab.write_json(w)?))?;

    let reverts = daily.iter().filter(|r| r.revert_label).count();
    say(
        quiet,
        format_args!(
            "events: {} read, {} skipped; daily records: {} ({} revert, {} non-revert); vocabulary: {} terms",
            events.len(),
            parsed.issues.len(),
            daily.len(),
            reverts,
            daily.len() - reverts,
            vocab.len()
        ),
    );
    Ok(())
}

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use crate::{Error, Result};

/// Set of lowercase tokens (stopwords, bad words, common reverted words).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordList {
    tokens: BTreeSet<String>,
}

impl WordList {
    pub fn new<I: IntoIterator<Item = String>>(tokens: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        for t in tokens {
            if t.is_empty() || t.chars().any(char::is_whitespace) {
                return Err(Error::InvalidParameter(format!("bad word-list token {t:?}")));
            }
            set.insert(t.to_lowercase());
        }
        Ok(Self { tokens: set })
    }

    /// One token per line; `#` starts a comment, blank lines are skipped.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut tokens = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let content = line.split('#').next().unwrap_or("").trim();
            if !content.is_empty() {
                tokens.push(content.to_string());
            }
        }
        Self::new(tokens)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.tokens.contains(token)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Token polarity lexicon.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    entries: BTreeMap<String, f64>,
}

impl Lexicon {
    pub fn new<I: IntoIterator<Item = (String, f64)>>(entries: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (token, p) in entries {
            if token.is_empty() || token.chars().any(char::is_whitespace) {
                return Err(Error::InvalidParameter(format!("bad lexicon token {token:?}")));
            }
            if !p.is_finite() || !(-1.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "polarity of {token:?} out of [-1, 1]: {p}"
                )));
            }
            map.insert(token.to_lowercase(), p);
        }
        Ok(Self { entries: map })
    }

    /// Tab-separated `token<TAB>polarity` lines; `#` comments allowed.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (token, value) = content.split_once('\t').ok_or_else(|| {
                Error::InvalidParameter(format!("lexicon line {}: expected token<TAB>polarity", i + 1))
            })?;
            let p: f64 = value.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("lexicon line {}: bad polarity {value:?}", i + 1))
            })?;
            entries.push((token.trim().to_string(), p));
        }
        Self::new(entries)
    }

    pub fn get(&self, token: &str) -> Option<f64> {
        self.entries.get(token).copied()
    }
}

/// Mean polarity of the tokens found in the lexicon; 0 when none match.
pub fn polarity(tokens: &[String], lex: &Lexicon) -> f64 {
    let (sum, n) = tokens
        .iter()
        .filter_map(|t| lex.get(t))
        .fold((0.0, 0usize), |(s, n), p| (s + p, n + 1));
    if n == 0 {
        0.0
    } else {
        (sum / n as f64).clamp(-1.0, 1.0)
    }
}

/// Occurrences (with multiplicity) of listed tokens.
pub fn count_wordlist(tokens: &[String], list: &WordList) -> u64 {
    tokens.iter().filter(|t| list.contains(t)).count() as u64
}

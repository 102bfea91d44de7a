use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use super::WordList;

/// Lowercases, strips URLs, folds accents to ASCII, replaces every
/// non-alphanumeric character with a space, splits on whitespace and drops
/// stopwords.
///
/// The output only contains `[a-z0-9]` tokens, so normalizing the joined
/// output again is a no-op.
pub fn normalize_text(raw: &str, stopwords: &WordList) -> Vec<String> {
    let lowered = raw.to_lowercase();
    let mut cleaned = String::with_capacity(lowered.len());
    for chunk in lowered.split_whitespace() {
        cleaned.push_str(strip_url(chunk));
        cleaned.push(' ');
    }
    let folded: String = cleaned
        .nfd()
        .filter(|c| !is_combining_mark(*c))
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                ' '
            }
        })
        .collect();
    folded
        .split_whitespace()
        .filter(|t| !stopwords.contains(t))
        .map(str::to_owned)
        .collect()
}

/// Returns the part of a whitespace-free chunk that precedes a URL, if any.
fn strip_url(chunk: &str) -> &str {
    let scheme = chunk.find("://").map(|pos| {
        // the scheme is the run of letters (plus `+.-`) right before `://`
        let head = &chunk[..pos];
        head.char_indices()
            .rev()
            .take_while(|(_, c)| c.is_ascii_alphabetic() || matches!(c, '+' | '.' | '-'))
            .last()
            .map_or(pos, |(i, _)| i)
    });
    let www = chunk.find("www.");
    match (scheme, www) {
        (Some(a), Some(b)) => &chunk[..a.min(b)],
        (Some(a), None) | (None, Some(a)) => &chunk[..a],
        (None, None) => chunk,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stop(words: &[&str]) -> WordList {
        WordList::new(words.iter().map(|s| s.to_string())).unwrap()
    }

    #[test]
    fn empty_input() {
        assert!(normalize_text("", &stop(&[])).is_empty());
    }

    #[test]
    fn rule_chain() {
        let out = normalize_text("Visit https://x.y NOW, café!", &stop(&["now"]));
        assert_eq!(out, vec!["visit", "cafe"]);
    }

    #[test]
    fn www_and_wrapped_urls() {
        let out = normalize_text("see (http://a.b/c?d=1) and www.example.org/x ok", &stop(&[]));
        assert_eq!(out, vec!["see", "and", "ok"]);
    }

    #[test]
    fn accents_and_symbols() {
        let out = normalize_text("Ärger über São-Paulo_2019 ß", &stop(&[]));
        assert_eq!(out, vec!["arger", "uber", "sao", "paulo", "2019"]);
    }

    #[test]
    fn idempotent_on_joined_output() {
        let sw = stop(&["the", "a"]);
        for raw in [
            "The Café at https://foo.bar is A great place!!",
            "ÉLAN vital — 50% off www.deal.com",
            "[[Category:Travel]] {{stub}}",
        ] {
            let once = normalize_text(raw, &sw);
            let twice = normalize_text(&once.join(" "), &sw);
            assert_eq!(once, twice);
        }
    }
}

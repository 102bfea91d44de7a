use std::fmt::Write;

use super::path::{Comparison, Explanation, Predicate, PredicateTarget};
use crate::class_name;

fn token_list(terms: &[&str]) -> String {
    let quoted: Vec<String> = terms.iter().map(|t| format!("'{t}'")).collect();
    format!("[{}]", quoted.join(", "))
}

/// Presence tests on n-gram counts (thresholds below 1) read as
/// containment; a run of them on the same text block and side shares one
/// line.
fn presence(p: &Predicate) -> Option<(bool, Comparison, &str)> {
    match &p.target {
        PredicateTarget::Ngram { term, deleted } if p.threshold < 1.0 => Some((*deleted, p.comparison, term)),
        _ => None,
    }
}

fn presence_line(deleted: bool, comparison: Comparison, terms: &[&str]) -> String {
    let verb = match (deleted, comparison) {
        (false, Comparison::Above) => "contains",
        (false, Comparison::Below) => "does not contain",
        (true, Comparison::Above) => "removes",
        (true, Comparison::Below) => "does not remove",
    };
    format!("The revision {verb} {}", token_list(terms))
}

fn count_line(p: &Predicate, term: &str, deleted: bool) -> String {
    let verb = if deleted { "removes" } else { "contains" };
    let bound = match p.comparison {
        Comparison::Above => "more than",
        Comparison::Below => "at most",
    };
    format!("The revision {verb} {} {bound} {:.2} times", token_list(&[term]), p.threshold)
}

/// Natural-language block for one explanation:
///
/// ```text
/// For sample 1, the model decision is based on the following facts:
///  The average number of repeated links < 0.03
///  The revision contains ['wiki']
///  Predicted class revert
/// ```
pub fn render_nl(explanation: &Explanation) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "For sample {}, the model decision is based on the following facts:",
        explanation.sample_id
    );
    let preds = &explanation.predicates;
    let mut i = 0;
    while i < preds.len() {
        let p = &preds[i];
        if let Some((deleted, cmp, term)) = presence(p) {
            let mut terms = vec![term];
            while let Some((d, c, t)) = preds.get(i + 1).and_then(presence) {
                if d != deleted || c != cmp {
                    break;
                }
                terms.push(t);
                i += 1;
            }
            let _ = writeln!(out, " {}", presence_line(deleted, cmp, &terms));
        } else if let PredicateTarget::Ngram { term, deleted } = &p.target {
            let _ = writeln!(out, " {}", count_line(p, term, *deleted));
        } else {
            let _ = writeln!(out, " {} {} {:.2}", p.name, p.comparison.symbol(), p.threshold);
        }
        i += 1;
    }
    let _ = writeln!(out, " Predicted class {}", class_name(explanation.predicted_class));
    out
}

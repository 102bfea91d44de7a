use std::collections::HashSet;
use std::fmt::Write;

use super::path::Explanation;
use crate::analysis::DecisionTree;
use crate::features::FeatureSchema;
use crate::{class_name, REVERT};

const REVERT_FILL: &str = "#8fd18f";
const NON_REVERT_FILL: &str = "#f7e08a";
const SPLIT_FILL: &str = "#ffffff";

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn count(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

/// DOT digraph of `tree`, one node per tree node in pre-order. Split nodes
/// show their test, leaves their class; every node shows its gini and
/// class counts. Leaves are filled green for revert and yellow for
/// non-revert. Edges along `highlight`'s path are bold.
pub fn export_dot(tree: &DecisionTree, schema: &FeatureSchema, highlight: Option<&Explanation>) -> String {
    let path: HashSet<usize> = highlight.map(|e| e.node_ids.iter().copied().collect()).unwrap_or_default();
    let mut out = String::from("digraph Tree {\n");
    out.push_str("node [shape=box, style=\"filled, rounded\", fontname=\"helvetica\"] ;\n");
    out.push_str("edge [fontname=\"helvetica\"] ;\n");
    let nodes = tree.preorder();
    for (id, (node, parent)) in nodes.iter().enumerate() {
        let counts: Vec<String> = node.class_counts.iter().map(|&c| count(c)).collect();
        let (head, fill) = match &node.split {
            Some(s) => (
                format!("{} <= {:.2}", schema.name(s.feature).label(), s.threshold),
                SPLIT_FILL,
            ),
            None => (
                format!("class = {}", class_name(node.predicted_class)),
                if node.predicted_class == REVERT { REVERT_FILL } else { NON_REVERT_FILL },
            ),
        };
        let label = format!("{}\\ngini = {:.3}\\nvalue = [{}]", escape(&head), node.gini, counts.join(", "));
        let _ = writeln!(out, "{id} [label=\"{label}\", fillcolor=\"{fill}\"] ;");
        if let Some(p) = parent {
            let is_left = nodes[*p].0.split.as_ref().is_some_and(|s| std::ptr::eq(&*s.left, *node));
            let branch = if is_left { "True" } else { "False" };
            let style = if path.contains(p) && path.contains(&id) {
                ", style=bold, penwidth=3"
            } else {
                ""
            };
            let _ = writeln!(out, "{p} -> {id} [label=\"{branch}\"{style}] ;");
        }
    }
    out.push_str("}\n");
    out
}

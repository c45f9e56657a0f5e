use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Lts, Transition};
use crate::error::LtsError;

/// Renders `lts` as a Graphviz digraph. The initial state is double-circled
/// and every transition in `highlight` is drawn dashed.
pub fn emit_dot(lts: &Lts, highlight: Option<&BTreeSet<Transition>>) -> Result<String, LtsError> {
    let empty = BTreeSet::new();
    let highlight = highlight.unwrap_or(&empty);
    if let Some((s, l, d)) = highlight
        .iter()
        .find(|(s, l, d)| !lts.has_transition(s, l, d))
    {
        return Err(LtsError::ForeignTransition(s.clone(), l.to_string(), d.clone()));
    }

    let mut out = String::from("digraph lts {\n  rankdir=TB;\n");
    for s in lts.states() {
        let shape = if s == lts.initial() { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {} [shape={shape}];", quote(&s.to_string()));
    }
    for t in lts.transitions() {
        let style = if highlight.contains(&t) { ", style=dashed" } else { "" };
        let (s, l, d) = t;
        let _ = writeln!(
            out,
            "  {} -> {} [label={}{style}];",
            quote(&s.to_string()),
            quote(&d.to_string()),
            quote(l.name())
        );
    }
    out.push_str("}\n");
    Ok(out)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

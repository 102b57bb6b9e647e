use std::collections::BTreeSet;
use std::fmt::Write;

use super::graph::{EdgeId, RootedGraph};

/// Edge styling for DOT export.
#[derive(Clone, Debug, Default)]
pub struct DotStyle {
    /// Drawn blue (transition edges).
    pub highlighted: BTreeSet<EdgeId>,
    /// Drawn red and dashed (back-edges).
    pub dashed: BTreeSet<EdgeId>,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders `g` as a DOT digraph. Output depends only on the graph and style.
pub fn to_dot(g: &RootedGraph, name: &str, labels: &[String], style: &DotStyle) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    let _ = writeln!(out, "  rankdir=TB;");
    for v in 0..g.vertex_count() {
        let shape = if v == g.root() { ", shape=box" } else { "" };
        let _ = writeln!(out, "  v{v} [label={}{shape}];", quote(g.name(v)));
    }
    for (id, e) in g.edges().iter().enumerate() {
        let mut attrs = vec![format!("label={}", quote(&labels[e.label]))];
        if style.highlighted.contains(&id) {
            attrs.push("color=blue".into());
        }
        if style.dashed.contains(&id) {
            attrs.push("color=red".into());
            attrs.push("style=dashed".into());
        }
        let _ = writeln!(out, "  v{} -> v{} [{}];", e.source, e.target, attrs.join(", "));
    }
    out.push_str("}\n");
    out
}

use std::fmt::Write;

use super::{Label, Rule};
use crate::formula::ClosureTable;

/// Graphviz rendering of an explored tableau.
#[derive(Debug, Default)]
pub(super) struct Dot {
    nodes: Vec<(String, Option<&'static str>)>,
    edges: Vec<(usize, usize, Rule)>,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl Dot {
    pub fn node(&mut self, ct: &ClosureTable, label: &Label, parent: Option<(usize, Rule)>) -> usize {
        let text: Vec<String> = label.iter().map(|&id| ct.formula(id).to_string()).collect();
        let id = self.nodes.len();
        self.nodes.push((format!("{{{}}}", text.join(", ")), None));
        if let Some((p, rule)) = parent {
            self.edges.push((p, id, rule));
        }
        id
    }

    pub fn mark(&mut self, node: usize, status: &'static str) {
        if let Some(n) = self.nodes.get_mut(node) {
            n.1 = Some(status);
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::from("digraph tableau {\n  node [shape=box, fontname=\"monospace\"];\n");
        for (i, (label, status)) in self.nodes.iter().enumerate() {
            let (suffix, style) = match status {
                Some("accepted") => ("\\naccepted", ", color=green"),
                Some("rejected") => ("\\nrejected", ", color=red"),
                Some("trimmed") => ("\\ntrimmed", ", style=dashed"),
                _ => ("", ""),
            };
            let _ = writeln!(out, "  n{i} [label=\"{}{suffix}\"{style}];", escape(label));
        }
        for (from, to, rule) in &self.edges {
            let _ = writeln!(out, "  n{from} -> n{to} [label=\"{}\"];", rule.name());
        }
        out.push_str("}\n");
        out
    }
}

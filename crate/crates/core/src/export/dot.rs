use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::dsl::Document;
use crate::model::{ArgumentGraph, EdgeDecoration, EdgeKind, NodeKind};

const WRAP: usize = 32;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

/// Greedy word wrap, lines joined by a DOT line break.
fn wrap(s: &str) -> String {
    let mut lines: Vec<String> = Vec::new();
    let mut line = String::new();
    for word in s.split_whitespace() {
        if !line.is_empty() && line.chars().count() + 1 + word.chars().count() > WRAP {
            lines.push(std::mem::take(&mut line));
        }
        if !line.is_empty() {
            line.push(' ');
        }
        line.push_str(word);
    }
    if !line.is_empty() {
        lines.push(line);
    }
    lines
        .iter()
        .map(|l| escape(l))
        .collect::<Vec<_>>()
        .join("\\n")
}

fn shape(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::Goal => "shape=rectangle",
        NodeKind::Strategy => "shape=parallelogram",
        NodeKind::Solution => "shape=circle",
        NodeKind::Context => "shape=rectangle, style=rounded",
        NodeKind::Assumption | NodeKind::Justification => "shape=ellipse",
        NodeKind::ModuleRef => "shape=tab",
        NodeKind::AwayGoal => "shape=rectangle, peripheries=2",
    }
}

fn module_graph(out: &mut String, g: &ArgumentGraph, qualify: bool) {
    let name = g.module_name();
    let node_name = |id: &str| {
        if qualify && !id.contains("::") {
            format!("\"{}::{}\"", escape(name), escape(id))
        } else {
            format!("\"{}\"", escape(id))
        }
    };
    let indent = if qualify { "    " } else { "  " };
    if qualify {
        let _ = writeln!(out, "  subgraph \"cluster_{}\" {{", escape(name));
        let _ = writeln!(out, "    label=\"{}\";", escape(name));
    }
    for n in g.nodes() {
        let mut label = format!("{}\\n{}", escape(n.id.as_str()), wrap(&n.statement));
        match n.kind {
            NodeKind::Assumption => label.push_str("\\nA"),
            NodeKind::Justification => label.push_str("\\nJ"),
            _ => {}
        }
        if n.undeveloped {
            label.push_str("\\n◇");
        }
        let _ = writeln!(
            out,
            "{indent}{} [{}, label=\"{label}\"];",
            node_name(n.id.as_str()),
            shape(n.kind)
        );
    }
    let mut acps: BTreeMap<_, Vec<&str>> = BTreeMap::new();
    for a in g.acps() {
        acps.entry(a.edge.clone()).or_default().push(&a.id);
    }
    for e in g.edges() {
        let mut attrs = vec![match e.kind {
            EdgeKind::SupportedBy => "arrowhead=normal".to_string(),
            EdgeKind::InContextOf => "arrowhead=empty".to_string(),
        }];
        let mut label = Vec::new();
        match &e.decoration {
            EdgeDecoration::None => {}
            EdgeDecoration::Multiplicity { min, max } => {
                let max = max.map(|m| m.to_string()).unwrap_or_else(|| "*".into());
                label.push(format!("● {min}..{max}"));
            }
            EdgeDecoration::Optional => label.push("○ optional".into()),
            EdgeDecoration::ChoiceMember { group } => label.push(format!("◆ {}", escape(group))),
        }
        if let Some(ids) = acps.get(&e.edge_ref()) {
            for id in ids {
                label.push(format!("■ {}", escape(id)));
            }
        }
        if !label.is_empty() {
            attrs.push(format!("label=\"{}\"", label.join("\\n")));
        }
        let _ = writeln!(
            out,
            "{indent}{} -> {} [{}];",
            node_name(e.source.as_str()),
            node_name(e.target.as_str()),
            attrs.join(", ")
        );
    }
    if qualify {
        out.push_str("  }\n");
    }
}

/// Graphviz rendering of a single graph.
pub fn graph_to_dot(g: &ArgumentGraph) -> String {
    let mut out = format!("digraph \"{}\" {{\n", escape(g.module_name()));
    out.push_str("  rankdir=TB;\n  node [fontname=\"Helvetica\", fontsize=10];\n  edge [fontname=\"Helvetica\", fontsize=9];\n");
    module_graph(&mut out, g, false);
    out.push_str("}\n");
    out
}

/// Graphviz rendering of a document. A single module renders flat;
/// several render as one cluster each with module-qualified node names.
pub fn to_dot(doc: &Document) -> String {
    if let [only] = doc.modules.as_slice() {
        return graph_to_dot(&only.graph);
    }
    let mut out = String::from("digraph \"gsn\" {\n");
    out.push_str("  rankdir=TB;\n  node [fontname=\"Helvetica\", fontsize=10];\n  edge [fontname=\"Helvetica\", fontsize=9];\n");
    for m in &doc.modules {
        module_graph(&mut out, &m.graph, true);
    }
    out.push_str("}\n");
    out
}

use std::fmt::Write as _;

use crate::diagnostic::Diagnostic;
use crate::model::{EdgeDecoration, ModelError};

use super::document::{Document, ElementKey, ModuleDecl};
use super::parser::parse;

/// Quotes a statement. `\{` and `\}` are left as written so placeholder
/// escapes survive a round trip.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' if matches!(chars.peek(), Some('{' | '}')) => out.push('\\'),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn comment_lines(out: &mut String, indent: &str, lines: &[String]) {
    for l in lines {
        let _ = writeln!(out, "{indent}#{l}");
    }
}

fn range(min: u32, max: Option<u32>) -> String {
    match max {
        Some(max) => format!("{min}..{max}"),
        None => format!("{min}..*"),
    }
}

fn serialize_module(out: &mut String, m: &ModuleDecl) -> Result<(), ModelError> {
    let g = &m.graph;
    g.check_resolved()?;
    let info = &m.source;
    comment_lines(out, "", &info.header);
    let _ = writeln!(out, "{} {} {{", m.kind.keyword(), g.module_name());

    let mut sections: Vec<Vec<(ElementKey, String)>> = Vec::new();

    sections.push(
        g.nodes()
            .iter()
            .map(|n| {
                let mut line = format!("{} {} {}", n.kind.keyword(), n.id, quote(&n.statement));
                if n.undeveloped {
                    line.push_str(" undeveloped");
                }
                if n.uninstantiated {
                    line.push_str(" uninstantiated");
                }
                (ElementKey::Node(n.id.clone()), line)
            })
            .collect(),
    );
    sections.push(
        g.edges()
            .iter()
            .map(|e| {
                let mut line = format!("{} -> {} : {}", e.source, e.target, e.kind);
                match &e.decoration {
                    EdgeDecoration::None => {}
                    EdgeDecoration::Multiplicity { min, max } => {
                        let _ = write!(line, " mult {}", range(*min, *max));
                    }
                    EdgeDecoration::Optional => line.push_str(" optional"),
                    EdgeDecoration::ChoiceMember { group } => {
                        let _ = write!(line, " choice {group}");
                    }
                }
                (ElementKey::Edge(e.edge_ref()), line)
            })
            .collect(),
    );
    sections.push(
        g.choice_groups()
            .iter()
            .map(|c| {
                (
                    ElementKey::Choice(c.group.clone()),
                    format!(
                        "choice {} at {} pick {}..{}",
                        c.group, c.source, c.min, c.max
                    ),
                )
            })
            .collect(),
    );
    sections.push(
        g.acps()
            .iter()
            .map(|a| {
                (
                    ElementKey::Acp(a.id.clone()),
                    format!(
                        "acp {} on ({} -> {} : {}) confidence {}",
                        a.id, a.edge.source, a.edge.target, a.edge.kind, a.confidence_module
                    ),
                )
            })
            .collect(),
    );
    if !g.public_ids().is_empty() {
        let ids: Vec<&str> = g.public_ids().iter().map(|p| p.as_str()).collect();
        sections.push(vec![(
            ElementKey::Public,
            format!("public {}", ids.join(", ")),
        )]);
    }

    let mut first = true;
    for section in sections.into_iter().filter(|s| !s.is_empty()) {
        if !first {
            out.push('\n');
        }
        first = false;
        for (key, line) in section {
            if let Some(lead) = info.leading.get(&key) {
                comment_lines(out, "  ", lead);
            }
            match info.trailing.get(&key) {
                Some(t) => {
                    let _ = writeln!(out, "  {line} #{t}");
                }
                None => {
                    let _ = writeln!(out, "  {line}");
                }
            }
        }
    }
    comment_lines(out, "  ", &info.footer);
    out.push_str("}\n");
    Ok(())
}

/// Canonical text of a document. Modules are separated by one blank line.
pub fn serialize(doc: &Document) -> Result<String, ModelError> {
    let mut out = String::new();
    for (i, m) in doc.modules.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        serialize_module(&mut out, m)?;
    }
    if !doc.trailing_comments.is_empty() {
        if !doc.modules.is_empty() {
            out.push('\n');
        }
        comment_lines(&mut out, "", &doc.trailing_comments);
    }
    Ok(out)
}

/// Re-emits `text` in canonical form. On parse errors the diagnostics are
/// returned and the input is left untouched by the caller.
pub fn format(text: &str, file: &str) -> Result<String, Vec<Diagnostic>> {
    let parsed = parse(text, file);
    if parsed.has_errors() {
        return Err(parsed
            .diagnostics
            .into_iter()
            .filter(Diagnostic::is_error)
            .collect());
    }
    serialize(&parsed.document).map_err(|e| vec![Diagnostic::error("P005", e.to_string())])
}

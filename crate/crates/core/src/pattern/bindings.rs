use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::diagnostic::{Diagnostic, SourceSpan};
use crate::dsl::{lex, normalize_newlines, quote, Cursor, Tok};
use crate::model::{EdgeKind, EdgeRef, NodeId};

/// Choices made when instantiating a pattern.
///
/// Edges are addressed by their `(source, target, kind)` triple as written
/// in the pattern. Choice selections name the targets of the chosen member
/// edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BindingSet {
    pub role_bindings: BTreeMap<String, String>,
    pub multiplicity_counts: BTreeMap<EdgeRef, u32>,
    pub choice_selections: BTreeMap<String, Vec<NodeId>>,
    pub optional_inclusions: BTreeMap<EdgeRef, bool>,
    /// `(role, i)` applies inside the `i`-th copy of a replicated subtree.
    pub indexed_bindings: BTreeMap<(String, usize), String>,
}

impl BindingSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn role(mut self, role: impl Into<String>, text: impl Into<String>) -> Self {
        self.role_bindings.insert(role.into(), text.into());
        self
    }

    pub fn indexed_role(
        mut self,
        role: impl Into<String>,
        index: usize,
        text: impl Into<String>,
    ) -> Self {
        self.indexed_bindings
            .insert((role.into(), index), text.into());
        self
    }

    pub fn count(mut self, edge: EdgeRef, k: u32) -> Self {
        self.multiplicity_counts.insert(edge, k);
        self
    }

    pub fn choose(mut self, group: impl Into<String>, targets: Vec<NodeId>) -> Self {
        self.choice_selections.insert(group.into(), targets);
        self
    }

    pub fn include(mut self, edge: EdgeRef, included: bool) -> Self {
        self.optional_inclusions.insert(edge, included);
        self
    }

    /// Text form accepted by [`parse_bindings`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (role, text) in &self.role_bindings {
            let _ = writeln!(out, "role {} = {}", quote(role), quote(text));
        }
        for ((role, i), text) in &self.indexed_bindings {
            let _ = writeln!(out, "role {}[{i}] = {}", quote(role), quote(text));
        }
        for (edge, k) in &self.multiplicity_counts {
            let _ = writeln!(out, "count {} = {k}", edge_text(edge));
        }
        for (group, targets) in &self.choice_selections {
            let ids: Vec<&str> = targets.iter().map(NodeId::as_str).collect();
            let _ = writeln!(out, "choose {group} = {}", ids.join(", "));
        }
        for (edge, inc) in &self.optional_inclusions {
            let _ = writeln!(out, "include {} = {inc}", edge_text(edge));
        }
        out
    }
}

fn edge_text(e: &EdgeRef) -> String {
    match e.kind {
        EdgeKind::SupportedBy => format!("{} -> {}", e.source, e.target),
        EdgeKind::InContextOf => format!("{} -> {} : {}", e.source, e.target, e.kind),
    }
}

/// Parses a bindings file:
///
/// ```text
/// role "AI System (AIS)" = "Wildfire Alert System"
/// role "ML Model"[2] = "Smoke detector"
/// count G0 -> S1 = 2
/// choose MODEL = PSM, GPM
/// include PSM -> GPM = true
/// ```
///
/// Edges default to `supported_by`; append `: in_context_of` otherwise.
pub fn parse_bindings(text: &str, file: &str) -> Result<BindingSet, Vec<Diagnostic>> {
    let text = normalize_newlines(text);
    let lexed = lex(&text, file);
    let mut diags = lexed.diagnostics;
    let mut c = Cursor::new(&lexed.tokens, file);
    let mut set = BindingSet::new();
    let mut seen: BTreeMap<String, SourceSpan> = BTreeMap::new();

    while !c.at_eof() {
        let start = c.peek();
        let line = start.line;
        match entry(&mut c, &mut set) {
            Ok(key) => {
                let span = c.span_from(start);
                if let Some(first) = seen.get(&key) {
                    diags.push(
                        Diagnostic::error("P003", format!("duplicate binding for {key}"))
                            .with_span(Some(span))
                            .with_related(first.clone()),
                    );
                } else {
                    seen.insert(key, span);
                }
            }
            Err(d) => {
                diags.push(d);
                c.skip_through_line(line);
            }
        }
    }
    if diags.iter().any(Diagnostic::is_error) {
        Err(diags)
    } else {
        Ok(set)
    }
}

fn node_id(c: &mut Cursor<'_>) -> Result<NodeId, Diagnostic> {
    let (text, span) = c.expect_ref("node id")?;
    NodeId::new(text).map_err(|e| Diagnostic::error("P002", e.to_string()).with_span(Some(span)))
}

fn edge(c: &mut Cursor<'_>) -> Result<EdgeRef, Diagnostic> {
    let source = node_id(c)?;
    c.expect(&Tok::Arrow)?;
    let target = node_id(c)?;
    let kind = if c.eat(&Tok::Colon) {
        let (w, t) = c.expect_ident("edge kind")?;
        EdgeKind::from_keyword(&w).ok_or_else(|| {
            Diagnostic::error("P002", format!("unknown edge kind `{w}`"))
                .with_span(Some(t.span(c.file)))
        })?
    } else {
        EdgeKind::SupportedBy
    };
    Ok(EdgeRef::new(source, target, kind))
}

fn entry(c: &mut Cursor<'_>, set: &mut BindingSet) -> Result<String, Diagnostic> {
    let (word, _) = c.expect_ident("`role`, `count`, `choose` or `include`")?;
    match word.as_str() {
        "role" => {
            let (role, _) = c.expect_string("role name")?;
            let index = if c.eat(&Tok::LBracket) {
                let (i, t) = c.expect_int("instance index")?;
                c.expect(&Tok::RBracket)?;
                if i == 0 {
                    return Err(Diagnostic::error("P002", "instance indices start at 1")
                        .with_span(Some(t.span(c.file))));
                }
                Some(i as usize)
            } else {
                None
            };
            c.expect(&Tok::Eq)?;
            let (value, _) = c.expect_string("binding text")?;
            Ok(match index {
                Some(i) => {
                    set.indexed_bindings.insert((role.clone(), i), value);
                    format!("role \"{role}\"[{i}]")
                }
                None => {
                    set.role_bindings.insert(role.clone(), value);
                    format!("role \"{role}\"")
                }
            })
        }
        "count" => {
            let e = edge(c)?;
            c.expect(&Tok::Eq)?;
            let (k, t) = c.expect_int("count")?;
            let k = u32::try_from(k).map_err(|_| {
                Diagnostic::error("P002", format!("count {k} is too large"))
                    .with_span(Some(t.span(c.file)))
            })?;
            let key = format!("count {}", edge_text(&e));
            set.multiplicity_counts.insert(e, k);
            Ok(key)
        }
        "choose" => {
            let (group, _) = c.expect_ident("choice group")?;
            c.expect(&Tok::Eq)?;
            let mut targets = vec![node_id(c)?];
            while c.eat(&Tok::Comma) {
                targets.push(node_id(c)?);
            }
            let key = format!("choose {group}");
            set.choice_selections.insert(group, targets);
            Ok(key)
        }
        "include" => {
            let e = edge(c)?;
            c.expect(&Tok::Eq)?;
            let (v, t) = c.expect_ident("`true` or `false`")?;
            let inc = match v.as_str() {
                "true" => true,
                "false" => false,
                _ => {
                    return Err(Diagnostic::error(
                        "P002",
                        format!("expected `true` or `false`, found `{v}`"),
                    )
                    .with_span(Some(t.span(c.file))))
                }
            };
            let key = format!("include {}", edge_text(&e));
            set.optional_inclusions.insert(e, inc);
            Ok(key)
        }
        other => Err(Diagnostic::error(
            "P002",
            format!("expected `role`, `count`, `choose` or `include`, found `{other}`"),
        )
        .with_span(Some(c.prev().span(c.file)))),
    }
}

//! Recursive-descent parser for `.gsn` files.
//!
//! Parsing is total: every problem becomes a [`Diagnostic`] and the parser
//! resynchronizes at the next declaration keyword (inside a module) or the
//! next `module`/`pattern` keyword (at top level).

use std::collections::{HashMap, HashSet};

use crate::diagnostic::{Diagnostic, SourceSpan};
use crate::model::{
    ArgumentGraph, AssuranceClaimPoint, ChoiceGroup, Edge, EdgeDecoration, EdgeKind, EdgeRef,
    ModelError, Node, NodeId, NodeKind,
};
use crate::placeholder::placeholders;

use super::cursor::Cursor;
use super::document::{Document, ElementKey, ModuleDecl, ModuleKind, SourceInfo};
use super::lexer::{lex, normalize_newlines, Comment, Tok};

/// Words that cannot be used as node or module identifiers.
pub const RESERVED: &[&str] = &[
    "module",
    "pattern",
    "goal",
    "strategy",
    "solution",
    "context",
    "assumption",
    "justification",
    "moduleref",
    "awaygoal",
    "undeveloped",
    "uninstantiated",
    "supported_by",
    "in_context_of",
    "mult",
    "optional",
    "choice",
    "at",
    "pick",
    "acp",
    "on",
    "confidence",
    "public",
];

#[derive(Debug, Clone)]
pub struct ParseOutput {
    pub document: Document,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseOutput {
    pub fn has_errors(&self) -> bool {
        crate::diagnostic::has_errors(&self.diagnostics)
    }
}

/// Parses `.gsn` text. Newlines are normalized to LF first.
pub fn parse(text: &str, file: &str) -> ParseOutput {
    let text = normalize_newlines(text);
    let lexed = lex(&text, file);
    let mut parser = Parser {
        cur: Cursor::new(&lexed.tokens, file),
        comments: lexed.comments,
        next_comment: 0,
        diags: lexed.diagnostics,
    };
    let document = parser.document();
    let mut diagnostics = parser.diags;
    crate::diagnostic::sort_diagnostics(&mut diagnostics);
    ParseOutput {
        document,
        diagnostics,
    }
}

struct Parser<'a> {
    cur: Cursor<'a>,
    comments: Vec<Comment>,
    next_comment: usize,
    diags: Vec<Diagnostic>,
}

fn is_module_kw(c: &Cursor<'_>) -> bool {
    c.at_word("module") || c.at_word("pattern")
}

fn at_decl_start(c: &Cursor<'_>) -> bool {
    match c.tok() {
        Tok::RBrace => true,
        Tok::Ident(w) => {
            NodeKind::from_keyword(w).is_some()
                || matches!(
                    w.as_str(),
                    "choice" | "acp" | "public" | "module" | "pattern"
                )
                || matches!(c.peek_at(1).tok, Tok::Arrow | Tok::ColonColon)
        }
        _ => false,
    }
}

struct Pending {
    leading: Vec<String>,
}

impl<'a> Parser<'a> {
    fn file(&self) -> &'a str {
        self.cur.file
    }

    /// Consumes comments that precede the current token. A trailing comment
    /// on `prev_line` is returned separately.
    fn comments_before_here(&mut self, prev_line: Option<u32>) -> (Option<String>, Vec<String>) {
        let here = self.cur.peek().line;
        let at_eof = self.cur.at_eof();
        let mut trailing = None;
        let mut leading = Vec::new();
        while let Some(c) = self.comments.get(self.next_comment) {
            if !at_eof && c.line >= here {
                break;
            }
            if c.trailing && Some(c.line) == prev_line && trailing.is_none() {
                trailing = Some(c.text.clone());
            } else {
                leading.push(c.text.clone());
            }
            self.next_comment += 1;
        }
        (trailing, leading)
    }

    fn document(&mut self) -> Document {
        let mut doc = Document::new();
        let mut names: HashMap<String, SourceSpan> = HashMap::new();
        let mut header: Vec<String> = Vec::new();
        loop {
            let (trailing, leading) = self.comments_before_here(None);
            header.extend(trailing);
            header.extend(leading);
            if self.cur.at_eof() {
                break;
            }
            if !is_module_kw(&self.cur) {
                let d = self.cur.unexpected("`module` or `pattern`");
                self.diags.push(d);
                self.cur.recover(is_module_kw);
                continue;
            }
            let module = self.module(std::mem::take(&mut header));
            let name = module.name().to_string();
            let span = module.source.module_span.clone();
            if let Some(first) = names.get(&name) {
                let d = Diagnostic::error("P007", format!("duplicate module name `{name}`"))
                    .with_span(span)
                    .with_related(first.clone());
                self.diags.push(d);
                continue;
            }
            if let Some(span) = span {
                names.insert(name, span);
            }
            doc.modules.push(module);
        }
        doc.trailing_comments = header;
        doc
    }

    fn module(&mut self, header: Vec<String>) -> ModuleDecl {
        let kw = self.cur.bump();
        let kind = match &kw.tok {
            Tok::Ident(w) if w == "pattern" => ModuleKind::Pattern,
            _ => ModuleKind::Instance,
        };
        let file = self.file();
        let mut info = SourceInfo {
            file: file.to_string(),
            header,
            ..Default::default()
        };
        let name = match self.cur.expect_ident("module name") {
            Ok((name, tok)) => {
                if RESERVED.contains(&name.as_str()) {
                    self.diags.push(
                        Diagnostic::error("P002", format!("`{name}` is a reserved word"))
                            .with_span(Some(tok.span(file))),
                    );
                }
                name
            }
            Err(d) => {
                self.diags.push(d);
                String::from("unnamed")
            }
        };
        let mut graph = ArgumentGraph::new(name);
        if let Err(d) = self.cur.expect(&Tok::LBrace) {
            self.diags.push(d);
            self.cur.recover(|c| at_decl_start(c) || is_module_kw(c));
        }
        let mut pending = Pending {
            leading: Vec::new(),
        };
        let mut prev: Option<(ElementKey, u32)> = None;
        let mut first_spans: FirstSpans = FirstSpans::default();
        loop {
            let (trailing, leading) = self.comments_before_here(prev.as_ref().map(|p| p.1));
            if let (Some(t), Some((key, _))) = (trailing, prev.as_ref()) {
                info.trailing.insert(key.clone(), t);
            }
            pending.leading.extend(leading);
            if matches!(self.cur.tok(), Tok::RBrace) {
                self.cur.bump();
                break;
            }
            if self.cur.at_eof() || is_module_kw(&self.cur) {
                let d = self.cur.unexpected("`}` closing the module");
                self.diags.push(d);
                break;
            }
            match self.declaration(&mut graph, &mut info, &mut first_spans) {
                Ok(Some(key)) => {
                    if !pending.leading.is_empty() {
                        info.leading
                            .entry(key.clone())
                            .or_default()
                            .append(&mut pending.leading);
                    }
                    prev = Some((key, self.cur.line_of_prev()));
                }
                Ok(None) => prev = None,
                Err(d) => {
                    self.diags.push(d);
                    self.cur.recover(|c| at_decl_start(c) || is_module_kw(c));
                    prev = None;
                }
            }
        }
        info.footer = pending.leading;
        info.module_span = Some(self.cur.span_from(kw));
        self.check_resolution(&graph, &info, &first_spans);
        ModuleDecl {
            kind,
            graph,
            source: info,
        }
    }

    fn local_id(
        &mut self,
        text: &str,
        span: &SourceSpan,
        what: &str,
    ) -> Result<NodeId, Diagnostic> {
        if text.contains("::") {
            return Err(Diagnostic::error(
                "P002",
                format!("{what} must be a local identifier, found `{text}`"),
            )
            .with_span(Some(span.clone())));
        }
        self.any_id(text, span)
    }

    fn any_id(&mut self, text: &str, span: &SourceSpan) -> Result<NodeId, Diagnostic> {
        let reserved = text.split("::").any(|part| RESERVED.contains(&part));
        if reserved {
            return Err(
                Diagnostic::error("P002", format!("`{text}` is a reserved word"))
                    .with_span(Some(span.clone())),
            );
        }
        NodeId::new(text)
            .map_err(|e| Diagnostic::error("P002", e.to_string()).with_span(Some(span.clone())))
    }

    fn declaration(
        &mut self,
        graph: &mut ArgumentGraph,
        info: &mut SourceInfo,
        first: &mut FirstSpans,
    ) -> Result<Option<ElementKey>, Diagnostic> {
        let start = self.cur.peek();
        let word = match &start.tok {
            Tok::Ident(w) => w.clone(),
            _ => return Err(self.cur.unexpected("a declaration")),
        };
        if let Some(kind) = NodeKind::from_keyword(&word) {
            return self.node_decl(kind, graph, info, first);
        }
        if matches!(self.cur.peek_at(1).tok, Tok::Arrow | Tok::ColonColon) {
            return self.edge_decl(graph, info, first);
        }
        match word.as_str() {
            "choice" => self.choice_decl(graph, info, first),
            "acp" => self.acp_decl(graph, info, first),
            "public" => self.public_decl(graph, info, first),
            _ => Err(self.cur.unexpected("a declaration")),
        }
    }

    fn node_decl(
        &mut self,
        kind: NodeKind,
        graph: &mut ArgumentGraph,
        info: &mut SourceInfo,
        first: &mut FirstSpans,
    ) -> Result<Option<ElementKey>, Diagnostic> {
        let file = self.file();
        let start = self.cur.bump();
        let (id_text, id_span) = self.cur.expect_ref("node identifier")?;
        let id = self.local_id(&id_text, &id_span, "node id")?;
        let (statement, stmt_tok) = self.cur.expect_string("quoted statement")?;
        let mut undeveloped = false;
        let mut uninstantiated = false;
        loop {
            let flag = if self.cur.at_word("undeveloped") {
                &mut undeveloped
            } else if self.cur.at_word("uninstantiated") {
                &mut uninstantiated
            } else {
                break;
            };
            let t = self.cur.bump();
            if *flag {
                self.diags.push(
                    Diagnostic::error("P002", format!("repeated flag {}", t.tok.describe()))
                        .with_span(Some(t.span(file))),
                );
            }
            *flag = true;
        }
        let span = self.cur.span_from(start);
        if let Err(e) = placeholders(&statement) {
            self.diags.push(
                Diagnostic::error("P004", format!("malformed placeholder in `{id}`: {e}"))
                    .with_span(Some(stmt_tok.span(file))),
            );
        }
        let node = Node::new(id.clone(), kind, statement)
            .undeveloped(undeveloped)
            .uninstantiated(uninstantiated);
        if let Some(prev) = first.nodes.get(&id) {
            self.diags.push(
                Diagnostic::error("P003", format!("duplicate id `{id}`"))
                    .with_span(Some(id_span))
                    .with_related(prev.clone()),
            );
            return Ok(None);
        }
        graph.add_node(node).map_err(|e| model_diag(e, &span))?;
        first.nodes.insert(id.clone(), id_span);
        let key = ElementKey::Node(id);
        info.spans.insert(key.clone(), span);
        Ok(Some(key))
    }

    fn edge_kind(&mut self) -> Result<EdgeKind, Diagnostic> {
        match self.cur.tok() {
            Tok::Ident(w) => match EdgeKind::from_keyword(w) {
                Some(k) => {
                    self.cur.bump();
                    Ok(k)
                }
                None => Err(self.cur.unexpected("`supported_by` or `in_context_of`")),
            },
            _ => Err(self.cur.unexpected("`supported_by` or `in_context_of`")),
        }
    }

    /// `MIN..MAX` where MAX may be `*` when `allow_star`.
    fn range(&mut self, allow_star: bool) -> Result<(u32, Option<u32>, SourceSpan), Diagnostic> {
        let (min, min_tok) = self.cur.expect_int("lower bound")?;
        self.cur.expect(&Tok::DotDot)?;
        let max = if allow_star && self.cur.eat(&Tok::Star) {
            None
        } else {
            Some(
                self.cur
                    .expect_int(if allow_star {
                        "upper bound or `*`"
                    } else {
                        "upper bound"
                    })?
                    .0,
            )
        };
        let span = self.cur.span_from(min_tok);
        let narrow = |v: u64| {
            u32::try_from(v).map_err(|_| {
                Diagnostic::error("P006", format!("bound {v} is too large"))
                    .with_span(Some(span.clone()))
            })
        };
        let min = narrow(min)?;
        let max = max.map(narrow).transpose()?;
        Ok((min, max, span))
    }

    fn edge_decl(
        &mut self,
        graph: &mut ArgumentGraph,
        info: &mut SourceInfo,
        first: &mut FirstSpans,
    ) -> Result<Option<ElementKey>, Diagnostic> {
        let start = self.cur.peek();
        let (src_text, src_span) = self.cur.expect_ref("edge source")?;
        let source = self.local_id(&src_text, &src_span, "edge source")?;
        self.cur.expect(&Tok::Arrow)?;
        let (dst_text, dst_span) = self.cur.expect_ref("edge target")?;
        let target = self.any_id(&dst_text, &dst_span)?;
        self.cur.expect(&Tok::Colon)?;
        let kind = self.edge_kind()?;
        let mut decorations: Vec<(EdgeDecoration, SourceSpan)> = Vec::new();
        loop {
            if self.cur.at_word("mult") {
                let t = self.cur.bump();
                let (min, max, _) = self.range(true)?;
                let span = self.cur.span_from(t);
                match EdgeDecoration::multiplicity(min, max) {
                    Ok(d) => decorations.push((d, span)),
                    Err(e) => {
                        self.diags
                            .push(Diagnostic::error("P006", e.to_string()).with_span(Some(span)));
                    }
                }
            } else if self.cur.at_word("optional") {
                let t = self.cur.bump();
                decorations.push((EdgeDecoration::Optional, t.span(self.file())));
            } else if self.cur.at_word("choice")
                && !matches!(&self.cur.peek_at(2).tok, Tok::Ident(w) if w == "at")
            {
                let t = self.cur.bump();
                let (group, _) = self.cur.expect_ident("choice group name")?;
                decorations.push((
                    EdgeDecoration::ChoiceMember { group },
                    self.cur.span_from(t),
                ));
            } else {
                break;
            }
        }
        let span = self.cur.span_from(start);
        let mut decoration = EdgeDecoration::None;
        let mut iter = decorations.into_iter();
        if let Some((d, _)) = iter.next() {
            decoration = d;
        }
        for (_, extra) in iter {
            self.diags.push(
                Diagnostic::error("P006", "an edge carries at most one decoration")
                    .with_span(Some(extra)),
            );
        }
        let edge = Edge::new(source, target, kind).with_decoration(decoration);
        let r = edge.edge_ref();
        if edge.source == edge.target {
            self.diags.push(
                Diagnostic::error("P009", format!("edge `{r}` connects a node to itself"))
                    .with_span(Some(span)),
            );
            return Ok(None);
        }
        if let Some(prev) = first.edges.get(&r) {
            self.diags.push(
                Diagnostic::error("P008", format!("duplicate edge `{r}`"))
                    .with_span(Some(span))
                    .with_related(prev.clone()),
            );
            return Ok(None);
        }
        graph.add_edge(edge).map_err(|e| model_diag(e, &span))?;
        first.edges.insert(r.clone(), span.clone());
        let key = ElementKey::Edge(r);
        info.spans.insert(key.clone(), span);
        Ok(Some(key))
    }

    fn choice_decl(
        &mut self,
        graph: &mut ArgumentGraph,
        info: &mut SourceInfo,
        first: &mut FirstSpans,
    ) -> Result<Option<ElementKey>, Diagnostic> {
        let start = self.cur.bump();
        let (group, group_tok) = self.cur.expect_ident("choice group name")?;
        self.cur.expect_word("at")?;
        let (src_text, src_span) = self.cur.expect_ref("choice source node")?;
        let source = self.local_id(&src_text, &src_span, "choice source")?;
        self.cur.expect_word("pick")?;
        let (min, max, range_span) = self.range(false)?;
        let max = max.unwrap_or(min);
        let span = self.cur.span_from(start);
        if min > max {
            self.diags.push(
                Diagnostic::error(
                    "P006",
                    format!("choice range {min}..{max} has min greater than max"),
                )
                .with_span(Some(range_span)),
            );
        }
        if let Some(prev) = first.groups.get(&group) {
            self.diags.push(
                Diagnostic::error("P003", format!("duplicate choice group `{group}`"))
                    .with_span(Some(group_tok.span(self.file())))
                    .with_related(prev.clone()),
            );
            return Ok(None);
        }
        graph
            .add_choice_group(ChoiceGroup {
                group: group.clone(),
                source,
                min,
                max,
            })
            .map_err(|e| model_diag(e, &span))?;
        first
            .groups
            .insert(group.clone(), group_tok.span(self.file()));
        let key = ElementKey::Choice(group);
        info.spans.insert(key.clone(), span);
        Ok(Some(key))
    }

    fn acp_decl(
        &mut self,
        graph: &mut ArgumentGraph,
        info: &mut SourceInfo,
        first: &mut FirstSpans,
    ) -> Result<Option<ElementKey>, Diagnostic> {
        let start = self.cur.bump();
        let (id, id_tok) = self.cur.expect_ident("ACP identifier")?;
        self.cur.expect_word("on")?;
        self.cur.expect(&Tok::LParen)?;
        let (src_text, src_span) = self.cur.expect_ref("edge source")?;
        let source = self.local_id(&src_text, &src_span, "edge source")?;
        self.cur.expect(&Tok::Arrow)?;
        let (dst_text, dst_span) = self.cur.expect_ref("edge target")?;
        let target = self.any_id(&dst_text, &dst_span)?;
        self.cur.expect(&Tok::Colon)?;
        let kind = self.edge_kind()?;
        self.cur.expect(&Tok::RParen)?;
        self.cur.expect_word("confidence")?;
        let (module, _) = self.cur.expect_ident("confidence module name")?;
        let span = self.cur.span_from(start);
        if let Some(prev) = first.acps.get(&id) {
            self.diags.push(
                Diagnostic::error("P003", format!("duplicate ACP id `{id}`"))
                    .with_span(Some(id_tok.span(self.file())))
                    .with_related(prev.clone()),
            );
            return Ok(None);
        }
        graph
            .add_acp(AssuranceClaimPoint {
                id: id.clone(),
                edge: EdgeRef::new(source, target, kind),
                confidence_module: module,
            })
            .map_err(|e| model_diag(e, &span))?;
        first.acps.insert(id.clone(), id_tok.span(self.file()));
        let key = ElementKey::Acp(id);
        info.spans.insert(key.clone(), span);
        Ok(Some(key))
    }

    fn public_decl(
        &mut self,
        graph: &mut ArgumentGraph,
        info: &mut SourceInfo,
        first: &mut FirstSpans,
    ) -> Result<Option<ElementKey>, Diagnostic> {
        let start = self.cur.bump();
        loop {
            let (text, span) = self.cur.expect_ref("public node id")?;
            let id = self.local_id(&text, &span, "public id")?;
            first.public.entry(id.clone()).or_insert(span);
            graph.add_public(id);
            if !self.cur.eat(&Tok::Comma) {
                break;
            }
        }
        let span = self.cur.span_from(start);
        info.spans.insert(ElementKey::Public, span);
        Ok(Some(ElementKey::Public))
    }

    /// `P005` for local references that name no node of the module.
    fn check_resolution(&mut self, graph: &ArgumentGraph, info: &SourceInfo, first: &FirstSpans) {
        let ids: HashSet<&NodeId> = graph.nodes().iter().map(|n| &n.id).collect();
        let missing = |id: &NodeId| !id.is_qualified() && !ids.contains(id);
        let module = graph.module_name();
        let mut report = |id: &NodeId, span: Option<SourceSpan>, what: &str| {
            self.diags.push(
                Diagnostic::error(
                    "P005",
                    format!("unresolved reference `{id}` in {what} of module `{module}`"),
                )
                .with_span(span),
            );
        };
        for e in graph.edges() {
            let span = info.span(&ElementKey::Edge(e.edge_ref()));
            for id in [&e.source, &e.target] {
                if missing(id) {
                    report(id, span.clone(), "edge");
                }
            }
        }
        for g in graph.choice_groups() {
            if missing(&g.source) {
                report(
                    &g.source,
                    info.span(&ElementKey::Choice(g.group.clone())),
                    "choice group",
                );
            }
        }
        for a in graph.acps() {
            let span = info.span(&ElementKey::Acp(a.id.clone()));
            for id in [&a.edge.source, &a.edge.target] {
                if missing(id) {
                    report(id, span.clone(), "ACP");
                }
            }
        }
        for p in graph.public_ids() {
            if missing(p) {
                let span = first
                    .public
                    .get(p)
                    .cloned()
                    .or_else(|| info.span(&ElementKey::Public));
                report(p, span, "public list");
            }
        }
    }
}

#[derive(Default)]
struct FirstSpans {
    nodes: HashMap<NodeId, SourceSpan>,
    edges: HashMap<EdgeRef, SourceSpan>,
    groups: HashMap<String, SourceSpan>,
    acps: HashMap<String, SourceSpan>,
    public: HashMap<NodeId, SourceSpan>,
}

fn model_diag(e: ModelError, span: &SourceSpan) -> Diagnostic {
    Diagnostic::error("P002", e.to_string()).with_span(Some(span.clone()))
}

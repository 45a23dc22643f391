use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use crate::diagnostic::{Diagnostic, SourceSpan};
use crate::dsl::{lex, normalize_newlines, parse, Cursor, ModuleDecl, Tok};
use crate::model::{ArgumentGraph, NodeId};

/// Role a module plays in the case architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchitectureTag {
    Ethics,
    System,
    PurposeSpecificModel,
    GeneralPurposeModel,
    Confidence,
    Other,
}

impl ArchitectureTag {
    pub const ALL: [ArchitectureTag; 6] = [
        ArchitectureTag::Ethics,
        ArchitectureTag::System,
        ArchitectureTag::PurposeSpecificModel,
        ArchitectureTag::GeneralPurposeModel,
        ArchitectureTag::Confidence,
        ArchitectureTag::Other,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            ArchitectureTag::Ethics => "ethics",
            ArchitectureTag::System => "system",
            ArchitectureTag::PurposeSpecificModel => "purpose_specific_model",
            ArchitectureTag::GeneralPurposeModel => "general_purpose_model",
            ArchitectureTag::Confidence => "confidence",
            ArchitectureTag::Other => "other",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.keyword() == word)
    }

    pub fn is_model(self) -> bool {
        matches!(
            self,
            ArchitectureTag::PurposeSpecificModel | ArchitectureTag::GeneralPurposeModel
        )
    }
}

impl fmt::Display for ArchitectureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkKind {
    SupportedBy,
    Optional,
}

impl LinkKind {
    pub fn keyword(self) -> &'static str {
        match self {
            LinkKind::SupportedBy => "supported_by",
            LinkKind::Optional => "optional",
        }
    }
}

/// `from` names a module reference or away goal of one module; `to` names
/// another module (its root) or one of its public goals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionLink {
    pub from: NodeId,
    pub to_module: String,
    pub to_node: Option<NodeId>,
    pub kind: LinkKind,
    pub span: Option<SourceSpan>,
}

impl CompositionLink {
    pub fn new(
        from: NodeId,
        to_module: impl Into<String>,
        to_node: Option<NodeId>,
        kind: LinkKind,
    ) -> Self {
        CompositionLink {
            from,
            to_module: to_module.into(),
            to_node,
            kind,
            span: None,
        }
    }

    pub fn from_module(&self) -> &str {
        self.from.module().unwrap_or_default()
    }

    pub fn to_text(&self) -> String {
        match &self.to_node {
            Some(n) => format!("{}::{}", self.to_module, n),
            None => self.to_module.clone(),
        }
    }
}

impl fmt::Display for CompositionLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} : {}",
            self.from,
            self.to_text(),
            self.kind.keyword()
        )
    }
}

#[derive(Debug, Clone)]
pub struct ArchiveModule {
    pub decl: ModuleDecl,
    pub tag: ArchitectureTag,
    /// Path as written in the manifest, if loaded from one.
    pub path: Option<String>,
    pub span: Option<SourceSpan>,
}

impl ArchiveModule {
    pub fn new(decl: ModuleDecl, tag: ArchitectureTag) -> Self {
        ArchiveModule {
            decl,
            tag,
            path: None,
            span: None,
        }
    }

    pub fn name(&self) -> &str {
        self.decl.graph.module_name()
    }

    pub fn graph(&self) -> &ArgumentGraph {
        &self.decl.graph
    }
}

/// Named modules plus the links that wire them into one case.
#[derive(Debug, Clone, Default)]
pub struct CaseArchive {
    pub modules: Vec<ArchiveModule>,
    pub links: Vec<CompositionLink>,
    /// Trace file named by the manifest, relative to it.
    pub trace: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArchiveError {
    #[error("duplicate module `{0}`")]
    DuplicateModule(String),
    #[error("unknown module `{0}`")]
    UnknownModule(String),
}

impl CaseArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn module(&self, name: &str) -> Option<&ArchiveModule> {
        self.modules.iter().find(|m| m.name() == name)
    }

    pub fn add_module(&mut self, module: ArchiveModule) -> Result<(), ArchiveError> {
        if self.module(module.name()).is_some() {
            return Err(ArchiveError::DuplicateModule(module.name().to_string()));
        }
        self.modules.push(module);
        Ok(())
    }

    pub fn add_link(&mut self, link: CompositionLink) {
        self.links.push(link);
    }

    /// Union of two archives; module names must be disjoint.
    pub fn merge(&self, other: &CaseArchive) -> Result<CaseArchive, ArchiveError> {
        let mut out = self.clone();
        for m in &other.modules {
            out.add_module(m.clone())?;
        }
        out.links.extend(other.links.iter().cloned());
        if out.trace.is_none() {
            out.trace = other.trace.clone();
        }
        Ok(out)
    }

    /// The archive without `name` and without every link touching it.
    pub fn without_module(&self, name: &str) -> Result<CaseArchive, ArchiveError> {
        if self.module(name).is_none() {
            return Err(ArchiveError::UnknownModule(name.to_string()));
        }
        let mut out = self.clone();
        out.modules.retain(|m| m.name() != name);
        out.links
            .retain(|l| l.from_module() != name && l.to_module != name);
        Ok(out)
    }

    /// Adds a copy of module `name` called `copy`, together with copies of
    /// its outgoing links.
    pub fn duplicate_module(&self, name: &str, copy: &str) -> Result<CaseArchive, ArchiveError> {
        let original = self
            .module(name)
            .ok_or_else(|| ArchiveError::UnknownModule(name.to_string()))?;
        let mut dup = original.clone();
        dup.decl.graph.set_module_name(copy);
        let mut out = self.clone();
        out.add_module(dup)?;
        for l in self.links.iter().filter(|l| l.from_module() == name) {
            let mut l = l.clone();
            l.from = NodeId::qualified(copy, &l.from)
                .map_err(|_| ArchiveError::UnknownModule(copy.to_string()))?;
            out.links.push(l);
        }
        Ok(out)
    }
}

/// Loads a `.case` manifest and every module file it names, resolving paths
/// relative to the manifest.
pub fn load_archive(path: &Path) -> Result<CaseArchive, Vec<Diagnostic>> {
    let file = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| {
        vec![Diagnostic::error(
            "C010",
            format!("cannot read `{file}`: {e}"),
        )]
    })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_archive(&text, &file, |p| {
        let full = base.join(p);
        std::fs::read_to_string(&full).map_err(|e| format!("cannot read `{}`: {e}", full.display()))
    })
}

/// Parses manifest text, reading module files through `read`:
///
/// ```text
/// module ethics = "ethics.gsn" tag ethics
/// link ethics::M_SYSTEM -> system : supported_by
/// trace "wildfire.trc"
/// ```
pub fn parse_archive<F>(text: &str, file: &str, mut read: F) -> Result<CaseArchive, Vec<Diagnostic>>
where
    F: FnMut(&str) -> Result<String, String>,
{
    let manifest = parse_manifest(text, file)?;
    let mut diags = Vec::new();
    let mut archive = CaseArchive::new();
    let mut documents: HashMap<String, Option<crate::dsl::Document>> = HashMap::new();

    for entry in &manifest.modules {
        let doc = documents
            .entry(entry.path.clone())
            .or_insert_with(|| match read(&entry.path) {
                Ok(src) => {
                    let out = parse(&src, &entry.path);
                    if out.has_errors() {
                        diags.extend(out.diagnostics.into_iter().filter(Diagnostic::is_error));
                        None
                    } else {
                        Some(out.document)
                    }
                }
                Err(msg) => {
                    diags.push(Diagnostic::error("C010", msg).with_span(Some(entry.span.clone())));
                    None
                }
            });
        let Some(doc) = doc else { continue };
        let Some(decl) = doc.module(&entry.name) else {
            diags.push(
                Diagnostic::error(
                    "C010",
                    format!("`{}` has no module `{}`", entry.path, entry.name),
                )
                .with_span(Some(entry.span.clone())),
            );
            continue;
        };
        let module = ArchiveModule {
            decl: decl.clone(),
            tag: entry.tag,
            path: Some(entry.path.clone()),
            span: Some(entry.span.clone()),
        };
        if archive.add_module(module).is_err() {
            diags.push(
                Diagnostic::error("C004", format!("duplicate module `{}`", entry.name))
                    .with_span(Some(entry.span.clone())),
            );
        }
    }
    archive.links = manifest.links;
    archive.trace = manifest.trace;
    if diags.is_empty() {
        Ok(archive)
    } else {
        Err(diags)
    }
}

struct ModuleEntry {
    name: String,
    path: String,
    tag: ArchitectureTag,
    span: SourceSpan,
}

struct Manifest {
    modules: Vec<ModuleEntry>,
    links: Vec<CompositionLink>,
    trace: Option<String>,
}

fn parse_manifest(text: &str, file: &str) -> Result<Manifest, Vec<Diagnostic>> {
    let text = normalize_newlines(text);
    let lexed = lex(&text, file);
    let mut diags = lexed.diagnostics;
    let mut c = Cursor::new(&lexed.tokens, file);
    let mut m = Manifest {
        modules: Vec::new(),
        links: Vec::new(),
        trace: None,
    };
    while !c.at_eof() {
        let line = c.peek().line;
        if let Err(d) = manifest_entry(&mut c, &mut m) {
            diags.push(d);
            c.skip_through_line(line);
        }
    }
    if diags.iter().any(Diagnostic::is_error) {
        Err(diags)
    } else {
        Ok(m)
    }
}

fn manifest_entry(c: &mut Cursor<'_>, m: &mut Manifest) -> Result<(), Diagnostic> {
    let start = c.peek();
    let (word, _) = c.expect_ident("`module`, `link` or `trace`")?;
    match word.as_str() {
        "module" => {
            let (name, _) = c.expect_ident("module name")?;
            c.expect(&Tok::Eq)?;
            let (path, _) = c.expect_string("module file path")?;
            c.expect_word("tag")?;
            let (tag, t) = c.expect_ident("architecture tag")?;
            let tag = ArchitectureTag::from_keyword(&tag).ok_or_else(|| {
                Diagnostic::error("P002", format!("unknown architecture tag `{tag}`"))
                    .with_span(Some(t.span(c.file)))
            })?;
            m.modules.push(ModuleEntry {
                name,
                path,
                tag,
                span: c.span_from(start),
            });
        }
        "link" => {
            let (from, from_span) = c.expect_ref("qualified module reference")?;
            let from = NodeId::new(from)
                .ok()
                .filter(NodeId::is_qualified)
                .ok_or_else(|| {
                    Diagnostic::error("P002", "link source must be `module::id`")
                        .with_span(Some(from_span))
                })?;
            c.expect(&Tok::Arrow)?;
            let (to, to_span) = c.expect_ref("target module or `module::id`")?;
            let (to_module, to_node) = match to.split_once("::") {
                Some((module, node)) => (
                    module.to_string(),
                    Some(NodeId::new(node).map_err(|e| {
                        Diagnostic::error("P002", e.to_string()).with_span(Some(to_span))
                    })?),
                ),
                None => (to, None),
            };
            c.expect(&Tok::Colon)?;
            let (kind, t) = c.expect_ident("`supported_by` or `optional`")?;
            let kind = match kind.as_str() {
                "supported_by" => LinkKind::SupportedBy,
                "optional" => LinkKind::Optional,
                _ => {
                    return Err(
                        Diagnostic::error("P002", format!("unknown link kind `{kind}`"))
                            .with_span(Some(t.span(c.file))),
                    )
                }
            };
            m.links.push(CompositionLink {
                from,
                to_module,
                to_node,
                kind,
                span: Some(c.span_from(start)),
            });
        }
        "trace" => {
            let (path, _) = c.expect_string("trace file path")?;
            if m.trace.is_some() {
                return Err(Diagnostic::error("P003", "more than one trace file")
                    .with_span(Some(c.span_from(start))));
            }
            m.trace = Some(path);
        }
        other => {
            return Err(Diagnostic::error(
                "P002",
                format!("expected `module`, `link` or `trace`, found `{other}`"),
            )
            .with_span(Some(start.span(c.file))))
        }
    }
    Ok(())
}

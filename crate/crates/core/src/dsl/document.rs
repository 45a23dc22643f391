use std::collections::HashMap;
use std::fmt;

use crate::diagnostic::SourceSpan;
use crate::model::{ArgumentGraph, EdgeRef, NodeId};

/// Whether a module is a reusable pattern or a concrete instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModuleKind {
    Pattern,
    Instance,
}

impl ModuleKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ModuleKind::Pattern => "pattern",
            ModuleKind::Instance => "module",
        }
    }
}

impl fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModuleKind::Pattern => "pattern",
            ModuleKind::Instance => "instance",
        })
    }
}

/// Addresses one declaration inside a module.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ElementKey {
    Node(NodeId),
    Edge(EdgeRef),
    Choice(String),
    Acp(String),
    Public,
}

/// Source positions and comments attached to a parsed module. Not part of
/// structural equality.
#[derive(Debug, Clone, Default)]
pub struct SourceInfo {
    pub file: String,
    pub module_span: Option<SourceSpan>,
    pub spans: HashMap<ElementKey, SourceSpan>,
    /// Own-line comments preceding a declaration.
    pub leading: HashMap<ElementKey, Vec<String>>,
    /// A comment on the same line as the end of a declaration.
    pub trailing: HashMap<ElementKey, String>,
    /// Comments before the `module`/`pattern` keyword.
    pub header: Vec<String>,
    /// Comments before the closing brace.
    pub footer: Vec<String>,
}

impl SourceInfo {
    pub fn span(&self, key: &ElementKey) -> Option<SourceSpan> {
        self.spans.get(key).cloned()
    }
}

#[derive(Debug, Clone)]
pub struct ModuleDecl {
    pub kind: ModuleKind,
    pub graph: ArgumentGraph,
    pub source: SourceInfo,
}

impl ModuleDecl {
    pub fn new(kind: ModuleKind, graph: ArgumentGraph) -> Self {
        ModuleDecl {
            kind,
            graph,
            source: SourceInfo::default(),
        }
    }

    pub fn name(&self) -> &str {
        self.graph.module_name()
    }
}

impl PartialEq for ModuleDecl {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.graph == other.graph
    }
}

/// Parsed contents of one `.gsn` file.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub modules: Vec<ModuleDecl>,
    /// Comments after the last module.
    pub trailing_comments: Vec<String>,
}

impl Document {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(kind: ModuleKind, graph: ArgumentGraph) -> Self {
        Document {
            modules: vec![ModuleDecl::new(kind, graph)],
            trailing_comments: Vec::new(),
        }
    }

    pub fn module(&self, name: &str) -> Option<&ModuleDecl> {
        self.modules.iter().find(|m| m.name() == name)
    }

    pub fn graphs(&self) -> impl Iterator<Item = &ArgumentGraph> {
        self.modules.iter().map(|m| &m.graph)
    }
}

/// Structural equality: module kinds and graphs, ignoring spans and comments.
impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        self.modules == other.modules
    }
}

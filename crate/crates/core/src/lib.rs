//! Goal Structuring Notation (GSN) toolkit: argument graphs, a textual
//! format, well-formedness rules, pattern instantiation, multi-module case
//! composition and hazard/requirement/evidence traceability.

pub mod composer;
pub mod diagnostic;
pub mod dsl;
pub mod export;
pub mod library;
pub mod model;
pub mod pattern;
pub mod placeholder;
pub mod trace;
pub mod validator;

pub use composer::{check_architecture, compose, ArchitectureReport, CaseArchive};
pub use diagnostic::{Diagnostic, Severity, SourceSpan};
pub use dsl::{parse, serialize, Document, ModuleDecl, ModuleKind};
pub use export::{from_json, to_dot, to_json};
pub use library::{catalog, load, LibraryEntry, Loaded};
pub use model::{
    ArgumentGraph, AssuranceClaimPoint, ChoiceGroup, Edge, EdgeDecoration, EdgeKind, EdgeRef,
    ModelError, Node, NodeId, NodeKind,
};
pub use pattern::{completeness, instantiate, BindingSet, InstantiationReport};
pub use trace::{
    coverage, impact, link_to_case, parse_trace, CoverageReport, ImpactReport, TraceModel,
};
pub use validator::{check_acyclic, validate, validate_graph, RuleCode};

//! Shipped argument patterns and sample cases.
//!
//! Every file is embedded at build time, so loading never touches the file
//! system. [`catalog`] lists the entries in a fixed order and each entry
//! carries the structure its file is expected to contain.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::composer::{compose, parse_archive, CaseArchive};
use crate::diagnostic::Diagnostic;
use crate::dsl::{parse, ModuleDecl};
use crate::model::{ArgumentGraph, EdgeKind, EdgeRef, NodeId, NodeKind};
use crate::trace::{parse_trace, TraceModel};
use crate::validator::validate_module;

/// Shipped files as `(path, contents)`, paths relative to the project root.
pub const FILES: &[(&str, &str)] = &[
    (
        "patterns/big_top.gsn",
        include_str!("../../../patterns/big_top.gsn"),
    ),
    (
        "patterns/ethics.gsn",
        include_str!("../../../patterns/ethics.gsn"),
    ),
    (
        "patterns/justice.gsn",
        include_str!("../../../patterns/justice.gsn"),
    ),
    (
        "patterns/system.gsn",
        include_str!("../../../patterns/system.gsn"),
    ),
    (
        "patterns/amlas_scoping.gsn",
        include_str!("../../../patterns/amlas_scoping.gsn"),
    ),
    (
        "patterns/gpai.gsn",
        include_str!("../../../patterns/gpai.gsn"),
    ),
    (
        "samples/wildfire/wildfire.case",
        include_str!("../../../samples/wildfire/wildfire.case"),
    ),
    (
        "samples/wildfire/ethics.gsn",
        include_str!("../../../samples/wildfire/ethics.gsn"),
    ),
    (
        "samples/wildfire/justice.gsn",
        include_str!("../../../samples/wildfire/justice.gsn"),
    ),
    (
        "samples/wildfire/values.gsn",
        include_str!("../../../samples/wildfire/values.gsn"),
    ),
    (
        "samples/wildfire/system.gsn",
        include_str!("../../../samples/wildfire/system.gsn"),
    ),
    (
        "samples/wildfire/model.gsn",
        include_str!("../../../samples/wildfire/model.gsn"),
    ),
    (
        "samples/wildfire/confidence.gsn",
        include_str!("../../../samples/wildfire/confidence.gsn"),
    ),
    (
        "samples/wildfire/wildfire.trc",
        include_str!("../../../samples/wildfire/wildfire.trc"),
    ),
    (
        "samples/wildfire/ethics.bindings",
        include_str!("../../../samples/wildfire/ethics.bindings"),
    ),
    (
        "samples/wildfire/justice.bindings",
        include_str!("../../../samples/wildfire/justice.bindings"),
    ),
    (
        "samples/wildfire/system.bindings",
        include_str!("../../../samples/wildfire/system.bindings"),
    ),
    (
        "samples/sepsis/sepsis.case",
        include_str!("../../../samples/sepsis/sepsis.case"),
    ),
    (
        "samples/sepsis/model.gsn",
        include_str!("../../../samples/sepsis/model.gsn"),
    ),
    (
        "samples/sepsis/sepsis.trc",
        include_str!("../../../samples/sepsis/sepsis.trc"),
    ),
];

pub fn file(path: &str) -> Option<&'static str> {
    FILES.iter().find(|(p, _)| *p == path).map(|(_, t)| *t)
}

/// Structure an entry must contain. Ids and edge endpoints of case entries
/// are qualified ids of the composed graph.
#[derive(Debug, Clone, Copy, Default)]
pub struct Expected {
    pub min_nodes: &'static [(NodeKind, usize)],
    pub ids: &'static [&'static str],
    pub edges: &'static [(&'static str, &'static str, EdgeKind)],
    /// `(id, fragment)`: the node's statement contains the fragment.
    pub fragments: &'static [(&'static str, &'static str)],
    /// The single root's statement starts with this text.
    pub root_prefix: Option<&'static str>,
    pub min_acps: usize,
    pub acps_on: &'static [(&'static str, &'static str, EdgeKind)],
    pub modules: &'static [&'static str],
}

#[derive(Debug, Clone, Copy)]
pub struct LibraryEntry {
    pub name: &'static str,
    /// A `.gsn` pattern or a `.case` manifest.
    pub path: &'static str,
    pub expected: Expected,
    pub provenance: &'static str,
}

impl LibraryEntry {
    pub fn is_case(&self) -> bool {
        self.path.ends_with(".case")
    }
}

#[derive(Debug, Clone)]
pub struct LoadedCase {
    pub archive: CaseArchive,
    pub trace: Option<TraceModel>,
}

#[derive(Debug, Clone)]
pub enum Loaded {
    Pattern(Box<ModuleDecl>),
    Case(LoadedCase),
}

impl Loaded {
    /// The pattern graph, or the composed graph of a case.
    pub fn graph(&self) -> ArgumentGraph {
        match self {
            Loaded::Pattern(m) => m.graph.clone(),
            Loaded::Case(c) => compose(&c.archive).0,
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum LibraryError {
    #[error("unknown library entry `{0}`")]
    UnknownName(String),
    #[error("library file `{path}` is corrupted: {}", first_message(.diagnostics))]
    Corrupted {
        path: String,
        diagnostics: Vec<Diagnostic>,
    },
}

fn first_message(d: &[Diagnostic]) -> String {
    d.first()
        .map(|d| format!("{} {}", d.code, d.message))
        .unwrap_or_default()
}

const CATALOG: &[LibraryEntry] = &[
    LibraryEntry {
        name: "big_top",
        path: "patterns/big_top.gsn",
        expected: Expected {
            min_nodes: &[(NodeKind::ModuleRef, 4)],
            ids: &["M_ETHICS", "M_SYSTEM", "M_PSM", "M_GPM"],
            edges: &[
                ("M_ETHICS", "M_SYSTEM", EdgeKind::SupportedBy),
                ("M_SYSTEM", "M_PSM", EdgeKind::SupportedBy),
                ("M_SYSTEM", "M_GPM", EdgeKind::SupportedBy),
                ("M_PSM", "M_GPM", EdgeKind::SupportedBy),
            ],
            fragments: &[],
            root_prefix: Some("AI Ethics Argument"),
            min_acps: 0,
            acps_on: &[],
            modules: &[],
        },
        provenance: "figure \"The Balanced, Integrated and Grounded (BIG) argument, represented in GSN\"",
    },
    LibraryEntry {
        name: "ethics",
        path: "patterns/ethics.gsn",
        expected: Expected {
            min_nodes: &[(NodeKind::Goal, 1), (NodeKind::ModuleRef, 6)],
            ids: &["M_JUSTICE", "M_BENEFICENCE", "M_NON_MALEFICENCE", "M_HUMAN_AUTONOMY", "M_TRANSPARENCY", "M_SYSTEM"],
            edges: &[],
            fragments: &[],
            root_prefix: None,
            min_acps: 0,
            acps_on: &[],
            modules: &[],
        },
        provenance: "figure \"The Ethical Argument represented in GSN\"",
    },
    LibraryEntry {
        name: "justice",
        path: "patterns/justice.gsn",
        expected: Expected {
            min_nodes: &[(NodeKind::Strategy, 2), (NodeKind::Goal, 4)],
            ids: &["JA1", "JA2", "JG3", "JG4", "JG5"],
            edges: &[("JA2", "JG5", EdgeKind::SupportedBy)],
            fragments: &[
                ("JG3", "nacceptable role combinations are eliminated"),
                ("JG4", "does not entrench existing inequalities"),
            ],
            root_prefix: Some("distribution of benefit, tolerable residual risk"),
            min_acps: 0,
            acps_on: &[],
            modules: &[],
        },
        provenance: "figure \"Justice argument module of the PRAISE pattern represented in GSN\"",
    },
    LibraryEntry {
        name: "system",
        path: "patterns/system.gsn",
        expected: Expected {
            min_nodes: &[(NodeKind::Goal, 5), (NodeKind::Strategy, 1), (NodeKind::Context, 4), (NodeKind::Justification, 1)],
            ids: &["G0", "G1", "G3", "G7", "G9", "S3", "J1", "C1", "C2", "C3", "C4"],
            edges: &[("G3", "C2", EdgeKind::InContextOf)],
            fragments: &[
                ("G0", "sufficiently safe throughout its entire operational life"),
                ("G0", "{AI System (AIS)}"),
                ("J1", "Safe Operating Concept (SOC)"),
            ],
            root_prefix: Some("{AI System (AIS)}"),
            min_acps: 2,
            acps_on: &[("G3", "C2", EdgeKind::InContextOf)],
            modules: &[],
        },
        provenance: "figure \"The AI System Argument represented in GSN\"",
    },
    LibraryEntry {
        name: "amlas_scoping",
        path: "patterns/amlas_scoping.gsn",
        expected: Expected {
            min_nodes: &[(NodeKind::Goal, 8)],
            ids: &[
                "G3.1",
                "G3.2",
                "G_SCOPING",
                "G_REQUIREMENTS",
                "G_DATA",
                "G_LEARNING",
                "G_VERIFICATION",
                "G_DEPLOYMENT",
            ],
            edges: &[],
            fragments: &[
                ("G3.1", "satisfies its allocated system safety requirements"),
                ("G_SCOPING", "ML Safety Assurance Scoping"),
                ("G_REQUIREMENTS", "ML Safety Requirements Assurance"),
                ("G_DATA", "Data Management Assurance"),
                ("G_LEARNING", "Model Learning Assurance"),
                ("G_VERIFICATION", "Model Verification Assurance"),
                ("G_DEPLOYMENT", "Model Deployment Assurance"),
            ],
            root_prefix: Some("{ML Model} satisfies"),
            min_acps: 0,
            acps_on: &[],
            modules: &[],
        },
        provenance: "figure \"The Purpose-specific AI Model Safety Argument represented in GSN (bird's-eye view)\"",
    },
    LibraryEntry {
        name: "gpai",
        path: "patterns/gpai.gsn",
        expected: Expected {
            min_nodes: &[(NodeKind::Goal, 1), (NodeKind::Context, 2)],
            ids: &["GPG1", "GPC3", "GPC5"],
            edges: &[],
            fragments: &[("GPC3", "unacceptable outcomes"), ("GPC5", "credible AI advisors")],
            root_prefix: Some("GPAI capabilities do not cause unacceptable outcomes"),
            min_acps: 0,
            acps_on: &[],
            modules: &[],
        },
        provenance: "figure \"A General-Purpose AI Model Safety Argument represented in GSN\"",
    },
    LibraryEntry {
        name: "wildfire_case",
        path: "samples/wildfire/wildfire.case",
        expected: Expected {
            min_nodes: &[(NodeKind::Solution, 4)],
            ids: &["ethics::EG1", "justice::JG1", "system::G0", "system::G9_1", "system::G9_2", "model::G3.1"],
            edges: &[
                ("ethics::EA1", "system::G0", EdgeKind::SupportedBy),
                ("system::S3_1", "model::G3.1", EdgeKind::SupportedBy),
                ("system::S3_2", "model::G3.1", EdgeKind::SupportedBy),
            ],
            fragments: &[("system::G0", "Wildfire Alert System is sufficiently safe throughout its entire operational life")],
            root_prefix: None,
            min_acps: 2,
            acps_on: &[("system::G3", "system::C2", EdgeKind::InContextOf)],
            modules: &["ethics", "justice", "beneficence", "non_maleficence", "human_autonomy", "system", "model"],
        },
        provenance: "instances of the ethics, justice and system patterns for the satellite wildfire alert example, with the requirements table as its trace",
    },
    LibraryEntry {
        name: "sepsis_trace",
        path: "samples/sepsis/sepsis.case",
        expected: Expected {
            min_nodes: &[(NodeKind::Solution, 3)],
            ids: &["model::G3.1", "model::G_VASO"],
            edges: &[],
            fragments: &[],
            root_prefix: None,
            min_acps: 0,
            acps_on: &[],
            modules: &["model"],
        },
        provenance: "vasopressor dose change table and model changes table of the sepsis treatment example",
    },
];

/// Entries in their fixed order.
pub fn catalog() -> &'static [LibraryEntry] {
    CATALOG
}

pub fn entry(name: &str) -> Option<&'static LibraryEntry> {
    CATALOG.iter().find(|e| e.name == name)
}

fn corrupted(path: &str, diagnostics: Vec<Diagnostic>) -> LibraryError {
    LibraryError::Corrupted {
        path: path.to_string(),
        diagnostics,
    }
}

fn dir_of(path: &str) -> &str {
    path.rsplit_once('/').map(|(d, _)| d).unwrap_or("")
}

fn join(dir: &str, rel: &str) -> String {
    if dir.is_empty() {
        rel.to_string()
    } else {
        format!("{dir}/{rel}")
    }
}

/// Parses and validates an entry. Validation errors are reported as a
/// corrupted file.
pub fn load(name: &str) -> Result<Loaded, LibraryError> {
    let e = entry(name).ok_or_else(|| LibraryError::UnknownName(name.to_string()))?;
    let text = file(e.path).ok_or_else(|| corrupted(e.path, Vec::new()))?;
    if !e.is_case() {
        let out = parse(text, e.path);
        if out.has_errors() {
            return Err(corrupted(e.path, out.diagnostics));
        }
        let Some(module) = out.document.modules.into_iter().next() else {
            return Err(corrupted(e.path, Vec::new()));
        };
        let errors: Vec<Diagnostic> = validate_module(&module)
            .into_iter()
            .filter(Diagnostic::is_error)
            .collect();
        if !errors.is_empty() {
            return Err(corrupted(e.path, errors));
        }
        return Ok(Loaded::Pattern(Box::new(module)));
    }

    let dir = dir_of(e.path);
    let archive = parse_archive(text, e.path, |p| {
        let full = join(dir, p);
        file(&full)
            .map(str::to_string)
            .ok_or_else(|| format!("missing library file `{full}`"))
    })
    .map_err(|d| corrupted(e.path, d))?;
    let (_, diags) = compose(&archive);
    let errors: Vec<Diagnostic> = diags.into_iter().filter(Diagnostic::is_error).collect();
    if !errors.is_empty() {
        return Err(corrupted(e.path, errors));
    }
    let trace = match &archive.trace {
        Some(t) => {
            let path = join(dir, t);
            let text = file(&path).ok_or_else(|| corrupted(&path, Vec::new()))?;
            Some(parse_trace(text, &path).map_err(|d| corrupted(&path, d))?)
        }
        None => None,
    };
    Ok(Loaded::Case(LoadedCase { archive, trace }))
}

fn node_id(s: &str) -> NodeId {
    NodeId::new(s).expect("library ids are valid")
}

/// Every way `loaded` falls short of `expected`, as messages.
pub fn check_expected(expected: &Expected, loaded: &Loaded) -> Vec<String> {
    let g = loaded.graph();
    let mut out = Vec::new();
    let mut counts: BTreeMap<NodeKind, usize> = BTreeMap::new();
    for n in g.nodes() {
        *counts.entry(n.kind).or_default() += 1;
    }
    for (kind, min) in expected.min_nodes {
        let have = counts.get(kind).copied().unwrap_or(0);
        if have < *min {
            out.push(format!(
                "expected at least {min} {kind} nodes, found {have}"
            ));
        }
    }
    for id in expected.ids {
        if !g.contains(&node_id(id)) {
            out.push(format!("missing node `{id}`"));
        }
    }
    for (s, t, k) in expected.edges {
        if g.edge(&EdgeRef::new(node_id(s), node_id(t), *k)).is_none() {
            out.push(format!("missing edge {s} -> {t} : {k}"));
        }
    }
    for (id, fragment) in expected.fragments {
        match g.node(&node_id(id)) {
            Some(n) if n.statement.contains(fragment) => {}
            Some(_) => out.push(format!("statement of `{id}` lacks \"{fragment}\"")),
            None => out.push(format!("missing node `{id}`")),
        }
    }
    if let Some(prefix) = expected.root_prefix {
        let roots: Vec<_> = match loaded {
            Loaded::Pattern(_) => crate::composer::module_root(&g).into_iter().collect(),
            Loaded::Case(_) => Vec::new(),
        };
        match roots.first().and_then(|r| g.node(r)) {
            Some(n) if n.statement.starts_with(prefix) => {}
            Some(n) => out.push(format!("root `{}` does not start with \"{prefix}\"", n.id)),
            None => out.push("no unique root".to_string()),
        }
    }
    if g.acps().len() < expected.min_acps {
        out.push(format!(
            "expected at least {} ACPs, found {}",
            expected.min_acps,
            g.acps().len()
        ));
    }
    for (s, t, k) in expected.acps_on {
        let r = EdgeRef::new(node_id(s), node_id(t), *k);
        if !g.acps().iter().any(|a| a.edge == r) {
            out.push(format!("no ACP on {s} -> {t} : {k}"));
        }
    }
    if let Loaded::Case(c) = loaded {
        for m in expected.modules {
            if c.archive.module(m).is_none() {
                out.push(format!("missing module `{m}`"));
            }
        }
    }
    out
}

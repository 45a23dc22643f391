use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::{Document, ModuleDecl, ModuleKind};
use crate::model::{
    ArgumentGraph, AssuranceClaimPoint, ChoiceGroup, Edge, EdgeDecoration, EdgeKind, EdgeRef,
    ModelError, Node, NodeId, NodeKind,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonDocument {
    pub format_version: u32,
    pub modules: Vec<JsonModule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonModule {
    pub name: String,
    /// `pattern` or `module`.
    pub kind: String,
    pub nodes: Vec<JsonNode>,
    pub edges: Vec<JsonEdge>,
    pub choice_groups: Vec<JsonChoiceGroup>,
    pub acps: Vec<JsonAcp>,
    pub public: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonNode {
    pub id: String,
    pub kind: String,
    pub statement: String,
    pub undeveloped: bool,
    pub uninstantiated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum JsonDecoration {
    Multiplicity { min: u32, max: Option<u32> },
    Optional,
    Choice { group: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonEdge {
    pub source: String,
    pub target: String,
    pub kind: String,
    pub decoration: Option<JsonDecoration>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonChoiceGroup {
    pub group: String,
    pub source: String,
    pub min: u32,
    pub max: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonAcp {
    pub id: String,
    pub source: String,
    pub target: String,
    pub kind: String,
    pub confidence_module: String,
}

#[derive(Debug, Error)]
pub enum ImportError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("unsupported format_version {0}, expected {FORMAT_VERSION}")]
    Version(u32),
    #[error("module `{module}`: unknown {what} `{value}`")]
    Unknown {
        module: String,
        what: &'static str,
        value: String,
    },
    #[error("module `{module}`: {source}")]
    Model { module: String, source: ModelError },
}

fn module_json(kind: ModuleKind, g: &ArgumentGraph) -> JsonModule {
    JsonModule {
        name: g.module_name().to_string(),
        kind: kind.keyword().to_string(),
        nodes: g
            .nodes()
            .iter()
            .map(|n| JsonNode {
                id: n.id.to_string(),
                kind: n.kind.keyword().to_string(),
                statement: n.statement.clone(),
                undeveloped: n.undeveloped,
                uninstantiated: n.uninstantiated,
            })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| JsonEdge {
                source: e.source.to_string(),
                target: e.target.to_string(),
                kind: e.kind.keyword().to_string(),
                decoration: match &e.decoration {
                    EdgeDecoration::None => None,
                    EdgeDecoration::Multiplicity { min, max } => {
                        Some(JsonDecoration::Multiplicity {
                            min: *min,
                            max: *max,
                        })
                    }
                    EdgeDecoration::Optional => Some(JsonDecoration::Optional),
                    EdgeDecoration::ChoiceMember { group } => Some(JsonDecoration::Choice {
                        group: group.clone(),
                    }),
                },
            })
            .collect(),
        choice_groups: g
            .choice_groups()
            .iter()
            .map(|c| JsonChoiceGroup {
                group: c.group.clone(),
                source: c.source.to_string(),
                min: c.min,
                max: c.max,
            })
            .collect(),
        acps: g
            .acps()
            .iter()
            .map(|a| JsonAcp {
                id: a.id.clone(),
                source: a.edge.source.to_string(),
                target: a.edge.target.to_string(),
                kind: a.edge.kind.keyword().to_string(),
                confidence_module: a.confidence_module.clone(),
            })
            .collect(),
        public: g.public_ids().iter().map(NodeId::to_string).collect(),
    }
}

pub fn document_json(doc: &Document) -> JsonDocument {
    JsonDocument {
        format_version: FORMAT_VERSION,
        modules: doc
            .modules
            .iter()
            .map(|m| module_json(m.kind, &m.graph))
            .collect(),
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(&document_json(doc)).expect("plain data serializes");
    s.push('\n');
    s
}

/// A single graph as a one-module instance document.
pub fn graph_to_json(g: &ArgumentGraph) -> String {
    to_json(&Document::single(ModuleKind::Instance, g.clone()))
}

fn import_module(m: JsonModule) -> Result<ModuleDecl, ImportError> {
    let name = m.name;
    let unknown = |what: &'static str, value: &str| ImportError::Unknown {
        module: name.clone(),
        what,
        value: value.to_string(),
    };
    let model = |source: ModelError| ImportError::Model {
        module: name.clone(),
        source,
    };
    let id = |s: &str| NodeId::new(s).map_err(model);
    let edge_kind = |s: &str| EdgeKind::from_keyword(s).ok_or_else(|| unknown("edge kind", s));

    let kind = match m.kind.as_str() {
        "pattern" => ModuleKind::Pattern,
        "module" => ModuleKind::Instance,
        other => return Err(unknown("module kind", other)),
    };
    let mut g = ArgumentGraph::new(name.clone());
    for n in m.nodes {
        let k = NodeKind::from_keyword(&n.kind).ok_or_else(|| unknown("node kind", &n.kind))?;
        let node = Node::new(id(&n.id)?, k, n.statement)
            .undeveloped(n.undeveloped)
            .uninstantiated(n.uninstantiated);
        g.add_node(node).map_err(model)?;
    }
    for e in m.edges {
        let decoration = match e.decoration {
            None => EdgeDecoration::None,
            Some(JsonDecoration::Multiplicity { min, max }) => {
                EdgeDecoration::multiplicity(min, max).map_err(model)?
            }
            Some(JsonDecoration::Optional) => EdgeDecoration::Optional,
            Some(JsonDecoration::Choice { group }) => EdgeDecoration::ChoiceMember { group },
        };
        let edge = Edge::new(id(&e.source)?, id(&e.target)?, edge_kind(&e.kind)?)
            .with_decoration(decoration);
        g.add_edge(edge).map_err(model)?;
    }
    for c in m.choice_groups {
        g.add_choice_group(ChoiceGroup {
            group: c.group,
            source: id(&c.source)?,
            min: c.min,
            max: c.max,
        })
        .map_err(model)?;
    }
    for a in m.acps {
        g.add_acp(AssuranceClaimPoint {
            id: a.id,
            edge: EdgeRef::new(id(&a.source)?, id(&a.target)?, edge_kind(&a.kind)?),
            confidence_module: a.confidence_module,
        })
        .map_err(model)?;
    }
    for p in m.public {
        g.add_public(id(&p)?);
    }
    Ok(ModuleDecl::new(kind, g))
}

/// Reads a document written by [`to_json`]. Unknown fields and other
/// format versions are rejected.
pub fn from_json(text: &str) -> Result<Document, ImportError> {
    let raw: JsonDocument = serde_json::from_str(text)?;
    if raw.format_version != FORMAT_VERSION {
        return Err(ImportError::Version(raw.format_version));
    }
    let modules = raw
        .modules
        .into_iter()
        .map(import_module)
        .collect::<Result<_, _>>()?;
    Ok(Document {
        modules,
        trailing_comments: Vec::new(),
    })
}

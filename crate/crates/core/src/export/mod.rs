//! Graphviz and JSON renderings of argument documents.

mod dot;
mod json;


pub use dot::{graph_to_dot, to_dot};
pub use json::{
    document_json, from_json, graph_to_json, to_json, ImportError, JsonAcp, JsonChoiceGroup,
    JsonDecoration, JsonDocument, JsonEdge, JsonModule, JsonNode, FORMAT_VERSION,
};

/// JSON Schema describing [`to_json`] output.
pub const SCHEMA: &str = include_str!("../../../../schema/gsn.schema.json");

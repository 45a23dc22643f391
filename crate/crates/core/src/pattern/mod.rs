//! Pattern instantiation: role binding, multiplicity expansion, choice and
//! optional resolution, and completeness reporting.

mod bindings;
mod instantiate;

use serde::Serialize;

use crate::dsl::{ElementKey, ModuleDecl, ModuleKind};
use crate::model::{ArgumentGraph, EdgeRef, NodeId};
use crate::placeholder::occurrences;

pub use bindings::{parse_bindings, BindingSet};
pub use instantiate::{instantiate, instantiate_partial, InstantiateError};

/// What is still open in an argument after instantiation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InstantiationReport {
    /// Every placeholder occurrence, repeats included.
    pub remaining_placeholders: Vec<(NodeId, String)>,
    pub remaining_undeveloped: Vec<NodeId>,
    pub fully_instantiated: bool,
}

/// Lists remaining placeholders and undeveloped nodes of `graph`. A
/// malformed statement counts as one remaining placeholder named by its
/// raw text.
pub fn completeness(graph: &ArgumentGraph) -> InstantiationReport {
    let mut remaining_placeholders = Vec::new();
    let mut remaining_undeveloped = Vec::new();
    for n in graph.nodes() {
        match occurrences(&n.statement) {
            Ok(roles) => {
                remaining_placeholders.extend(roles.into_iter().map(|r| (n.id.clone(), r)))
            }
            Err(_) => remaining_placeholders.push((n.id.clone(), n.statement.clone())),
        }
        if n.undeveloped {
            remaining_undeveloped.push(n.id.clone());
        }
    }
    InstantiationReport {
        fully_instantiated: remaining_placeholders.is_empty(),
        remaining_placeholders,
        remaining_undeveloped,
    }
}

#[cfg(test)]
mod tests;

fn pattern_id(pattern: &ArgumentGraph, id: &NodeId) -> Option<NodeId> {
    let mut cur = id.as_str();
    loop {
        let candidate = NodeId::new(cur).ok()?;
        if pattern.contains(&candidate) {
            return Some(candidate);
        }
        let (head, tail) = cur.rsplit_once('_')?;
        if tail.is_empty() || !tail.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        cur = head;
    }
}

fn pattern_name(known: impl Fn(&str) -> bool, mut name: &str) -> Option<&str> {
    loop {
        if known(name) {
            return Some(name);
        }
        let (head, tail) = name.rsplit_once('_')?;
        if tail.is_empty() || !tail.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        name = head;
    }
}

/// Wraps an instantiated graph as an instance module, carrying over the
/// pattern's comments. Replicated elements inherit the comments of the
/// element they were copied from.
pub fn instance_module(pattern: &ModuleDecl, instance: ArgumentGraph) -> ModuleDecl {
    let p = &pattern.graph;
    let from = &pattern.source;
    let mut m = ModuleDecl::new(ModuleKind::Instance, instance);
    let mut copy = |to: ElementKey, key: ElementKey| {
        if let Some(c) = from.leading.get(&key) {
            m.source.leading.insert(to.clone(), c.clone());
        }
        if let Some(c) = from.trailing.get(&key) {
            m.source.trailing.insert(to, c.clone());
        }
    };
    for n in m.graph.nodes() {
        if let Some(id) = pattern_id(p, &n.id) {
            copy(ElementKey::Node(n.id.clone()), ElementKey::Node(id));
        }
    }
    for e in m.graph.edges() {
        if let (Some(s), Some(t)) = (pattern_id(p, &e.source), pattern_id(p, &e.target)) {
            let key = EdgeRef::new(s, t, e.kind);
            let key = if p.edge(&key).is_some() {
                key
            } else {
                continue;
            };
            copy(ElementKey::Edge(e.edge_ref()), ElementKey::Edge(key));
        }
    }
    for c in m.graph.choice_groups() {
        if let Some(g) = pattern_name(|g| p.choice_group(g).is_some(), &c.group) {
            copy(
                ElementKey::Choice(c.group.clone()),
                ElementKey::Choice(g.to_string()),
            );
        }
    }
    for a in m.graph.acps() {
        if let Some(id) = pattern_name(|id| p.acps().iter().any(|x| x.id == id), &a.id) {
            copy(
                ElementKey::Acp(a.id.clone()),
                ElementKey::Acp(id.to_string()),
            );
        }
    }
    if !m.graph.public_ids().is_empty() {
        copy(ElementKey::Public, ElementKey::Public);
    }
    m.source.header = from.header.clone();
    m.source.footer = from.footer.clone();
    m
}

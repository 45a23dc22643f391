//! Impact analysis recomputed from scratch: coverage before and after the
//! invalidation by exhaustive search, challenged claims by reverse depth
//! first search.

use std::collections::BTreeSet;

use gsnkit_core::model::{ArgumentGraph, EdgeKind, NodeId, NodeKind};
use gsnkit_core::trace::TraceModel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub affected_requirements: Vec<String>,
    pub affected_ml_requirements: Vec<String>,
    pub affected_hazards: Vec<String>,
    pub challenged_claims: Vec<NodeId>,
}

struct State {
    ml: Vec<bool>,
    requirements: Vec<bool>,
    hazards: Vec<bool>,
}

fn state(m: &TraceModel, dropped: &str) -> State {
    let backed = |id: &str| {
        m.evidence
            .iter()
            .any(|e| e.valid && e.id != dropped && e.supports.iter().any(|s| s == id))
    };
    let ml: Vec<bool> = m.ml_requirements.iter().map(|x| backed(&x.id)).collect();
    let requirements: Vec<bool> = m
        .requirements
        .iter()
        .map(|r| {
            backed(&r.id)
                || m.ml_requirements
                    .iter()
                    .zip(&ml)
                    .any(|(x, ok)| *ok && x.derived_from.contains(&r.id))
        })
        .collect();
    let hazards = m
        .hazards
        .iter()
        .map(|h| {
            m.requirements
                .iter()
                .zip(&requirements)
                .any(|(r, ok)| *ok && r.mitigates.contains(&h.id))
        })
        .collect();
    State {
        ml,
        requirements,
        hazards,
    }
}

fn lost<'a>(ids: impl Iterator<Item = &'a String>, before: &[bool], after: &[bool]) -> Vec<String> {
    ids.zip(before.iter().zip(after))
        .filter(|(_, (b, a))| **b && !**a)
        .map(|(id, _)| id.clone())
        .collect()
}

fn climb(g: &ArgumentGraph, node: &NodeId, seen: &mut BTreeSet<NodeId>) {
    if !seen.insert(node.clone()) {
        return;
    }
    for e in g.edges() {
        if e.kind == EdgeKind::SupportedBy && &e.target == node {
            climb(g, &e.source, seen);
        }
    }
}

/// What invalidating `evidence` should report.
pub fn expected(m: &TraceModel, case: Option<&ArgumentGraph>, evidence: &str) -> Expected {
    let before = state(m, "");
    let after = state(m, evidence);
    let affected_requirements = lost(
        m.requirements.iter().map(|r| &r.id),
        &before.requirements,
        &after.requirements,
    );
    let affected_ml_requirements = lost(
        m.ml_requirements.iter().map(|x| &x.id),
        &before.ml,
        &after.ml,
    );
    let affected_hazards = lost(
        m.hazards.iter().map(|h| &h.id),
        &before.hazards,
        &after.hazards,
    );

    let mut challenged = BTreeSet::new();
    if let Some(g) = case {
        let mut seen = BTreeSet::new();
        let entities = std::iter::once(evidence.to_string())
            .chain(affected_requirements.iter().cloned())
            .chain(affected_ml_requirements.iter().cloned())
            .chain(affected_hazards.iter().cloned());
        for entity in entities {
            let Some(node) = m.gsn_bindings.get(&entity) else {
                continue;
            };
            let kind = g
                .nodes()
                .iter()
                .find(|n| &n.id == node)
                .expect("bound node exists")
                .kind;
            if kind.is_contextual() {
                for e in g.edges() {
                    if e.kind == EdgeKind::InContextOf && &e.target == node {
                        climb(g, &e.source, &mut seen);
                    }
                }
            } else {
                climb(g, node, &mut seen);
            }
        }
        challenged = seen
            .into_iter()
            .filter(|id| {
                g.nodes()
                    .iter()
                    .any(|n| &n.id == id && n.kind == NodeKind::Goal)
            })
            .collect();
    }
    Expected {
        affected_requirements,
        affected_ml_requirements,
        affected_hazards,
        challenged_claims: challenged.into_iter().collect(),
    }
}

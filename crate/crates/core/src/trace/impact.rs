use std::collections::BTreeSet;

use serde::Serialize;

use crate::model::{ArgumentGraph, EdgeKind, NodeId, NodeKind};

use super::coverage::covered;
use super::model::{EntityKind, TraceError, TraceModel};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpactReport {
    pub invalidated: String,
    pub affected_requirements: Vec<String>,
    pub affected_ml_requirements: Vec<String>,
    pub affected_hazards: Vec<String>,
    /// Goals of the case whose support is weakened, in id order.
    pub challenged_claims: Vec<NodeId>,
    #[serde(skip)]
    pub model: TraceModel,
}

impl ImpactReport {
    pub fn is_empty(&self) -> bool {
        self.affected_requirements.is_empty()
            && self.affected_ml_requirements.is_empty()
            && self.affected_hazards.is_empty()
    }
}

fn lost(
    before: &BTreeSet<String>,
    after: &BTreeSet<String>,
    order: impl Iterator<Item = String>,
) -> Vec<String> {
    order
        .filter(|id| before.contains(id) && !after.contains(id))
        .collect()
}

/// What stops being covered when `evidence` is invalidated.
///
/// Affected requirements and ML requirements are those covered before and
/// not after; affected hazards are those that lose every evidenced
/// mitigating requirement. With a composed case, claims bound to any
/// affected entity or to the evidence item itself are challenged together
/// with all their ancestors; a bound context element challenges the nodes
/// that cite it.
pub fn impact(
    model: &TraceModel,
    case: Option<&ArgumentGraph>,
    evidence: &str,
) -> Result<ImpactReport, TraceError> {
    if let Some(e) = model.check().into_iter().next() {
        return Err(e);
    }
    let next = model.invalidate(evidence)?;
    let before = covered(model, |e| e.valid);
    let after = covered(&next, |e| e.valid);

    let affected_requirements = lost(
        &before.requirements,
        &after.requirements,
        model.requirements.iter().map(|r| r.id.clone()),
    );
    let affected_ml_requirements = lost(
        &before.ml_requirements,
        &after.ml_requirements,
        model.ml_requirements.iter().map(|m| m.id.clone()),
    );
    let affected_hazards = lost(
        &before.evidenced_hazards,
        &after.evidenced_hazards,
        model.hazards.iter().map(|h| h.id.clone()),
    );

    let mut challenged_claims = Vec::new();
    if let Some(g) = case {
        let bound = std::iter::once(evidence)
            .chain(affected_requirements.iter().map(String::as_str))
            .chain(affected_ml_requirements.iter().map(String::as_str))
            .chain(affected_hazards.iter().map(String::as_str))
            .filter_map(|id| model.gsn_bindings.get(id));
        challenged_claims = challenged(g, bound)?.into_iter().collect();
    }

    Ok(ImpactReport {
        invalidated: evidence.to_string(),
        affected_requirements,
        affected_ml_requirements,
        affected_hazards,
        challenged_claims,
        model: next,
    })
}

fn challenged<'a>(
    g: &ArgumentGraph,
    bound: impl Iterator<Item = &'a NodeId>,
) -> Result<BTreeSet<NodeId>, TraceError> {
    let mut hit = BTreeSet::new();
    for id in bound {
        let node = g
            .node(id)
            .ok_or_else(|| TraceError::UnknownNode(id.clone()))?;
        let mut starts = vec![id.clone()];
        if node.kind.is_contextual() {
            starts = g
                .edges()
                .iter()
                .filter(|e| e.kind == EdgeKind::InContextOf && &e.target == id)
                .map(|e| e.source.clone())
                .collect();
        }
        for s in starts {
            hit.insert(s.clone());
            hit.extend(g.ancestors(&s).expect("edge endpoints exist"));
        }
    }
    hit.retain(|n| g.node(n).is_some_and(|n| n.kind == NodeKind::Goal));
    Ok(hit)
}

/// Runs [`impact`] for every evidence item, in declaration order.
pub fn impact_all(
    model: &TraceModel,
    case: Option<&ArgumentGraph>,
) -> Result<Vec<ImpactReport>, TraceError> {
    model
        .evidence
        .iter()
        .map(|e| impact(model, case, &e.id))
        .collect()
}

/// Checks the model's bindings against a composed case: the node must
/// exist; evidence binds to solutions; hazards and requirements bind to
/// goals or context elements.
pub fn check_bindings(model: &TraceModel, case: &ArgumentGraph) -> Vec<TraceError> {
    let mut errs = Vec::new();
    for (entity, node_id) in &model.gsn_bindings {
        let Some(kind) = model.entity_kind(entity) else {
            errs.push(TraceError::UnknownEntity(entity.clone()));
            continue;
        };
        let Some(node) = case.node(node_id) else {
            errs.push(TraceError::UnknownNode(node_id.clone()));
            continue;
        };
        let ok = match kind {
            EntityKind::Evidence => node.kind == NodeKind::Solution,
            _ => node.kind == NodeKind::Goal || node.kind.is_contextual(),
        };
        if !ok {
            errs.push(TraceError::KindMismatch {
                entity: entity.clone(),
                entity_kind: kind,
                node: node_id.clone(),
                node_kind: node.kind.to_string(),
            });
        }
    }
    errs
}

/// Adds `bindings` to a copy of `model`, rejecting the lot if any binding
/// fails [`check_bindings`].
pub fn link_to_case(
    model: &TraceModel,
    case: &ArgumentGraph,
    bindings: impl IntoIterator<Item = (String, NodeId)>,
) -> Result<TraceModel, Vec<TraceError>> {
    let mut next = model.clone();
    next.gsn_bindings.extend(bindings);
    let errs = check_bindings(&next, case);
    if errs.is_empty() {
        Ok(next)
    } else {
        Err(errs)
    }
}

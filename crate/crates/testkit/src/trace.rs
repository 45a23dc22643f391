//! Random trace models with a random supporting case graph and bindings.

use gsnkit_core::model::{ArgumentGraph, Edge, EdgeKind, Node, NodeId, NodeKind};
use gsnkit_core::trace::{
    Direction, EvidenceItem, Hazard, Metric, MlSafetyRequirement, SafetyRequirement, TraceModel,
};
use proptest::prelude::*;
use proptest::sample::Index;

pub const MAX_ENTITIES: usize = 40;
pub const MAX_CASE_NODES: usize = 30;

#[derive(Debug, Clone)]
pub struct TraceCase {
    pub model: TraceModel,
    pub case: ArgumentGraph,
}

#[derive(Debug, Clone)]
struct EntitySpec {
    refs: Vec<Index>,
    valid: bool,
    bind: Option<Index>,
}

fn entity() -> impl Strategy<Value = EntitySpec> {
    (
        prop::collection::vec(any::<Index>(), 1..=3),
        prop::bool::weighted(0.85),
        prop::option::weighted(0.6, any::<Index>()),
    )
        .prop_map(|(refs, valid, bind)| EntitySpec { refs, valid, bind })
}

fn pick(refs: &[Index], from: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for r in refs {
        let id = r.get(from);
        if !out.contains(id) {
            out.push(id.clone());
        }
    }
    out
}

fn case_graph(specs: &[(u8, Vec<Index>)]) -> ArgumentGraph {
    let mut g = ArgumentGraph::new("case");
    let id = |i: usize| NodeId::new(format!("case::N{i}")).unwrap();
    let mut open: Vec<usize> = Vec::new();
    for (i, (k, parents)) in specs.iter().enumerate() {
        let kind = match (i, k % 8) {
            (0, _) | (_, 0..=2) => NodeKind::Goal,
            (_, 3 | 4) => NodeKind::Strategy,
            (_, 5 | 6) => NodeKind::Solution,
            _ => NodeKind::Context,
        };
        g.add_node(Node::new(id(i), kind, format!("node {i}")))
            .unwrap();
        if i > 0 {
            let edge_kind = if kind.is_contextual() {
                EdgeKind::InContextOf
            } else {
                EdgeKind::SupportedBy
            };
            for p in parents {
                let _ = g.add_edge(Edge::new(id(*p.get(&open)), id(i), edge_kind));
            }
        }
        if matches!(kind, NodeKind::Goal | NodeKind::Strategy) {
            open.push(i);
        }
    }
    g
}

fn build(
    hazards: Vec<EntitySpec>,
    requirements: Vec<EntitySpec>,
    ml: Vec<EntitySpec>,
    evidence: Vec<EntitySpec>,
    nodes: Vec<(u8, Vec<Index>)>,
) -> TraceCase {
    let case = case_graph(&nodes);
    let of_kind = |solution: bool| -> Vec<NodeId> {
        case.nodes()
            .iter()
            .filter(|n| {
                if solution {
                    n.kind == NodeKind::Solution
                } else {
                    n.kind == NodeKind::Goal || n.kind.is_contextual()
                }
            })
            .map(|n| n.id.clone())
            .collect()
    };
    let claims = of_kind(false);
    let solutions = of_kind(true);
    let mut model = TraceModel::default();
    let mut bind = |id: &str, spec: &EntitySpec, targets: &[NodeId]| {
        if let (Some(i), false) = (&spec.bind, targets.is_empty()) {
            model
                .gsn_bindings
                .insert(id.to_string(), i.get(targets).clone());
        }
    };

    let hazard_ids: Vec<String> = (0..hazards.len()).map(|i| format!("H{i}")).collect();
    let req_ids: Vec<String> = (0..requirements.len()).map(|i| format!("R{i}")).collect();
    let ml_ids: Vec<String> = (0..ml.len()).map(|i| format!("M{i}")).collect();
    for (id, s) in hazard_ids.iter().zip(&hazards) {
        bind(id, s, &claims);
    }
    for (id, s) in req_ids.iter().zip(&requirements) {
        bind(id, s, &claims);
    }
    for (id, s) in ml_ids.iter().zip(&ml) {
        bind(id, s, &claims);
    }
    let supportable: Vec<String> = req_ids.iter().chain(&ml_ids).cloned().collect();
    let evidence_ids: Vec<String> = (0..evidence.len()).map(|i| format!("E{i}")).collect();
    for (id, s) in evidence_ids.iter().zip(&evidence) {
        bind(id, s, &solutions);
    }

    model.hazards = hazard_ids
        .iter()
        .map(|id| Hazard {
            id: id.clone(),
            description: format!("hazard {id}"),
            severity_note: String::new(),
        })
        .collect();
    model.requirements = req_ids
        .iter()
        .zip(&requirements)
        .map(|(id, s)| SafetyRequirement {
            id: id.clone(),
            text: format!("requirement {id}"),
            quantities: Vec::new(),
            mitigates: pick(&s.refs, &hazard_ids),
        })
        .collect();
    model.ml_requirements = ml_ids
        .iter()
        .zip(&ml)
        .map(|(id, s)| MlSafetyRequirement {
            id: id.clone(),
            text: format!("ML requirement {id}"),
            derived_from: pick(&s.refs, &req_ids),
            metric: Metric {
                name: "score".into(),
                threshold: 0.9,
                direction: Direction::AtLeast,
                unit: None,
            },
        })
        .collect();
    model.evidence = evidence_ids
        .iter()
        .zip(&evidence)
        .map(|(id, s)| EvidenceItem {
            id: id.clone(),
            kind: "test_result".into(),
            supports: pick(&s.refs, &supportable),
            measured: Vec::new(),
            valid: s.valid,
        })
        .collect();
    TraceCase { model, case }
}

/// Models of at most [`MAX_ENTITIES`] entities and case graphs of at most
/// [`MAX_CASE_NODES`] nodes.
pub fn trace_case() -> impl Strategy<Value = TraceCase> {
    (
        prop::collection::vec(entity(), 1..=8),
        prop::collection::vec(entity(), 1..=10),
        prop::collection::vec(entity(), 0..=8),
        prop::collection::vec(entity(), 1..=14),
        prop::collection::vec(
            (any::<u8>(), prop::collection::vec(any::<Index>(), 1..=2)),
            1..=MAX_CASE_NODES,
        ),
    )
        .prop_map(|(h, r, m, e, n)| build(h, r, m, e, n))
}

/// Entity count of a model.
pub fn entities(m: &TraceModel) -> usize {
    m.hazards.len() + m.requirements.len() + m.ml_requirements.len() + m.evidence.len()
}

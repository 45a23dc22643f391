//! Random documents for parser and serializer round trips. Documents are
//! syntactically well formed but need not validate.

use gsnkit_core::dsl::{Document, ModuleDecl, ModuleKind};
use gsnkit_core::model::{
    ArgumentGraph, AssuranceClaimPoint, ChoiceGroup, Edge, EdgeDecoration, EdgeKind, EdgeRef, Node,
    NodeId, NodeKind,
};
use proptest::prelude::*;
use proptest::sample::Index;

pub const MAX_NODES: usize = 40;

const KINDS: [NodeKind; 8] = [
    NodeKind::Goal,
    NodeKind::Strategy,
    NodeKind::Solution,
    NodeKind::Context,
    NodeKind::Assumption,
    NodeKind::Justification,
    NodeKind::ModuleRef,
    NodeKind::AwayGoal,
];

const PREFIXES: [&str; 8] = ["G", "S", "Sn", "C", "A", "J", "M_", "AG"];

const FRAGMENTS: &[&str] = &[
    "claim",
    "is acceptably safe",
    "within 200m",
    "\"quoted\"",
    "back\\slash",
    "tab\there",
    "line\nbreak",
    "{Role}",
    "{AI System (AIS)}",
    "{Hazardous Scenario}",
    "é ◇ ü",
    "#not a comment",
    "50%",
    "x::y",
    "-> : in_context_of",
    "goal",
];

const MODULE_NAMES: [&str; 3] = ["alpha", "beta_2", "gamma.x"];

#[derive(Debug, Clone)]
struct NodeSpec {
    kind: usize,
    statement: Vec<&'static str>,
    undeveloped: bool,
    uninstantiated: bool,
    dotted: bool,
}

#[derive(Debug, Clone)]
struct EdgeSpec {
    source: Index,
    target: Index,
    external: Option<u8>,
    in_context: bool,
    decoration: u8,
    a: u8,
    b: u8,
}

#[derive(Debug, Clone)]
struct ModuleSpec {
    pattern: bool,
    nodes: Vec<NodeSpec>,
    edges: Vec<EdgeSpec>,
    groups: Vec<(Index, u8, u8)>,
    acps: Vec<(Index, Index, bool)>,
    public: Vec<Index>,
}

fn node_spec() -> impl Strategy<Value = NodeSpec> {
    (
        0..KINDS.len(),
        prop::collection::vec(prop::sample::select(FRAGMENTS), 0..4),
        any::<bool>(),
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(
            |(kind, statement, undeveloped, uninstantiated, dotted)| NodeSpec {
                kind,
                statement,
                undeveloped,
                uninstantiated,
                dotted,
            },
        )
}

fn edge_spec() -> impl Strategy<Value = EdgeSpec> {
    (
        any::<Index>(),
        any::<Index>(),
        prop::option::weighted(0.1, 0u8..4),
        any::<bool>(),
        0u8..8,
        0u8..5,
        0u8..5,
    )
        .prop_map(
            |(source, target, external, in_context, decoration, a, b)| EdgeSpec {
                source,
                target,
                external,
                in_context,
                decoration,
                a,
                b,
            },
        )
}

fn module_spec(max_nodes: usize) -> impl Strategy<Value = ModuleSpec> {
    (
        any::<bool>(),
        prop::collection::vec(node_spec(), 0..=max_nodes),
        prop::collection::vec(edge_spec(), 0..2 * max_nodes),
        prop::collection::vec((any::<Index>(), 1u8..4, 0u8..3), 0..3),
        prop::collection::vec((any::<Index>(), any::<Index>(), any::<bool>()), 0..3),
        prop::collection::vec(any::<Index>(), 0..3),
    )
        .prop_map(|(pattern, nodes, edges, groups, acps, public)| ModuleSpec {
            pattern,
            nodes,
            edges,
            groups,
            acps,
            public,
        })
}

fn node_id(i: usize, spec: &NodeSpec) -> NodeId {
    let base = format!("{}{i}", PREFIXES[spec.kind]);
    NodeId::new(if spec.dotted {
        format!("{base}.1")
    } else {
        base
    })
    .unwrap()
}

fn build(name: &str, spec: ModuleSpec) -> ModuleDecl {
    let mut g = ArgumentGraph::new(name);
    let ids: Vec<NodeId> = spec
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| node_id(i, n))
        .collect();
    for (id, n) in ids.iter().zip(&spec.nodes) {
        let node = Node::new(id.clone(), KINDS[n.kind], n.statement.join(" "))
            .undeveloped(n.undeveloped)
            .uninstantiated(n.uninstantiated);
        g.add_node(node).unwrap();
    }
    let mut groups = Vec::new();
    if !ids.is_empty() {
        for (j, (src, min, extra)) in spec.groups.iter().enumerate() {
            let group = ChoiceGroup {
                group: format!("CG{j}"),
                source: src.get(&ids).clone(),
                min: u32::from(*min),
                max: u32::from(min + extra),
            };
            groups.push(group.group.clone());
            g.add_choice_group(group).unwrap();
        }
        for e in &spec.edges {
            let source = e.source.get(&ids).clone();
            let target = match e.external {
                Some(k) => NodeId::new(format!("ext{k}::X{k}")).unwrap(),
                None => e.target.get(&ids).clone(),
            };
            let kind = if e.in_context {
                EdgeKind::InContextOf
            } else {
                EdgeKind::SupportedBy
            };
            let decoration = match e.decoration {
                0..=3 => EdgeDecoration::None,
                4 => EdgeDecoration::multiplicity(u32::from(e.a), Some(u32::from(e.a + e.b)))
                    .unwrap(),
                5 => EdgeDecoration::multiplicity(u32::from(e.a), None).unwrap(),
                6 => EdgeDecoration::Optional,
                _ => EdgeDecoration::ChoiceMember {
                    group: groups
                        .get(usize::from(e.a))
                        .cloned()
                        .unwrap_or_else(|| "CG0".into()),
                },
            };
            let _ = g.add_edge(Edge::new(source, target, kind).with_decoration(decoration));
        }
        for (j, (s, t, on_edge)) in spec.acps.iter().enumerate() {
            let edge = if *on_edge && !g.edges().is_empty() {
                s.get(g.edges()).edge_ref()
            } else {
                EdgeRef::new(
                    s.get(&ids).clone(),
                    t.get(&ids).clone(),
                    EdgeKind::SupportedBy,
                )
            };
            g.add_acp(AssuranceClaimPoint {
                id: format!("ACP{j}"),
                edge,
                confidence_module: format!("conf{j}"),
            })
            .unwrap();
        }
        for p in &spec.public {
            g.add_public(p.get(&ids).clone());
        }
    }
    let kind = if spec.pattern {
        ModuleKind::Pattern
    } else {
        ModuleKind::Instance
    };
    ModuleDecl::new(kind, g)
}

/// Documents of one to three modules with at most [`MAX_NODES`] nodes in
/// total.
pub fn document() -> impl Strategy<Value = Document> {
    let per_module = MAX_NODES / MODULE_NAMES.len();
    prop::collection::vec(module_spec(per_module), 1..=MODULE_NAMES.len()).prop_map(|specs| {
        Document {
            modules: specs
                .into_iter()
                .zip(MODULE_NAMES)
                .map(|(spec, name)| build(name, spec))
                .collect(),
            trailing_comments: Vec::new(),
        }
    })
}

pub fn node_count(doc: &Document) -> usize {
    doc.graphs().map(|g| g.nodes().len()).sum()
}

//! Random tree-shaped patterns that validate cleanly, each paired with a
//! binding set the instantiation engine must accept.

use std::collections::BTreeMap;

use gsnkit_core::model::{
    ArgumentGraph, AssuranceClaimPoint, ChoiceGroup, Edge, EdgeDecoration, EdgeKind, EdgeRef, Node,
    NodeId, NodeKind,
};
use gsnkit_core::pattern::BindingSet;
use proptest::prelude::*;
use proptest::sample::Index;

pub const MAX_NODES: usize = 20;
pub const MAX_MULTIPLICITY: u32 = 3;

pub const ROLES: [&str; 3] = ["System", "Hazard", "Model"];

#[derive(Debug, Clone)]
struct Spec {
    parent: Index,
    kind: u8,
    decoration: u8,
    a: u8,
    b: u8,
    pick: u8,
    role: Option<u8>,
    undeveloped: bool,
    acp: bool,
}

fn spec() -> impl Strategy<Value = Spec> {
    (
        any::<Index>(),
        0u8..10,
        0u8..8,
        any::<u8>(),
        any::<u8>(),
        any::<u8>(),
        prop::option::of(0u8..3),
        any::<bool>(),
        prop::bool::weighted(0.15),
    )
        .prop_map(
            |(parent, kind, decoration, a, b, pick, role, undeveloped, acp)| Spec {
                parent,
                kind,
                decoration,
                a,
                b,
                pick,
                role,
                undeveloped,
                acp,
            },
        )
}

/// A pattern together with bindings that fix every count, choice and
/// optional link and bind every role.
#[derive(Debug, Clone)]
pub struct PatternCase {
    pub pattern: ArgumentGraph,
    pub bindings: BindingSet,
}

fn id(i: usize) -> NodeId {
    NodeId::new(format!("N{i}")).unwrap()
}

fn kind_of(k: u8) -> NodeKind {
    match k {
        0..=3 => NodeKind::Goal,
        4 | 5 => NodeKind::Strategy,
        6 | 7 => NodeKind::Solution,
        8 => NodeKind::Context,
        _ => NodeKind::Assumption,
    }
}

fn build(specs: Vec<Spec>) -> PatternCase {
    let n = specs.len() + 1;
    let mut kinds = vec![NodeKind::Goal];
    let mut parent = vec![usize::MAX];
    for (i, s) in specs.iter().enumerate() {
        let open: Vec<usize> = (0..=i)
            .filter(|&j| matches!(kinds[j], NodeKind::Goal | NodeKind::Strategy))
            .collect();
        parent.push(*s.parent.get(&open));
        kinds.push(kind_of(s.kind));
    }

    let supported = |j: usize| (1..n).any(|c| parent[c] == j && !kinds[c].is_contextual());
    let first_support: Vec<Option<usize>> = (0..n)
        .map(|j| (1..n).find(|&c| parent[c] == j && !kinds[c].is_contextual()))
        .collect();

    let mut decorations: Vec<EdgeDecoration> = vec![EdgeDecoration::None; n];
    let mut counts = BTreeMap::new();
    let mut includes = BTreeMap::new();
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 1..n {
        let s = &specs[c - 1];
        let p = parent[c];
        let protected = kinds[p] == NodeKind::Strategy && first_support[p] == Some(c);
        if protected {
            continue;
        }
        decorations[c] = match s.decoration {
            0..=3 => EdgeDecoration::None,
            4 | 5 => {
                let min = u32::from(s.a % 3);
                let max = if s.b.is_multiple_of(5) {
                    None
                } else {
                    Some(min.max(1) + u32::from(s.b) % (MAX_MULTIPLICITY - min.max(1) + 1))
                };
                let cap = max.unwrap_or(MAX_MULTIPLICITY);
                counts.insert(c, min + u32::from(s.pick) % (cap - min + 1));
                EdgeDecoration::multiplicity(min, max).unwrap()
            }
            6 => {
                includes.insert(c, s.pick.is_multiple_of(2));
                EdgeDecoration::Optional
            }
            _ if !kinds[c].is_contextual() => {
                members.entry(p).or_default().push(c);
                EdgeDecoration::ChoiceMember {
                    group: format!("CH{p}"),
                }
            }
            _ => EdgeDecoration::None,
        };
    }

    let mut g = ArgumentGraph::new("random");
    for i in 0..n {
        let (statement, flagged) = match specs.get(i.wrapping_sub(1)).and_then(|s| s.role) {
            Some(r) if i > 0 => (format!("N{i} about {{{}}}", ROLES[usize::from(r)]), true),
            _ => (format!("N{i} holds"), false),
        };
        let undeveloped = match kinds[i] {
            NodeKind::Strategy => !supported(i),
            NodeKind::Goal if i > 0 => !supported(i) && specs[i - 1].undeveloped,
            _ => false,
        };
        g.add_node(
            Node::new(id(i), kinds[i], statement)
                .undeveloped(undeveloped)
                .uninstantiated(flagged),
        )
        .unwrap();
    }
    for c in 1..n {
        let kind = if kinds[c].is_contextual() {
            EdgeKind::InContextOf
        } else {
            EdgeKind::SupportedBy
        };
        g.add_edge(Edge::new(id(parent[c]), id(c), kind).with_decoration(decorations[c].clone()))
            .unwrap();
        if specs[c - 1].acp {
            g.add_acp(AssuranceClaimPoint {
                id: format!("ACP{c}"),
                edge: EdgeRef::new(id(parent[c]), id(c), kind),
                confidence_module: "confidence".into(),
            })
            .unwrap();
        }
    }

    let edge_to = |c: usize| {
        g.edges()
            .iter()
            .find(|e| e.target == id(c))
            .unwrap()
            .edge_ref()
    };
    let mut bindings = BindingSet::new();
    for (r, role) in ROLES.iter().enumerate() {
        bindings = bindings.role(*role, format!("{} {r}", role.to_lowercase()));
    }
    bindings = bindings
        .indexed_role(ROLES[1], 1, "first hazard")
        .indexed_role(ROLES[2], 2, "second model");
    for (&c, &k) in &counts {
        if matches!(
            g.edges()
                .iter()
                .find(|e| e.target == id(c))
                .unwrap()
                .decoration,
            EdgeDecoration::Multiplicity { .. }
        ) {
            bindings = bindings.count(edge_to(c), k);
        }
    }
    for (&c, &inc) in &includes {
        bindings = bindings.include(edge_to(c), inc);
    }
    for (&p, ms) in &members {
        let m = ms.len() as u32;
        let s = &specs[ms[0] - 1];
        let min = 1 + u32::from(s.a) % m;
        let max = min + u32::from(s.b) % (m - min + 1);
        g.add_choice_group(ChoiceGroup {
            group: format!("CH{p}"),
            source: id(p),
            min,
            max,
        })
        .unwrap();
        let take = (min + u32::from(s.pick) % (max - min + 1)) as usize;
        let offset = usize::from(s.pick) % ms.len();
        let chosen: Vec<NodeId> = (0..take).map(|j| id(ms[(offset + j) % ms.len()])).collect();
        bindings = bindings.choose(format!("CH{p}"), chosen);
    }
    PatternCase {
        pattern: g,
        bindings,
    }
}

/// Patterns of one to [`MAX_NODES`] nodes with multiplicities up to
/// [`MAX_MULTIPLICITY`].
pub fn pattern_case() -> impl Strategy<Value = PatternCase> {
    prop::collection::vec(spec(), 0..MAX_NODES).prop_map(build)
}

//! Single-violation mutants of valid graphs, one generator per validator
//! rule, and the check that a mutant reports its rule and nothing beyond
//! the documented consequential codes.

use std::collections::BTreeSet;

use gsnkit_core::model::{
    ArgumentGraph, AssuranceClaimPoint, ChoiceGroup, Edge, EdgeKind, EdgeRef, Node, NodeId,
    NodeKind,
};
use gsnkit_core::validator::{validate_graph, CONSEQUENTIAL};
use proptest::sample::Index;

pub const RULES: [&str; 12] = [
    "V001", "V002", "V003", "V004", "V005", "V006", "V007", "V008", "V009", "V010", "V011", "V012",
];

/// Site choices for one mutant.
#[derive(Debug, Clone, Copy)]
pub struct Picks(pub Index, pub Index, pub Index);

fn ids(g: &ArgumentGraph, keep: impl Fn(&Node) -> bool) -> Vec<NodeId> {
    g.nodes()
        .iter()
        .filter(|n| keep(n))
        .map(|n| n.id.clone())
        .collect()
}

fn supported(g: &ArgumentGraph) -> BTreeSet<NodeId> {
    g.edges()
        .iter()
        .filter(|e| e.kind == EdgeKind::SupportedBy)
        .map(|e| e.target.clone())
        .collect()
}

fn supports(g: &ArgumentGraph, id: &NodeId) -> bool {
    g.edges()
        .iter()
        .any(|e| e.kind == EdgeKind::SupportedBy && &e.source == id)
}

fn fresh(g: &ArgumentGraph, stem: &str) -> NodeId {
    (0..)
        .map(|i| NodeId::new(format!("{stem}{i}")).unwrap())
        .find(|id| !g.contains(id))
        .unwrap()
}

fn add_edge(g: &mut ArgumentGraph, s: &NodeId, t: &NodeId, kind: EdgeKind) -> bool {
    g.add_edge(Edge::new(s.clone(), t.clone(), kind)).is_ok()
}

/// Goals and strategies that may take a new supported_by child.
fn developed(g: &ArgumentGraph) -> Vec<NodeId> {
    ids(g, |n| {
        matches!(n.kind, NodeKind::Goal | NodeKind::Strategy) && !n.undeveloped
    })
}

fn choose<T: Clone>(from: &[T], i: Index) -> Option<T> {
    (!from.is_empty()).then(|| i.get(from).clone())
}

/// Plants one violation of `rule` into a copy of `g`. Returns `None` when
/// the graph offers no site for it.
pub fn mutate(g: &ArgumentGraph, rule: &str, p: Picks) -> Option<ArgumentGraph> {
    let mut m = g.clone();
    let has_parent = supported(g);
    let ok = match rule {
        "V001" => {
            let c = choose(&ids(g, |n| n.kind.is_contextual()), p.0)?;
            let t = choose(
                &ids(g, |n| {
                    !n.kind.is_contextual()
                        && n.kind != NodeKind::AwayGoal
                        && has_parent.contains(&n.id)
                }),
                p.1,
            )?;
            add_edge(&mut m, &c, &t, EdgeKind::SupportedBy)
        }
        "V002" => {
            let s = choose(&developed(g), p.0)?;
            let c = choose(&ids(g, |n| n.kind.is_contextual()), p.1)?;
            add_edge(&mut m, &s, &c, EdgeKind::SupportedBy)
        }
        "V003" => {
            let s = choose(
                &ids(g, |n| matches!(n.kind, NodeKind::Goal | NodeKind::Strategy)),
                p.0,
            )?;
            let t = choose(&ids(g, |n| !n.kind.is_contextual() && n.id != s), p.1)?;
            add_edge(&mut m, &s, &t, EdgeKind::InContextOf)
        }
        "V004" => {
            let from: Vec<NodeId> = ids(g, |n| {
                (matches!(n.kind, NodeKind::Goal | NodeKind::Strategy) && !n.undeveloped
                    || n.kind == NodeKind::ModuleRef)
                    && has_parent.contains(&n.id)
            });
            let v = choose(&from, p.0)?;
            let up: Vec<NodeId> = g.ancestors(&v).ok()?.into_iter().collect();
            let a = choose(&up, p.1)?;
            add_edge(&mut m, &v, &a, EdgeKind::SupportedBy)
        }
        "V005" => {
            let sol = match choose(&ids(g, |n| n.kind == NodeKind::Solution), p.0) {
                Some(s) => s,
                None => {
                    let parent = choose(&developed(g), p.0)?;
                    let s = fresh(g, "MUT_Sn");
                    m.add_node(Node::new(s.clone(), NodeKind::Solution, "planted evidence"))
                        .unwrap();
                    add_edge(&mut m, &parent, &s, EdgeKind::SupportedBy);
                    s
                }
            };
            let above = m.ancestors(&sol).ok()?;
            let t = choose(
                &ids(&m, |n| {
                    matches!(n.kind, NodeKind::Goal | NodeKind::Strategy)
                        && has_parent.contains(&n.id)
                        && !above.contains(&n.id)
                }),
                p.1,
            )?;
            add_edge(&mut m, &sol, &t, EdgeKind::SupportedBy)
        }
        "V006" => {
            let v = choose(
                &ids(g, |n| {
                    matches!(n.kind, NodeKind::Goal | NodeKind::Strategy) && supports(g, &n.id)
                }),
                p.0,
            )?;
            m.node_mut(&v)?.undeveloped = true;
            true
        }
        "V007" => {
            let v = choose(
                &ids(g, |n| {
                    n.kind != NodeKind::ModuleRef && !n.uninstantiated && !n.statement.contains('{')
                }),
                p.0,
            )?;
            m.node_mut(&v)?.uninstantiated = true;
            true
        }
        "V008" => {
            let v = choose(&ids(g, |n| !n.uninstantiated), p.0)?;
            m.node_mut(&v)?.statement.push_str(" for {Planted Role}");
            true
        }
        "V009" => {
            let v = choose(&ids(g, |_| true), p.0)?;
            m.add_choice_group(ChoiceGroup {
                group: "MUT_GROUP".into(),
                source: v,
                min: 1,
                max: 1,
            })
            .is_ok()
        }
        "V010" => {
            let a = choose(&ids(g, |_| true), p.0)?;
            let b = choose(&ids(g, |_| true), p.1)?;
            let edge = EdgeRef::new(a, b, EdgeKind::SupportedBy);
            g.edge(&edge).is_none()
                && m.add_acp(AssuranceClaimPoint {
                    id: "MUT_ACP".into(),
                    edge,
                    confidence_module: "planted".into(),
                })
                .is_ok()
        }
        "V011" => {
            let id = fresh(g, "MUT_G");
            m.add_node(Node::new(id, NodeKind::Goal, "a second top claim"))
                .is_ok()
        }
        "V012" => {
            let stripped: Vec<NodeId> = ids(g, |n| {
                n.kind == NodeKind::Strategy && !n.undeveloped && supports(g, &n.id)
            });
            if p.2.index(2) == 0 && !stripped.is_empty() {
                let s = choose(&stripped, p.0)?;
                let out: Vec<EdgeRef> = g
                    .edges()
                    .iter()
                    .filter(|e| e.kind == EdgeKind::SupportedBy && e.source == s)
                    .map(Edge::edge_ref)
                    .collect();
                for r in &out {
                    m.remove_edge(r);
                    let dead: Vec<String> = m
                        .acps()
                        .iter()
                        .filter(|a| &a.edge == r)
                        .map(|a| a.id.clone())
                        .collect();
                    for id in dead {
                        m.remove_acp(&id);
                    }
                }
                let groups: Vec<String> = m
                    .choice_groups()
                    .iter()
                    .filter(|c| c.source == s)
                    .map(|c| c.group.clone())
                    .collect();
                for gname in groups {
                    m.remove_choice_group(&gname);
                }
                true
            } else {
                let parent = choose(&developed(g), p.1)?;
                let s = fresh(g, "MUT_S");
                m.add_node(Node::new(s.clone(), NodeKind::Strategy, "planted strategy"))
                    .unwrap();
                add_edge(&mut m, &parent, &s, EdgeKind::SupportedBy)
            }
        }
        _ => false,
    };
    ok.then_some(m)
}

/// Codes a mutant for `rule` may report besides `rule` itself.
pub fn allowed(rule: &str) -> BTreeSet<&'static str> {
    CONSEQUENTIAL
        .iter()
        .filter(|(p, _)| *p == rule)
        .map(|(_, c)| *c)
        .collect()
}

/// Distinct codes the validator reports for `g`.
pub fn codes(g: &ArgumentGraph) -> BTreeSet<String> {
    validate_graph(g).into_iter().map(|d| d.code).collect()
}

/// Checks a mutant's report: `rule` present, everything else documented.
/// Returns the consequential codes seen.
pub fn verdict(rule: &str, codes: &BTreeSet<String>) -> Result<BTreeSet<String>, String> {
    if !codes.contains(rule) {
        return Err(format!("{rule} not reported, got {codes:?}"));
    }
    let extra: BTreeSet<String> = codes
        .iter()
        .filter(|c| c.as_str() != rule)
        .cloned()
        .collect();
    let allow = allowed(rule);
    match extra.iter().find(|c| !allow.contains(c.as_str())) {
        Some(c) => Err(format!("{rule} mutant also reports undocumented {c}")),
        None => Ok(extra),
    }
}

//! Exhaustive simple-cycle enumeration and random DAGs with one injected
//! back edge.

use gsnkit_core::model::{ArgumentGraph, Edge, EdgeKind, Node, NodeId, NodeKind};
use proptest::prelude::*;
use proptest::sample::Index;

pub const MAX_NODES: usize = 20;

/// Every simple cycle of the `supported_by` subgraph, each written from
/// its earliest-declared node and closed by repeating it.
pub fn simple_cycles(g: &ArgumentGraph) -> Vec<Vec<NodeId>> {
    let ids: Vec<&NodeId> = g.nodes().iter().map(|n| &n.id).collect();
    let pos = |id: &NodeId| ids.iter().position(|x| *x == id);
    let mut succ = vec![Vec::new(); ids.len()];
    for e in g.edges().iter().filter(|e| e.kind == EdgeKind::SupportedBy) {
        if let (Some(s), Some(t)) = (pos(&e.source), pos(&e.target)) {
            succ[s].push(t);
        }
    }
    fn walk(
        start: usize,
        v: usize,
        succ: &[Vec<usize>],
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        for &w in &succ[v] {
            if w == start {
                let mut c = path.clone();
                c.push(start);
                out.push(c);
            } else if w > start && !path.contains(&w) {
                path.push(w);
                walk(start, w, succ, path, out);
                path.pop();
            }
        }
    }
    let mut raw = Vec::new();
    for s in 0..ids.len() {
        walk(s, s, &succ, &mut vec![s], &mut raw);
    }
    raw.into_iter()
        .map(|c| c.into_iter().map(|i| ids[i].clone()).collect())
        .collect()
}

/// A DAG of goals plus the edge that closes exactly one strongly
/// connected component.
#[derive(Debug, Clone)]
pub struct BackEdgeCase {
    pub graph: ArgumentGraph,
    pub back: (NodeId, NodeId),
}

fn build(n: usize, forward: Vec<(Index, Index)>, pick: Index) -> BackEdgeCase {
    let id = |i: usize| NodeId::new(format!("G{i}")).unwrap();
    let mut g = ArgumentGraph::new("dag");
    for i in 0..n {
        g.add_node(Node::new(id(i), NodeKind::Goal, format!("goal {i}")))
            .unwrap();
    }
    let mut adj = vec![Vec::new(); n];
    for (a, b) in forward {
        let (a, b) = (a.index(n), b.index(n));
        let (s, t) = (a.min(b), a.max(b));
        if s != t && !adj[s].contains(&t) && adj[s].len() < 2 {
            adj[s].push(t);
            g.add_edge(Edge::new(id(s), id(t), EdgeKind::SupportedBy))
                .unwrap();
        }
    }
    let reach = |from: usize| {
        let mut seen = vec![false; n];
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    };
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| {
            let r = reach(i);
            (0..n).filter(move |&j| r[j]).map(move |j| (i, j))
        })
        .collect();
    let (i, j) = if pairs.is_empty() {
        g.add_edge(Edge::new(id(0), id(1), EdgeKind::SupportedBy))
            .unwrap();
        (0, 1)
    } else {
        *pick.get(&pairs)
    };
    g.add_edge(Edge::new(id(j), id(i), EdgeKind::SupportedBy))
        .unwrap();
    BackEdgeCase {
        graph: g,
        back: (id(j), id(i)),
    }
}

pub fn back_edge_case() -> impl Strategy<Value = BackEdgeCase> {
    (2..=MAX_NODES)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((any::<Index>(), any::<Index>()), 0..2 * n),
                any::<Index>(),
            )
        })
        .prop_map(|(n, f, p)| build(n, f, p))
}

/// Whether `cycle` traverses the edge `from -> to`.
pub fn uses_edge(cycle: &[NodeId], from: &NodeId, to: &NodeId) -> bool {
    cycle.windows(2).any(|w| &w[0] == from && &w[1] == to)
}

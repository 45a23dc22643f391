//! Brute-force instantiation of tree-shaped patterns by textual subtree
//! copying.

use std::collections::{BTreeMap, BTreeSet};

use gsnkit_core::model::{ArgumentGraph, EdgeDecoration, EdgeKind, NodeKind};
use gsnkit_core::pattern::BindingSet;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NodeRow {
    pub id: String,
    pub kind: NodeKind,
    pub statement: String,
    pub undeveloped: bool,
    pub uninstantiated: bool,
}

/// Instance contents as sorted sets, comparable across implementations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Expansion {
    pub nodes: BTreeSet<NodeRow>,
    pub edges: BTreeSet<(String, String, EdgeKind)>,
    pub acps: BTreeSet<(String, String, String)>,
}

impl Expansion {
    /// Reads an instance produced by the engine.
    pub fn of(g: &ArgumentGraph) -> Self {
        Expansion {
            nodes: g
                .nodes()
                .iter()
                .map(|n| NodeRow {
                    id: n.id.to_string(),
                    kind: n.kind,
                    statement: n.statement.clone(),
                    undeveloped: n.undeveloped,
                    uninstantiated: n.uninstantiated,
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| {
                    assert!(
                        e.decoration.is_none(),
                        "instance edge {} keeps a decoration",
                        e.edge_ref()
                    );
                    (e.source.to_string(), e.target.to_string(), e.kind)
                })
                .collect(),
            acps: g
                .acps()
                .iter()
                .map(|a| {
                    (
                        a.id.clone(),
                        a.edge.source.to_string(),
                        a.edge.target.to_string(),
                    )
                })
                .collect(),
        }
    }
}

fn suffixed(base: &str, chain: &[usize]) -> String {
    let mut s = base.to_string();
    for i in chain {
        s.push('_');
        s.push_str(&i.to_string());
    }
    s
}

struct Expander<'a> {
    g: &'a ArgumentGraph,
    b: &'a BindingSet,
    out: Expansion,
}

impl Expander<'_> {
    fn bind(&self, statement: &str, chain: &[usize]) -> String {
        let mut text = statement.to_string();
        while let Some(open) = text.find('{') {
            let close = open + text[open..].find('}').expect("closed placeholder");
            let role = text[open + 1..close].to_string();
            let value = chain
                .last()
                .and_then(|i| self.b.indexed_bindings.get(&(role.clone(), *i)))
                .or_else(|| self.b.role_bindings.get(&role))
                .unwrap_or_else(|| panic!("role {role} unbound"));
            text.replace_range(open..=close, value);
        }
        text
    }

    fn visit(&mut self, node: &str, chain: &[usize]) {
        let n = self
            .g
            .nodes()
            .iter()
            .find(|n| n.id.as_str() == node)
            .unwrap();
        let statement = self.bind(&n.statement, chain);
        self.out.nodes.insert(NodeRow {
            id: suffixed(node, chain),
            kind: n.kind,
            uninstantiated: n.uninstantiated && statement.contains('{'),
            statement,
            undeveloped: n.undeveloped,
        });
        for e in self.g.edges().iter().filter(|e| e.source.as_str() == node) {
            let target = e.target.as_str();
            let copies: Vec<Vec<usize>> = match &e.decoration {
                EdgeDecoration::None => vec![chain.to_vec()],
                EdgeDecoration::Optional => {
                    if self
                        .b
                        .optional_inclusions
                        .get(&e.edge_ref())
                        .copied()
                        .unwrap_or(false)
                    {
                        vec![chain.to_vec()]
                    } else {
                        vec![]
                    }
                }
                EdgeDecoration::ChoiceMember { group } => {
                    if self.b.choice_selections[group]
                        .iter()
                        .any(|t| t == &e.target)
                    {
                        vec![chain.to_vec()]
                    } else {
                        vec![]
                    }
                }
                EdgeDecoration::Multiplicity { min, max } => {
                    let k = match self.b.multiplicity_counts.get(&e.edge_ref()) {
                        Some(&k) => k,
                        None => max.map_or((*min).max(1), |m| (*min).max(1).min(m)),
                    };
                    (1..=k as usize).map(|i| [chain, &[i]].concat()).collect()
                }
            };
            for c in copies {
                let t = suffixed(target, &c);
                self.out
                    .edges
                    .insert((suffixed(node, chain), t.clone(), e.kind));
                for a in self.g.acps().iter().filter(|a| a.edge == e.edge_ref()) {
                    self.out
                        .acps
                        .insert((suffixed(&a.id, &c), suffixed(node, chain), t.clone()));
                }
                self.visit(target, &c);
            }
        }
    }
}

/// Expands `pattern` under `bindings` by walking it from each root and
/// copying every subtree once per selected replica. Only valid for
/// patterns whose edges form a forest.
pub fn expand(pattern: &ArgumentGraph, bindings: &BindingSet) -> Expansion {
    let mut indegree: BTreeMap<&str, usize> =
        pattern.nodes().iter().map(|n| (n.id.as_str(), 0)).collect();
    for e in pattern.edges() {
        *indegree.get_mut(e.target.as_str()).expect("local target") += 1;
    }
    assert!(
        indegree.values().all(|&d| d <= 1),
        "pattern is not a forest"
    );
    let mut x = Expander {
        g: pattern,
        b: bindings,
        out: Expansion::default(),
    };
    for n in pattern.nodes() {
        if indegree[n.id.as_str()] == 0 {
            x.visit(n.id.as_str(), &[]);
        }
    }
    x.out
}

/// Node and edge counts by the count law alone: `k` copies of a subtree
/// with `n` nodes and `m` edges add `k * n` nodes and `k * (m + 1)` edges.
pub fn counts(pattern: &ArgumentGraph, bindings: &BindingSet) -> (usize, usize) {
    fn size(g: &ArgumentGraph, b: &BindingSet, node: &str) -> (usize, usize) {
        let (mut n, mut m) = (1, 0);
        for e in g.edges().iter().filter(|e| e.source.as_str() == node) {
            let k = match &e.decoration {
                EdgeDecoration::None => 1,
                EdgeDecoration::Optional => {
                    usize::from(b.optional_inclusions.get(&e.edge_ref()) == Some(&true))
                }
                EdgeDecoration::ChoiceMember { group } => {
                    usize::from(b.choice_selections[group].contains(&e.target))
                }
                EdgeDecoration::Multiplicity { min, max } => b
                    .multiplicity_counts
                    .get(&e.edge_ref())
                    .copied()
                    .unwrap_or_else(|| max.map_or((*min).max(1), |x| (*min).max(1).min(x)))
                    as usize,
            };
            let (cn, cm) = size(g, b, e.target.as_str());
            n += k * cn;
            m += k * (cm + 1);
        }
        (n, m)
    }
    let targets: BTreeSet<&str> = pattern.edges().iter().map(|e| e.target.as_str()).collect();
    pattern
        .nodes()
        .iter()
        .filter(|n| !targets.contains(n.id.as_str()))
        .map(|n| size(pattern, bindings, n.id.as_str()))
        .fold((0, 0), |(a, b), (c, d)| (a + c, b + d))
}

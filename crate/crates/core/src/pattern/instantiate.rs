use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::diagnostic::{has_errors, Diagnostic};
use crate::model::{
    ArgumentGraph, AssuranceClaimPoint, Edge, EdgeDecoration, EdgeKind, EdgeRef, Node, NodeId,
    NodeKind,
};
use crate::placeholder::{placeholders, substitute};
use crate::validator::validate_graph;

use super::{completeness, BindingSet, InstantiationReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstantiateError {
    #[error("pattern `{module}` has validation errors: {}", first_message(.diagnostics))]
    InvalidPattern {
        module: String,
        diagnostics: Vec<Diagnostic>,
    },
    #[error("role `{0}` is not bound")]
    UnboundRole(String),
    #[error("binding for role `{0}` is empty")]
    EmptyBinding(String),
    #[error("binding for role `{0}` contains a brace or backslash")]
    InvalidBinding(String),
    #[error("cardinality violation: {0}")]
    Cardinality(String),
    #[error("`{0}` is not a multiplicity edge of the pattern")]
    NotMultiplicity(EdgeRef),
    #[error("`{0}` is not an optional edge of the pattern")]
    NotOptional(EdgeRef),
    #[error("unknown choice group `{0}`")]
    UnknownGroup(String),
    #[error("replicated id `{0}` collides with an existing node")]
    IdCollision(NodeId),
    #[error("replicated assurance claim point `{0}` collides with an existing one")]
    AcpCollision(String),
    #[error("strategy `{0}` is left without support")]
    EmptiedStrategy(NodeId),
    #[error("instance has validation errors: {}", first_message(.0))]
    InvalidOutput(Vec<Diagnostic>),
}

fn first_message(d: &[Diagnostic]) -> String {
    d.iter()
        .find(|d| d.is_error())
        .map(|d| format!("{}[{}] {}", d.severity, d.code, d.message))
        .unwrap_or_default()
}

/// Instantiates `pattern`, requiring every role to be bound.
pub fn instantiate(
    pattern: &ArgumentGraph,
    bindings: &BindingSet,
) -> Result<(ArgumentGraph, InstantiationReport), InstantiateError> {
    run(pattern, bindings, true)
}

/// Like [`instantiate`] but leaves unbound placeholders in place; affected
/// nodes keep their `uninstantiated` flag.
pub fn instantiate_partial(
    pattern: &ArgumentGraph,
    bindings: &BindingSet,
) -> Result<(ArgumentGraph, InstantiationReport), InstantiateError> {
    run(pattern, bindings, false)
}

fn run(
    pattern: &ArgumentGraph,
    bindings: &BindingSet,
    strict: bool,
) -> Result<(ArgumentGraph, InstantiationReport), InstantiateError> {
    let diags = validate_graph(pattern);
    if has_errors(&diags) {
        return Err(InstantiateError::InvalidPattern {
            module: pattern.module_name().to_string(),
            diagnostics: diags.into_iter().filter(Diagnostic::is_error).collect(),
        });
    }
    check_binding_texts(bindings)?;
    check_edge_keys(pattern, bindings)?;

    let mut work = Work::new(pattern);
    work.resolve_choices(bindings)?;
    work.resolve_optionals(bindings);
    work.collect_garbage();
    work.expand_multiplicities(bindings)?;
    work.bind_roles(bindings, strict)?;
    work.check_strategies(pattern)?;

    let graph = work.graph;
    let diags = validate_graph(&graph);
    if has_errors(&diags) {
        return Err(InstantiateError::InvalidOutput(
            diags.into_iter().filter(Diagnostic::is_error).collect(),
        ));
    }
    let report = completeness(&graph);
    Ok((graph, report))
}

fn check_binding_texts(b: &BindingSet) -> Result<(), InstantiateError> {
    let all = b
        .role_bindings
        .iter()
        .map(|(r, t)| (r.as_str(), t))
        .chain(b.indexed_bindings.iter().map(|((r, _), t)| (r.as_str(), t)));
    for (role, text) in all {
        if text.trim().is_empty() {
            return Err(InstantiateError::EmptyBinding(role.to_string()));
        }
        if text.contains(['{', '}', '\\']) {
            return Err(InstantiateError::InvalidBinding(role.to_string()));
        }
    }
    Ok(())
}

fn check_edge_keys(p: &ArgumentGraph, b: &BindingSet) -> Result<(), InstantiateError> {
    for r in b.multiplicity_counts.keys() {
        if !matches!(
            p.edge(r).map(|e| &e.decoration),
            Some(EdgeDecoration::Multiplicity { .. })
        ) {
            return Err(InstantiateError::NotMultiplicity(r.clone()));
        }
    }
    for r in b.optional_inclusions.keys() {
        if !matches!(
            p.edge(r).map(|e| &e.decoration),
            Some(EdgeDecoration::Optional)
        ) {
            return Err(InstantiateError::NotOptional(r.clone()));
        }
    }
    for g in b.choice_selections.keys() {
        if p.choice_group(g).is_none() {
            return Err(InstantiateError::UnknownGroup(g.clone()));
        }
    }
    Ok(())
}

struct Work {
    graph: ArgumentGraph,
    /// Nodes with no incoming edge in the pattern; everything kept must be
    /// reachable from one of them.
    sources: Vec<NodeId>,
    /// Pattern edge each current edge was copied from.
    origin: HashMap<EdgeRef, EdgeRef>,
    /// Innermost replication index of each copied node.
    index: HashMap<NodeId, usize>,
    /// Pattern node each copied node descends from.
    node_origin: HashMap<NodeId, NodeId>,
}

impl Work {
    fn new(pattern: &ArgumentGraph) -> Self {
        let targets: HashSet<&NodeId> = pattern.edges().iter().map(|e| &e.target).collect();
        let sources = pattern
            .nodes()
            .iter()
            .filter(|n| !targets.contains(&n.id))
            .map(|n| n.id.clone())
            .collect();
        let origin = pattern
            .edges()
            .iter()
            .map(|e| (e.edge_ref(), e.edge_ref()))
            .collect();
        Work {
            graph: pattern.clone(),
            sources,
            origin,
            index: HashMap::new(),
            node_origin: HashMap::new(),
        }
    }

    fn drop_edge(&mut self, r: &EdgeRef) {
        self.graph.remove_edge(r);
        let dead: Vec<String> = self
            .graph
            .acps()
            .iter()
            .filter(|a| &a.edge == r)
            .map(|a| a.id.clone())
            .collect();
        for id in dead {
            self.graph.remove_acp(&id);
        }
    }

    fn resolve_choices(&mut self, b: &BindingSet) -> Result<(), InstantiateError> {
        let groups = self.graph.choice_groups().to_vec();
        for g in groups {
            let Some(selected) = b.choice_selections.get(&g.group) else {
                return Err(InstantiateError::Cardinality(format!(
                    "choice group `{}` has no selection",
                    g.group
                )));
            };
            let members: Vec<EdgeRef> = self
                .graph
                .choice_members(&g.group)
                .map(Edge::edge_ref)
                .collect();
            let chosen: BTreeSet<&NodeId> = selected.iter().collect();
            if chosen.len() != selected.len() {
                return Err(InstantiateError::Cardinality(format!(
                    "choice group `{}` selects a member twice",
                    g.group
                )));
            }
            for t in &chosen {
                if !members.iter().any(|m| &m.target == *t) {
                    return Err(InstantiateError::Cardinality(format!(
                        "`{t}` is not a member of choice group `{}`",
                        g.group
                    )));
                }
            }
            let n = chosen.len() as u32;
            if n < g.min || n > g.max {
                return Err(InstantiateError::Cardinality(format!(
                    "choice group `{}` selects {n}, allowed {}..{}",
                    g.group, g.min, g.max
                )));
            }
            for m in &members {
                if chosen.contains(&m.target) {
                    self.graph.set_decoration(m, EdgeDecoration::None);
                } else {
                    self.drop_edge(m);
                }
            }
            self.graph.remove_choice_group(&g.group);
        }
        Ok(())
    }

    fn resolve_optionals(&mut self, b: &BindingSet) {
        let optional: Vec<EdgeRef> = self
            .graph
            .edges()
            .iter()
            .filter(|e| e.decoration == EdgeDecoration::Optional)
            .map(Edge::edge_ref)
            .collect();
        for r in optional {
            if b.optional_inclusions.get(&r).copied().unwrap_or(false) {
                self.graph.set_decoration(&r, EdgeDecoration::None);
            } else {
                self.drop_edge(&r);
            }
        }
    }

    /// Removes nodes no longer reachable from the pattern's sources.
    fn collect_garbage(&mut self) {
        let mut keep: HashSet<NodeId> = HashSet::new();
        for s in &self.sources {
            if self.graph.contains(s) {
                keep.extend(self.graph.reachable_from(s));
            }
        }
        let dead: Vec<NodeId> = self
            .graph
            .nodes()
            .iter()
            .filter(|n| !keep.contains(&n.id))
            .map(|n| n.id.clone())
            .collect();
        for id in dead {
            self.graph.remove_node(&id);
        }
    }

    /// Next multiplicity edge whose source lies below no other pending
    /// multiplicity edge.
    fn next_multiplicity(&self) -> Option<(EdgeRef, u32, Option<u32>)> {
        let pending: Vec<&Edge> = self
            .graph
            .edges()
            .iter()
            .filter(|e| matches!(e.decoration, EdgeDecoration::Multiplicity { .. }))
            .collect();
        let below: Vec<_> = pending
            .iter()
            .map(|e| self.graph.reachable_from(&e.target))
            .collect();
        pending.iter().enumerate().find_map(|(i, e)| {
            let nested = below
                .iter()
                .enumerate()
                .any(|(j, r)| j != i && r.contains(&e.source));
            match (nested, &e.decoration) {
                (false, EdgeDecoration::Multiplicity { min, max }) => {
                    Some((e.edge_ref(), *min, *max))
                }
                _ => None,
            }
        })
    }

    fn expand_multiplicities(&mut self, b: &BindingSet) -> Result<(), InstantiateError> {
        while let Some((r, min, max)) = self.next_multiplicity() {
            let origin = self.origin.get(&r).cloned().unwrap_or_else(|| r.clone());
            let k = match b.multiplicity_counts.get(&origin) {
                Some(&k) => {
                    if k < min || max.is_some_and(|m| k > m) {
                        let upper = max.map_or("*".to_string(), |m| m.to_string());
                        return Err(InstantiateError::Cardinality(format!(
                            "count {k} for `{origin}` is outside {min}..{upper}"
                        )));
                    }
                    k
                }
                None => max.map_or(min.max(1), |m| min.max(1).min(m)),
            };
            self.replicate(&r, k)?;
            self.drop_edge(&r);
            self.collect_garbage();
        }
        Ok(())
    }

    fn replicate(&mut self, r: &EdgeRef, k: u32) -> Result<(), InstantiateError> {
        let subtree = self.graph.reachable_from(&r.target);
        let nodes: Vec<Node> = self
            .graph
            .nodes()
            .iter()
            .filter(|n| subtree.contains(&n.id))
            .cloned()
            .collect();
        let edges: Vec<Edge> = self
            .graph
            .edges()
            .iter()
            .filter(|e| subtree.contains(&e.source))
            .cloned()
            .collect();
        let acps: Vec<AssuranceClaimPoint> = self
            .graph
            .acps()
            .iter()
            .filter(|a| subtree.contains(&a.edge.source) || &a.edge == r)
            .cloned()
            .collect();
        let public: Vec<NodeId> = self
            .graph
            .public_ids()
            .iter()
            .filter(|p| subtree.contains(p))
            .cloned()
            .collect();

        for i in 1..=k as usize {
            let rename = |id: &NodeId| {
                if subtree.contains(id) {
                    id.with_suffix(i)
                } else {
                    id.clone()
                }
            };
            for n in &nodes {
                let id = n.id.with_suffix(i);
                if self.graph.contains(&id) {
                    return Err(InstantiateError::IdCollision(id));
                }
                let copy = Node {
                    id: id.clone(),
                    ..n.clone()
                };
                self.graph
                    .add_node(copy)
                    .map_err(|_| InstantiateError::IdCollision(id.clone()))?;
                let from = self
                    .node_origin
                    .get(&n.id)
                    .cloned()
                    .unwrap_or_else(|| n.id.clone());
                self.node_origin.insert(id.clone(), from);
                self.index.insert(id, i);
            }
            let entry = Edge::new(r.source.clone(), rename(&r.target), r.kind);
            self.origin.insert(
                entry.edge_ref(),
                self.origin.get(r).cloned().unwrap_or_else(|| r.clone()),
            );
            self.graph.add_edge(entry).expect("fresh edge");
            for e in &edges {
                let copy = Edge::new(rename(&e.source), rename(&e.target), e.kind)
                    .with_decoration(e.decoration.clone());
                let from = self
                    .origin
                    .get(&e.edge_ref())
                    .cloned()
                    .unwrap_or_else(|| e.edge_ref());
                self.origin.insert(copy.edge_ref(), from);
                self.graph.add_edge(copy).expect("fresh edge");
            }
            for a in &acps {
                let edge = if &a.edge == r {
                    EdgeRef::new(r.source.clone(), rename(&r.target), r.kind)
                } else {
                    EdgeRef::new(rename(&a.edge.source), rename(&a.edge.target), a.edge.kind)
                };
                let id = format!("{}_{i}", a.id);
                let acp = AssuranceClaimPoint {
                    id: id.clone(),
                    edge,
                    confidence_module: a.confidence_module.clone(),
                };
                self.graph
                    .add_acp(acp)
                    .map_err(|_| InstantiateError::AcpCollision(id))?;
            }
            for p in &public {
                self.graph.add_public(p.with_suffix(i));
            }
        }
        for a in acps.iter().filter(|a| &a.edge == r) {
            self.graph.remove_acp(&a.id);
        }
        Ok(())
    }

    fn bind_roles(&mut self, b: &BindingSet, strict: bool) -> Result<(), InstantiateError> {
        let ids: Vec<NodeId> = self.graph.nodes().iter().map(|n| n.id.clone()).collect();
        for id in ids {
            let idx = self.index.get(&id).copied();
            let node = self.graph.node_mut(&id).expect("listed node");
            let roles = placeholders(&node.statement).unwrap_or_default();
            if roles.is_empty() {
                continue;
            }
            let lookup = |role: &str| {
                idx.and_then(|i| b.indexed_bindings.get(&(role.to_string(), i)))
                    .or_else(|| b.role_bindings.get(role))
                    .cloned()
            };
            if strict {
                if let Some(missing) = roles.iter().find(|r| lookup(r).is_none()) {
                    return Err(InstantiateError::UnboundRole(missing.clone()));
                }
            }
            let bound = substitute(&node.statement, lookup).expect("placeholders already parsed");
            let all_bound = placeholders(&bound).is_ok_and(|r| r.is_empty());
            node.statement = bound;
            if all_bound {
                node.uninstantiated = false;
            }
        }
        Ok(())
    }

    fn check_strategies(&self, pattern: &ArgumentGraph) -> Result<(), InstantiateError> {
        let had: HashSet<&str> = pattern
            .edges()
            .iter()
            .filter(|e| e.kind == EdgeKind::SupportedBy)
            .map(|e| e.source.as_str())
            .collect();
        let has: HashSet<&NodeId> = self
            .graph
            .edges()
            .iter()
            .filter(|e| e.kind == EdgeKind::SupportedBy)
            .map(|e| &e.source)
            .collect();
        for n in self
            .graph
            .nodes()
            .iter()
            .filter(|n| n.kind == NodeKind::Strategy)
        {
            let base = self.node_origin.get(&n.id).unwrap_or(&n.id);
            if had.contains(base.as_str()) && !has.contains(&n.id) {
                return Err(InstantiateError::EmptiedStrategy(n.id.clone()));
            }
        }
        Ok(())
    }
}

//! GSN domain model: nodes, edges, decorations, choice groups, assurance
//! claim points and the per-module [`ArgumentGraph`].
//!
//! Graphs keep declaration order for every element list so that structural
//! equality and the canonical text form are both order-stable.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while building or querying an [`ArgumentGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid identifier `{0}`")]
    InvalidId(String),
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("edge `{0}` connects a node to itself")]
    SelfLoop(String),
    #[error("duplicate edge `{0}`")]
    DuplicateEdge(String),
    #[error("duplicate choice group `{0}`")]
    DuplicateChoiceGroup(String),
    #[error("duplicate assurance claim point `{0}`")]
    DuplicateAcp(String),
    #[error("multiplicity {min}..{max} has min greater than max")]
    InvertedMultiplicity { min: u32, max: u32 },
    #[error("unknown node id `{0}`")]
    UnknownNode(String),
    #[error("unresolved reference `{reference}` in module `{module}`")]
    Unresolved { module: String, reference: String },
}

fn is_local_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

/// Returns true if `s` is a valid module, group or element identifier.
pub fn is_identifier(s: &str) -> bool {
    is_local_ident(s)
}

/// Identifier of a node. Either local (`G3.1`) or qualified (`system::G0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct NodeId(String);

impl NodeId {
    pub fn new(value: impl Into<String>) -> Result<Self, ModelError> {
        let value = value.into();
        let ok = match value.split_once("::") {
            Some((module, local)) => is_local_ident(module) && is_local_ident(local),
            None => is_local_ident(&value),
        };
        if ok {
            Ok(Self(value))
        } else {
            Err(ModelError::InvalidId(value))
        }
    }

    /// Builds `module::local`, replacing any existing qualifier.
    pub fn qualified(module: &str, local: &NodeId) -> Result<Self, ModelError> {
        Self::new(format!("{module}::{}", local.local()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_qualified(&self) -> bool {
        self.0.contains("::")
    }

    /// Module qualifier, if any.
    pub fn module(&self) -> Option<&str> {
        self.0.split_once("::").map(|(m, _)| m)
    }

    /// The id without its module qualifier.
    pub fn local(&self) -> &str {
        self.0.split_once("::").map_or(&self.0, |(_, l)| l)
    }

    /// Appends `_index` to the local part; used for replicated subtrees.
    pub fn with_suffix(&self, index: usize) -> NodeId {
        NodeId(format!("{}_{index}", self.0))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for NodeId {
    type Error = ModelError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        NodeId::new(value)
    }
}

impl TryFrom<&str> for NodeId {
    type Error = ModelError;
    fn try_from(value: &str) -> Result<Self, Self::Error> {
        NodeId::new(value)
    }
}

impl From<NodeId> for String {
    fn from(id: NodeId) -> String {
        id.0
    }
}

/// The GSN element kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Goal,
    Strategy,
    Solution,
    Context,
    Assumption,
    Justification,
    ModuleRef,
    AwayGoal,
}

impl NodeKind {
    pub const ALL: [NodeKind; 8] = [
        NodeKind::Goal,
        NodeKind::Strategy,
        NodeKind::Solution,
        NodeKind::Context,
        NodeKind::Assumption,
        NodeKind::Justification,
        NodeKind::ModuleRef,
        NodeKind::AwayGoal,
    ];

    /// Keyword used by the textual format.
    pub fn keyword(self) -> &'static str {
        match self {
            NodeKind::Goal => "goal",
            NodeKind::Strategy => "strategy",
            NodeKind::Solution => "solution",
            NodeKind::Context => "context",
            NodeKind::Assumption => "assumption",
            NodeKind::Justification => "justification",
            NodeKind::ModuleRef => "moduleref",
            NodeKind::AwayGoal => "awaygoal",
        }
    }

    pub fn from_keyword(word: &str) -> Option<NodeKind> {
        NodeKind::ALL.into_iter().find(|k| k.keyword() == word)
    }

    /// Context-side kinds: the legal targets of `InContextOf`.
    pub fn is_contextual(self) -> bool {
        matches!(
            self,
            NodeKind::Context | NodeKind::Assumption | NodeKind::Justification
        )
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
    /// Natural-language statement; may contain `{Role}` placeholders.
    pub statement: String,
    pub undeveloped: bool,
    pub uninstantiated: bool,
}

impl Node {
    pub fn new(id: NodeId, kind: NodeKind, statement: impl Into<String>) -> Self {
        Node {
            id,
            kind,
            statement: statement.into(),
            undeveloped: false,
            uninstantiated: false,
        }
    }

    pub fn undeveloped(mut self, flag: bool) -> Self {
        self.undeveloped = flag;
        self
    }

    pub fn uninstantiated(mut self, flag: bool) -> Self {
        self.uninstantiated = flag;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    SupportedBy,
    InContextOf,
}

impl EdgeKind {
    pub fn keyword(self) -> &'static str {
        match self {
            EdgeKind::SupportedBy => "supported_by",
            EdgeKind::InContextOf => "in_context_of",
        }
    }

    pub fn from_keyword(word: &str) -> Option<EdgeKind> {
        match word {
            "supported_by" => Some(EdgeKind::SupportedBy),
            "in_context_of" => Some(EdgeKind::InContextOf),
            _ => None,
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Abstraction decoration carried by an edge. At most one per edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum EdgeDecoration {
    None,
    /// `max = None` means unbounded.
    Multiplicity {
        min: u32,
        max: Option<u32>,
    },
    Optional,
    ChoiceMember {
        group: String,
    },
}

impl EdgeDecoration {
    /// Builds a multiplicity decoration; `(1, 1)` collapses to `None`.
    pub fn multiplicity(min: u32, max: Option<u32>) -> Result<Self, ModelError> {
        if let Some(max) = max {
            if min > max {
                return Err(ModelError::InvertedMultiplicity { min, max });
            }
        }
        Ok(EdgeDecoration::Multiplicity { min, max }.normalized())
    }

    pub fn normalized(self) -> Self {
        match self {
            EdgeDecoration::Multiplicity {
                min: 1,
                max: Some(1),
            } => EdgeDecoration::None,
            other => other,
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, EdgeDecoration::None)
    }
}

/// Identifies an edge by its `(source, target, kind)` triple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub source: NodeId,
    pub target: NodeId,
    pub kind: EdgeKind,
}

impl EdgeRef {
    pub fn new(source: NodeId, target: NodeId, kind: EdgeKind) -> Self {
        EdgeRef {
            source,
            target,
            kind,
        }
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} : {}", self.source, self.target, self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub source: NodeId,
    pub target: NodeId,
    pub kind: EdgeKind,
    pub decoration: EdgeDecoration,
}

impl Edge {
    pub fn new(source: NodeId, target: NodeId, kind: EdgeKind) -> Self {
        Edge {
            source,
            target,
            kind,
            decoration: EdgeDecoration::None,
        }
    }

    pub fn with_decoration(mut self, decoration: EdgeDecoration) -> Self {
        self.decoration = decoration.normalized();
        self
    }

    pub fn edge_ref(&self) -> EdgeRef {
        EdgeRef::new(self.source.clone(), self.target.clone(), self.kind)
    }

    pub fn matches(&self, r: &EdgeRef) -> bool {
        self.source == r.source && self.target == r.target && self.kind == r.kind
    }
}

/// An m-of-n selection point. Member edges carry
/// [`EdgeDecoration::ChoiceMember`] naming the group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChoiceGroup {
    pub group: String,
    pub source: NodeId,
    pub min: u32,
    pub max: u32,
}

/// Assurance claim point: a pointer from an edge to a confidence argument.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AssuranceClaimPoint {
    pub id: String,
    pub edge: EdgeRef,
    pub confidence_module: String,
}

/// One GSN module: nodes, edges and their decorations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArgumentGraph {
    module_name: String,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    choice_groups: Vec<ChoiceGroup>,
    acps: Vec<AssuranceClaimPoint>,
    public_ids: Vec<NodeId>,
}

impl ArgumentGraph {
    pub fn new(module_name: impl Into<String>) -> Self {
        ArgumentGraph {
            module_name: module_name.into(),
            ..Default::default()
        }
    }

    pub fn module_name(&self) -> &str {
        &self.module_name
    }

    pub fn set_module_name(&mut self, name: impl Into<String>) {
        self.module_name = name.into();
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn choice_groups(&self) -> &[ChoiceGroup] {
        &self.choice_groups
    }

    pub fn acps(&self) -> &[AssuranceClaimPoint] {
        &self.acps
    }

    pub fn public_ids(&self) -> &[NodeId] {
        &self.public_ids
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: &NodeId) -> Option<&Node> {
        self.nodes.iter().find(|n| &n.id == id)
    }

    pub fn node_mut(&mut self, id: &NodeId) -> Option<&mut Node> {
        self.nodes.iter_mut().find(|n| &n.id == id)
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.node(id).is_some()
    }

    pub fn edge(&self, r: &EdgeRef) -> Option<&Edge> {
        self.edges.iter().find(|e| e.matches(r))
    }

    pub fn choice_group(&self, group: &str) -> Option<&ChoiceGroup> {
        self.choice_groups.iter().find(|g| g.group == group)
    }

    /// Edges whose decoration names `group`, in declaration order.
    pub fn choice_members(&self, group: &str) -> impl Iterator<Item = &Edge> + '_ {
        let group = group.to_string();
        self.edges.iter().filter(move |e| {
            matches!(&e.decoration, EdgeDecoration::ChoiceMember { group: g } if *g == group)
        })
    }

    /// Adds a node. Qualified ids are accepted so composed cases can hold
    /// nodes from several modules.
    pub fn add_node(&mut self, node: Node) -> Result<(), ModelError> {
        if self.contains(&node.id) {
            return Err(ModelError::DuplicateNode(node.id.0));
        }
        self.nodes.push(node);
        Ok(())
    }

    pub fn add_edge(&mut self, edge: Edge) -> Result<(), ModelError> {
        if edge.source == edge.target {
            return Err(ModelError::SelfLoop(edge.edge_ref().to_string()));
        }
        let r = edge.edge_ref();
        if self.edge(&r).is_some() {
            return Err(ModelError::DuplicateEdge(r.to_string()));
        }
        let edge = Edge {
            decoration: edge.decoration.normalized(),
            ..edge
        };
        self.edges.push(edge);
        Ok(())
    }

    pub fn add_choice_group(&mut self, group: ChoiceGroup) -> Result<(), ModelError> {
        if self.choice_group(&group.group).is_some() {
            return Err(ModelError::DuplicateChoiceGroup(group.group));
        }
        self.choice_groups.push(group);
        Ok(())
    }

    pub fn add_acp(&mut self, acp: AssuranceClaimPoint) -> Result<(), ModelError> {
        if self.acps.iter().any(|a| a.id == acp.id) {
            return Err(ModelError::DuplicateAcp(acp.id));
        }
        self.acps.push(acp);
        Ok(())
    }

    /// Adds an id to the module interface; repeated ids are ignored.
    pub fn add_public(&mut self, id: NodeId) {
        if !self.public_ids.contains(&id) {
            self.public_ids.push(id);
        }
    }

    pub fn is_public(&self, id: &NodeId) -> bool {
        self.public_ids.contains(id)
    }

    /// Replaces the decoration of an existing edge. Returns false if the
    /// edge is absent.
    pub fn set_decoration(&mut self, r: &EdgeRef, decoration: EdgeDecoration) -> bool {
        match self.edges.iter_mut().find(|e| e.matches(r)) {
            Some(e) => {
                e.decoration = decoration.normalized();
                true
            }
            None => false,
        }
    }

    pub fn remove_edge(&mut self, r: &EdgeRef) -> Option<Edge> {
        let pos = self.edges.iter().position(|e| e.matches(r))?;
        Some(self.edges.remove(pos))
    }

    /// Removes a node together with its incident edges, the ACPs on those
    /// edges, choice groups rooted at it and its public entry.
    pub fn remove_node(&mut self, id: &NodeId) -> Option<Node> {
        let pos = self.nodes.iter().position(|n| &n.id == id)?;
        let node = self.nodes.remove(pos);
        self.edges.retain(|e| &e.source != id && &e.target != id);
        self.acps
            .retain(|a| &a.edge.source != id && &a.edge.target != id);
        self.choice_groups.retain(|g| &g.source != id);
        self.public_ids.retain(|p| p != id);
        Some(node)
    }

    pub fn remove_choice_group(&mut self, group: &str) -> Option<ChoiceGroup> {
        let pos = self.choice_groups.iter().position(|g| g.group == group)?;
        Some(self.choice_groups.remove(pos))
    }

    pub fn remove_acp(&mut self, id: &str) -> Option<AssuranceClaimPoint> {
        let pos = self.acps.iter().position(|a| a.id == id)?;
        Some(self.acps.remove(pos))
    }

    /// Checks that every local edge endpoint, ACP edge, choice-group source
    /// and public id names a node of this module. Qualified references are
    /// left to composition.
    pub fn check_resolved(&self) -> Result<(), ModelError> {
        let ids: HashSet<&NodeId> = self.nodes.iter().map(|n| &n.id).collect();
        let unresolved = |id: &NodeId| !id.is_qualified() && !ids.contains(id);
        let err = |id: &NodeId| ModelError::Unresolved {
            module: self.module_name.clone(),
            reference: id.to_string(),
        };
        for e in &self.edges {
            if !ids.contains(&e.source) {
                return Err(err(&e.source));
            }
            if unresolved(&e.target) {
                return Err(err(&e.target));
            }
        }
        for g in &self.choice_groups {
            if unresolved(&g.source) {
                return Err(err(&g.source));
            }
        }
        for a in &self.acps {
            if unresolved(&a.edge.source) {
                return Err(err(&a.edge.source));
            }
            if unresolved(&a.edge.target) {
                return Err(err(&a.edge.target));
            }
        }
        for p in &self.public_ids {
            if !ids.contains(p) {
                return Err(err(p));
            }
        }
        Ok(())
    }

    /// Goal nodes with no incoming `SupportedBy` edge, in declaration order.
    pub fn roots(&self) -> Vec<NodeId> {
        let supported: HashSet<&NodeId> = self
            .edges
            .iter()
            .filter(|e| e.kind == EdgeKind::SupportedBy)
            .map(|e| &e.target)
            .collect();
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Goal && !supported.contains(&n.id))
            .map(|n| n.id.clone())
            .collect()
    }

    /// All nodes from which `id` is reachable along `SupportedBy` edges,
    /// excluding `id` itself (unless it lies on a cycle).
    pub fn ancestors(&self, id: &NodeId) -> Result<BTreeSet<NodeId>, ModelError> {
        if !self.contains(id) {
            return Err(ModelError::UnknownNode(id.to_string()));
        }
        let mut parents: HashMap<&NodeId, Vec<&NodeId>> = HashMap::new();
        for e in self
            .edges
            .iter()
            .filter(|e| e.kind == EdgeKind::SupportedBy)
        {
            parents.entry(&e.target).or_default().push(&e.source);
        }
        let mut seen: BTreeSet<NodeId> = BTreeSet::new();
        let mut queue: VecDeque<&NodeId> = VecDeque::from([id]);
        while let Some(current) = queue.pop_front() {
            for p in parents.get(current).into_iter().flatten() {
                if seen.insert((*p).clone()) {
                    queue.push_back(p);
                }
            }
        }
        Ok(seen)
    }

    /// Every node reachable from `id` over edges of any kind, `id` included.
    pub fn reachable_from(&self, id: &NodeId) -> BTreeSet<NodeId> {
        let children = self.children_index(None);
        let mut seen = BTreeSet::from([id.clone()]);
        let mut stack = vec![id];
        while let Some(current) = stack.pop() {
            for c in children.get(current).into_iter().flatten() {
                if seen.insert((*c).clone()) {
                    stack.push(c);
                }
            }
        }
        seen
    }

    /// Outgoing adjacency restricted to `kind` (or all kinds for `None`).
    pub fn children_index(&self, kind: Option<EdgeKind>) -> HashMap<&NodeId, Vec<&NodeId>> {
        let mut map: HashMap<&NodeId, Vec<&NodeId>> = HashMap::new();
        for e in &self.edges {
            if kind.is_none_or(|k| k == e.kind) {
                map.entry(&e.source).or_default().push(&e.target);
            }
        }
        map
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> NodeId {
        NodeId::new(s).unwrap()
    }

    fn sb(a: &str, b: &str) -> Edge {
        Edge::new(id(a), id(b), EdgeKind::SupportedBy)
    }

    #[test]
    fn node_id_grammar() {
        assert!(NodeId::new("G3.1").is_ok());
        assert!(NodeId::new("REQ-SAFE-ER-1").is_ok());
        assert!(NodeId::new("system::G0").is_ok());
        assert!(NodeId::new("3G").is_err());
        assert!(NodeId::new("").is_err());
        assert!(NodeId::new("a::b::c").is_err());
        assert!(NodeId::new("a b").is_err());
        let q = id("system::G0");
        assert_eq!(q.module(), Some("system"));
        assert_eq!(q.local(), "G0");
    }

    #[test]
    fn unit_multiplicity_normalizes() {
        assert_eq!(
            EdgeDecoration::multiplicity(1, Some(1)).unwrap(),
            EdgeDecoration::None
        );
        assert!(EdgeDecoration::multiplicity(3, Some(2)).is_err());
        let e = sb("A", "B").with_decoration(EdgeDecoration::Multiplicity {
            min: 1,
            max: Some(1),
        });
        assert!(e.decoration.is_none());
    }

    #[test]
    fn builder_rejects_structural_violations() {
        let mut g = ArgumentGraph::new("m");
        g.add_node(Node::new(id("A"), NodeKind::Goal, "a")).unwrap();
        assert_eq!(
            g.add_node(Node::new(id("A"), NodeKind::Goal, "b")),
            Err(ModelError::DuplicateNode("A".into()))
        );
        assert!(matches!(
            g.add_edge(sb("A", "A")),
            Err(ModelError::SelfLoop(_))
        ));
        g.add_edge(sb("A", "B")).unwrap();
        assert!(matches!(
            g.add_edge(sb("A", "B")),
            Err(ModelError::DuplicateEdge(_))
        ));
        // same pair, other kind is a different edge
        g.add_edge(Edge::new(id("A"), id("B"), EdgeKind::InContextOf))
            .unwrap();
    }

    #[test]
    fn roots_and_ancestors() {
        let mut g = ArgumentGraph::new("m");
        for (n, k) in [
            ("G0", NodeKind::Goal),
            ("S1", NodeKind::Strategy),
            ("G1", NodeKind::Goal),
            ("Sn", NodeKind::Solution),
            ("C1", NodeKind::Context),
        ] {
            g.add_node(Node::new(id(n), k, n)).unwrap();
        }
        g.add_edge(sb("G0", "S1")).unwrap();
        g.add_edge(sb("S1", "G1")).unwrap();
        g.add_edge(sb("G1", "Sn")).unwrap();
        g.add_edge(Edge::new(id("G0"), id("C1"), EdgeKind::InContextOf))
            .unwrap();
        assert_eq!(g.roots(), vec![id("G0")]);
        let anc = g.ancestors(&id("Sn")).unwrap();
        assert_eq!(anc, BTreeSet::from([id("G0"), id("S1"), id("G1")]));
        assert!(g.ancestors(&id("G0")).unwrap().is_empty());
        // context is not reached by SupportedBy
        assert!(g.ancestors(&id("C1")).unwrap().is_empty());
        assert_eq!(
            g.ancestors(&id("nope")),
            Err(ModelError::UnknownNode("nope".into()))
        );
    }

    #[test]
    fn empty_graph_has_no_roots() {
        assert!(ArgumentGraph::new("m").roots().is_empty());
    }

    #[test]
    fn resolution_check() {
        let mut g = ArgumentGraph::new("m");
        g.add_node(Node::new(id("A"), NodeKind::Goal, "a")).unwrap();
        g.add_edge(sb("A", "other::X")).unwrap();
        assert!(g.check_resolved().is_ok());
        g.add_edge(sb("A", "B")).unwrap();
        assert!(matches!(
            g.check_resolved(),
            Err(ModelError::Unresolved { .. })
        ));
    }
}

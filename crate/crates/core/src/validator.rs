//! Structural well-formedness rules for argument graphs.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::diagnostic::{sort_diagnostics, Diagnostic, Severity, SourceSpan};
use crate::dsl::{Document, ElementKey, ModuleDecl, SourceInfo};
use crate::model::{ArgumentGraph, EdgeDecoration, EdgeKind, NodeId, NodeKind};
use crate::placeholder::placeholders;

/// A validator rule and the severity it reports at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleCode {
    pub code: &'static str,
    pub description: &'static str,
    pub severity: Severity,
}

pub const RULES: [RuleCode; 13] = [
    RuleCode {
        code: "V001",
        description: "supported_by source must be a goal, strategy or module reference",
        severity: Severity::Error,
    },
    RuleCode {
        code: "V002",
        description: "supported_by target must be a goal, strategy, solution, module reference or away goal",
        severity: Severity::Error,
    },
    RuleCode {
        code: "V003",
        description: "in_context_of must run from a goal or strategy to a context, assumption or justification",
        severity: Severity::Error,
    },
    RuleCode {
        code: "V004",
        description: "the supported_by subgraph must be acyclic",
        severity: Severity::Error,
    },
    RuleCode {
        code: "V005",
        description: "solutions have no outgoing supported_by",
        severity: Severity::Error,
    },
    RuleCode {
        code: "V006",
        description: "undeveloped nodes have no outgoing supported_by",
        severity: Severity::Error,
    },
    RuleCode {
        code: "V007",
        description: "uninstantiated nodes carry at least one placeholder unless they are module references",
        severity: Severity::Error,
    },
    RuleCode {
        code: "V008",
        description: "nodes not flagged uninstantiated carry no placeholders",
        severity: Severity::Error,
    },
    RuleCode {
        code: "V009",
        description: "choice group cardinality must be satisfiable",
        severity: Severity::Error,
    },
    RuleCode {
        code: "V010",
        description: "every assurance claim point is attached to an existing edge",
        severity: Severity::Error,
    },
    RuleCode {
        code: "V011",
        description: "each module has a root goal (warning when there is more than one)",
        severity: Severity::Error,
    },
    RuleCode {
        code: "V012",
        description: "strategies have at least one outgoing supported_by unless undeveloped",
        severity: Severity::Error,
    },
    RuleCode {
        code: "V013",
        description: "cross-module reference not resolvable within the document",
        severity: Severity::Warning,
    },
];

/// Codes that a single planted violation may legitimately drag in.
///
/// | planted | also reported | when |
/// |---------|---------------|------|
/// | V004 | V011 | the cycle passes through the only root |
/// | V012 | V011 | the strategy lost its support edges and its former children became roots |
pub const CONSEQUENTIAL: &[(&str, &str)] = &[("V004", "V011"), ("V012", "V011")];

pub fn rule(code: &str) -> Option<&'static RuleCode> {
    RULES.iter().find(|r| r.code == code)
}

/// Validates every module of a document. Qualified references are checked
/// against the other modules of the same document and reported as `V013`
/// warnings when they do not resolve.
pub fn validate(doc: &Document) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for m in &doc.modules {
        out.extend(check(&m.graph, &m.source, Some(doc)));
    }
    sort_diagnostics(&mut out);
    out
}

pub fn validate_module(m: &ModuleDecl) -> Vec<Diagnostic> {
    let mut out = check(&m.graph, &m.source, None);
    sort_diagnostics(&mut out);
    out
}

/// Validates a graph without source information. Diagnostics carry no span.
pub fn validate_graph(g: &ArgumentGraph) -> Vec<Diagnostic> {
    let mut out = check(g, &SourceInfo::default(), None);
    sort_diagnostics(&mut out);
    out
}

/// Cycles of the `supported_by` subgraph, one per strongly connected
/// component that contains a cycle. Each cycle starts and ends at the
/// earliest-declared node of its component and is a shortest such cycle.
pub fn check_acyclic(g: &ArgumentGraph) -> Vec<Vec<NodeId>> {
    let order: HashMap<&NodeId, usize> = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| (&n.id, i))
        .collect();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); g.nodes().len()];
    for e in g.edges().iter().filter(|e| e.kind == EdgeKind::SupportedBy) {
        if let (Some(&s), Some(&t)) = (order.get(&e.source), order.get(&e.target)) {
            succ[s].push(t);
        }
    }
    let comp = strongly_connected(&succ);
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &c) in comp.iter().enumerate() {
        members.entry(c).or_default().push(v);
    }
    let mut starts: Vec<usize> = members
        .values()
        .filter(|vs| vs.len() > 1)
        .map(|vs| *vs.iter().min().unwrap())
        .collect();
    starts.sort_unstable();

    let mut cycles = Vec::new();
    for s in starts {
        let c = comp[s];
        let mut prev: Vec<Option<usize>> = vec![None; succ.len()];
        let mut queue = VecDeque::from([s]);
        let mut last = None;
        'bfs: while let Some(v) = queue.pop_front() {
            for &w in &succ[v] {
                if comp[w] != c {
                    continue;
                }
                if w == s {
                    last = Some(v);
                    break 'bfs;
                }
                if prev[w].is_none() {
                    prev[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![s];
        let mut v = last.expect("component with more than one node has a cycle");
        while v != s {
            path.push(v);
            v = prev[v].unwrap();
        }
        path.push(s);
        path.reverse();
        cycles.push(path.into_iter().map(|i| g.nodes()[i].id.clone()).collect());
    }
    cycles
}

/// Tarjan's algorithm, iterative. Returns a component index per vertex.
fn strongly_connected(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut work = vec![(root, 0usize)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = work.last_mut() {
            if *i < succ[v].len() {
                let w = succ[v][*i];
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(p, _)) = work.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

fn diag(code: &'static str, message: String, span: Option<SourceSpan>) -> Diagnostic {
    let severity = rule(code).map_or(Severity::Error, |r| r.severity);
    Diagnostic::new(severity, code, message).with_span(span)
}

fn check(g: &ArgumentGraph, info: &SourceInfo, doc: Option<&Document>) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let module = g.module_name();
    let node_span = |id: &NodeId| info.span(&ElementKey::Node(id.clone()));
    let kind_of = |id: &NodeId| g.node(id).map(|n| n.kind);

    for e in g.edges() {
        let span = info.span(&ElementKey::Edge(e.edge_ref()));
        let source = kind_of(&e.source);
        let target = if e.target.is_qualified() {
            None
        } else {
            kind_of(&e.target)
        };
        match e.kind {
            EdgeKind::SupportedBy => {
                match source {
                    Some(NodeKind::Goal | NodeKind::Strategy | NodeKind::ModuleRef) => {}
                    Some(NodeKind::Solution) => out.push(diag(
                        "V005",
                        format!(
                            "solution `{}` cannot be supported (edge `{}`)",
                            e.source,
                            e.edge_ref()
                        ),
                        span.clone(),
                    )),
                    Some(k) => out.push(diag(
                        "V001",
                        format!("{k} `{}` cannot be the source of supported_by", e.source),
                        span.clone(),
                    )),
                    None => {}
                }
                if let Some(k) = target {
                    if k.is_contextual() {
                        out.push(diag(
                            "V002",
                            format!("{k} `{}` cannot be the target of supported_by", e.target),
                            span.clone(),
                        ));
                    }
                }
            }
            EdgeKind::InContextOf => {
                let bad_source =
                    source.is_some_and(|k| !matches!(k, NodeKind::Goal | NodeKind::Strategy));
                let bad_target = target.is_some_and(|k| !k.is_contextual());
                if bad_source || bad_target {
                    out.push(diag(
                        "V003",
                        format!(
                            "in_context_of `{}` must run from a goal or strategy to a context, assumption or justification",
                            e.edge_ref()
                        ),
                        span.clone(),
                    ));
                }
            }
        }
        if e.target.is_qualified() && !resolves_in(doc, &e.target) {
            out.push(diag(
                "V013",
                format!("`{}` is not resolvable within module `{module}`", e.target),
                span,
            ));
        }
    }

    for cycle in check_acyclic(g) {
        let n = cycle.len();
        let closing = crate::model::EdgeRef::new(
            cycle[n - 2].clone(),
            cycle[n - 1].clone(),
            EdgeKind::SupportedBy,
        );
        let text: Vec<&str> = cycle.iter().map(NodeId::as_str).collect();
        out.push(diag(
            "V004",
            format!("supported_by cycle {}", text.join(" -> ")),
            info.span(&ElementKey::Edge(closing)),
        ));
    }

    let mut has_support: HashSet<&NodeId> = HashSet::new();
    let mut supported: HashSet<&NodeId> = HashSet::new();
    for e in g.edges().iter().filter(|e| e.kind == EdgeKind::SupportedBy) {
        has_support.insert(&e.source);
        supported.insert(&e.target);
    }

    for n in g.nodes() {
        let span = node_span(&n.id);
        if n.undeveloped && n.kind != NodeKind::ModuleRef && has_support.contains(&n.id) {
            out.push(diag(
                "V006",
                format!("undeveloped {} `{}` has supporting elements", n.kind, n.id),
                span.clone(),
            ));
        }
        match placeholders(&n.statement) {
            Ok(roles) => {
                if n.uninstantiated && roles.is_empty() && n.kind != NodeKind::ModuleRef {
                    out.push(diag(
                        "V007",
                        format!(
                            "`{}` is flagged uninstantiated but has no placeholder",
                            n.id
                        ),
                        span.clone(),
                    ));
                }
                if !n.uninstantiated && !roles.is_empty() {
                    out.push(diag(
                        "V008",
                        format!(
                            "`{}` has placeholder {{{}}} but is not flagged uninstantiated",
                            n.id, roles[0]
                        ),
                        span.clone(),
                    ));
                }
            }
            Err(err) => out.push(diag(
                "V008",
                format!("`{}` has a malformed placeholder: {err}", n.id),
                span.clone(),
            )),
        }
        if n.kind == NodeKind::Strategy && !n.undeveloped && !has_support.contains(&n.id) {
            out.push(diag(
                "V012",
                format!("strategy `{}` has no supporting elements", n.id),
                span,
            ));
        }
    }

    check_choices(g, info, &mut out);

    for a in g.acps() {
        if g.edge(&a.edge).is_none() {
            out.push(diag(
                "V010",
                format!(
                    "assurance claim point `{}` is attached to missing edge `{}`",
                    a.id, a.edge
                ),
                info.span(&ElementKey::Acp(a.id.clone())),
            ));
        }
    }

    if !g.is_empty() {
        let roots: Vec<&NodeId> = g
            .nodes()
            .iter()
            .filter(|n| {
                matches!(n.kind, NodeKind::Goal | NodeKind::ModuleRef) && !supported.contains(&n.id)
            })
            .map(|n| &n.id)
            .collect();
        let module_span = info.module_span.clone();
        match roots.len() {
            0 => out.push(diag(
                "V011",
                format!("module `{module}` has no root goal"),
                module_span,
            )),
            1 => {}
            _ => {
                let ids: Vec<&str> = roots.iter().map(|r| r.as_str()).collect();
                out.push(
                    Diagnostic::warning(
                        "V011",
                        format!(
                            "module `{module}` has {} roots: {}",
                            ids.len(),
                            ids.join(", ")
                        ),
                    )
                    .with_span(module_span),
                );
            }
        }
    }
    out
}

fn check_choices(g: &ArgumentGraph, info: &SourceInfo, out: &mut Vec<Diagnostic>) {
    let mut undeclared: BTreeMap<&str, Option<SourceSpan>> = BTreeMap::new();
    for e in g.edges() {
        if let EdgeDecoration::ChoiceMember { group } = &e.decoration {
            if g.choice_group(group).is_none() {
                undeclared
                    .entry(group.as_str())
                    .or_insert_with(|| info.span(&ElementKey::Edge(e.edge_ref())));
            }
        }
    }
    for (group, span) in undeclared {
        out.push(diag(
            "V009",
            format!("choice group `{group}` is not declared"),
            span,
        ));
    }
    for c in g.choice_groups() {
        let members: Vec<_> = g.choice_members(&c.group).collect();
        let mut problems = Vec::new();
        if c.min == 0 {
            problems.push("min must be at least 1".to_string());
        }
        if c.min > c.max {
            problems.push(format!("min {} exceeds max {}", c.min, c.max));
        }
        if c.max as usize > members.len() {
            problems.push(format!(
                "pick {}..{} but only {} member edge(s)",
                c.min,
                c.max,
                members.len()
            ));
        }
        for m in members.iter().filter(|m| m.source != c.source) {
            problems.push(format!(
                "member `{}` does not leave `{}`",
                m.edge_ref(),
                c.source
            ));
        }
        if !problems.is_empty() {
            out.push(diag(
                "V009",
                format!("choice group `{}`: {}", c.group, problems.join("; ")),
                info.span(&ElementKey::Choice(c.group.clone())),
            ));
        }
    }
}

fn resolves_in(doc: Option<&Document>, id: &NodeId) -> bool {
    let (Some(doc), Some(module)) = (doc, id.module()) else {
        return false;
    };
    doc.module(module)
        .is_some_and(|m| m.graph.nodes().iter().any(|n| n.id.as_str() == id.local()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn codes(src: &str) -> Vec<String> {
        let out = parse(src, "t.gsn");
        assert!(out.diagnostics.is_empty(), "{:?}", out.diagnostics);
        validate(&out.document)
            .into_iter()
            .map(|d| d.code)
            .collect()
    }

    #[test]
    fn solution_supporting_goal_is_v005() {
        let src = "module m {\n  goal G \"g\"\n  solution Sn \"s\"\n  goal H \"h\"\n  G -> Sn : supported_by\n  Sn -> H : supported_by\n}\n";
        assert_eq!(codes(src), ["V005"]);
    }

    #[test]
    fn two_cycle() {
        let src =
            "module m { goal A \"a\" goal B \"b\" A -> B : supported_by B -> A : supported_by }";
        let out = parse(src, "t.gsn");
        let cycles = check_acyclic(&out.document.modules[0].graph);
        let ids: Vec<Vec<&str>> = cycles
            .iter()
            .map(|c| c.iter().map(|n| n.as_str()).collect())
            .collect();
        assert_eq!(ids, [["A", "B", "A"]]);
        assert_eq!(codes(src), ["V011", "V004"]);
    }

    #[test]
    fn empty_graph_is_clean() {
        assert!(validate_graph(&ArgumentGraph::new("e")).is_empty());
        assert!(check_acyclic(&ArgumentGraph::new("e")).is_empty());
    }

    #[test]
    fn cross_module_reference_is_warning_unless_resolved() {
        let lone = "module a { goal A \"a\" moduleref M \"m\" A -> M : supported_by M -> b::B : supported_by }";
        let out = parse(lone, "t.gsn");
        let d = validate(&out.document);
        assert_eq!(d.len(), 1);
        assert_eq!(
            (d[0].code.as_str(), d[0].severity),
            ("V013", Severity::Warning)
        );

        let both = format!("{lone}\nmodule b {{ goal B \"b\" }}");
        let out = parse(&both, "t.gsn");
        assert!(validate(&out.document).is_empty());
    }

    #[test]
    fn rule_table_is_complete() {
        for i in 1..=13 {
            assert!(rule(&format!("V{i:03}")).is_some());
        }
    }

    #[test]
    fn diagnostics_carry_spans() {
        let src = "module m {\n  goal G \"g\"\n  strategy S \"s\"\n  G -> S : supported_by\n}\n";
        let out = parse(src, "t.gsn");
        let d = validate(&out.document);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, "V012");
        assert_eq!(d[0].span.as_ref().unwrap().slice(src), "strategy S \"s\"");
        assert_eq!(
            d[0].render("t.gsn"),
            "t.gsn:3:3: error[V012] strategy `S` has no supporting elements"
        );
    }
}

use std::collections::{HashMap, HashSet};

use crate::diagnostic::{has_errors, sort_diagnostics, Diagnostic, SourceSpan};
use crate::dsl::ElementKey;
use crate::model::{
    ArgumentGraph, AssuranceClaimPoint, ChoiceGroup, Edge, EdgeDecoration, EdgeKind, EdgeRef, Node,
    NodeId, NodeKind,
};
use crate::validator::validate_module;

use super::archive::{ArchiveModule, CaseArchive, CompositionLink};

/// Name given to composed graphs.
pub const COMPOSED_MODULE: &str = "case";

/// Root of a module: its unique goal or module reference without incoming
/// support.
pub fn module_root(g: &ArgumentGraph) -> Result<NodeId, Vec<NodeId>> {
    let supported: HashSet<&NodeId> = g
        .edges()
        .iter()
        .filter(|e| e.kind == EdgeKind::SupportedBy)
        .map(|e| &e.target)
        .collect();
    let roots: Vec<NodeId> = g
        .nodes()
        .iter()
        .filter(|n| {
            matches!(n.kind, NodeKind::Goal | NodeKind::ModuleRef) && !supported.contains(&n.id)
        })
        .map(|n| n.id.clone())
        .collect();
    if roots.len() == 1 {
        Ok(roots.into_iter().next().unwrap())
    } else {
        Err(roots)
    }
}

fn qualify(module: &str, id: &NodeId) -> NodeId {
    if id.is_qualified() {
        id.clone()
    } else {
        NodeId::qualified(module, id).expect("module names and local ids are identifiers")
    }
}

/// Resolves the target of a link to a qualified node id.
pub(crate) fn link_target(
    archive: &CaseArchive,
    link: &CompositionLink,
) -> Result<NodeId, Diagnostic> {
    let span = link.span.clone();
    let Some(target) = archive.module(&link.to_module) else {
        return Err(Diagnostic::error(
            "C001",
            format!("link `{link}` names unknown module `{}`", link.to_module),
        )
        .with_span(span));
    };
    let g = target.graph();
    let local = match &link.to_node {
        Some(n) => {
            let Some(node) = g.node(n) else {
                return Err(Diagnostic::error(
                    "C002",
                    format!(
                        "module `{}` has no node `{n}` (link from module `{}`)",
                        link.to_module,
                        link.from_module()
                    ),
                )
                .with_span(span));
            };
            if !matches!(node.kind, NodeKind::Goal | NodeKind::ModuleRef) {
                return Err(Diagnostic::error(
                    "C003",
                    format!("link from module `{}` targets {} `{n}` of module `{}`; only goals can be referenced", link.from_module(), node.kind, link.to_module),
                )
                .with_span(span));
            }
            n.clone()
        }
        None => match module_root(g) {
            Ok(r) => r,
            Err(roots) => {
                return Err(Diagnostic::error(
                    "C008",
                    format!(
                        "module `{}` has {} roots; link from module `{}` must name one",
                        link.to_module,
                        roots.len(),
                        link.from_module()
                    ),
                )
                .with_span(span))
            }
        },
    };
    if !g.is_public(&local) {
        return Err(Diagnostic::error(
            "C003",
            format!(
                "module `{}` references `{local}` of module `{}`, which is not public",
                link.from_module(),
                link.to_module
            ),
        )
        .with_span(span));
    }
    Ok(qualify(&link.to_module, &local))
}

fn module_span(m: &ArchiveModule, key: Option<ElementKey>) -> Option<SourceSpan> {
    key.and_then(|k| m.decl.source.span(&k))
        .or_else(|| m.span.clone())
}

/// Merges the modules of `archive` into one graph with qualified ids.
///
/// Incoming `supported_by` edges of every linked module reference or away
/// goal are redirected to the link target; the proxy node itself stays in
/// the graph. Qualified edge targets inside modules must name public nodes
/// of another module in the archive.
pub fn compose(archive: &CaseArchive) -> (ArgumentGraph, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let mut out = ArgumentGraph::new(COMPOSED_MODULE);

    for m in &archive.modules {
        let found = validate_module(&m.decl);
        if has_errors(&found) {
            let n = found.iter().filter(|d| d.is_error()).count();
            diags.push(
                Diagnostic::error(
                    "C009",
                    format!("module `{}` has {n} validation error(s)", m.name()),
                )
                .with_span(m.span.clone()),
            );
        }
    }

    let mut redirect: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
    for link in &archive.links {
        let span = link.span.clone();
        let from_module = link.from_module();
        let Some(source) = archive.module(from_module) else {
            diags.push(
                Diagnostic::error(
                    "C001",
                    format!("link `{link}` names unknown module `{from_module}`"),
                )
                .with_span(span),
            );
            continue;
        };
        let local = NodeId::new(link.from.local()).expect("local part of a valid id");
        match source.graph().node(&local).map(|n| n.kind) {
            Some(NodeKind::ModuleRef | NodeKind::AwayGoal) => {}
            Some(k) => {
                diags.push(
                    Diagnostic::error(
                        "C006",
                        format!(
                            "link source `{}` is a {k}, not a module reference or away goal",
                            link.from
                        ),
                    )
                    .with_span(span),
                );
                continue;
            }
            None => {
                diags.push(
                    Diagnostic::error(
                        "C002",
                        format!("module `{from_module}` has no node `{local}`"),
                    )
                    .with_span(span),
                );
                continue;
            }
        }
        match link_target(archive, link) {
            Ok(t) => {
                let targets = redirect.entry(link.from.clone()).or_default();
                if !targets.contains(&t) {
                    targets.push(t);
                }
            }
            Err(d) => diags.push(d),
        }
    }

    let module_names: HashSet<&str> = archive.modules.iter().map(|m| m.name()).collect();
    for m in &archive.modules {
        let name = m.name();
        let g = m.graph();
        for n in g.nodes() {
            let id = qualify(name, &n.id);
            if matches!(n.kind, NodeKind::ModuleRef | NodeKind::AwayGoal)
                && !redirect.contains_key(&id)
            {
                let msg = format!("{} `{id}` is not linked to any module", n.kind);
                let span = module_span(m, Some(ElementKey::Node(n.id.clone())));
                diags.push(if n.undeveloped {
                    Diagnostic::warning("C007", msg).with_span(span)
                } else {
                    Diagnostic::error("C007", msg).with_span(span)
                });
            }
            if out
                .add_node(Node {
                    id: id.clone(),
                    ..n.clone()
                })
                .is_err()
            {
                diags.push(
                    Diagnostic::error("C004", format!("duplicate qualified id `{id}`"))
                        .with_span(m.span.clone()),
                );
            }
        }
    }

    for m in &archive.modules {
        let name = m.name();
        let g = m.graph();
        for e in g.edges() {
            let source = qualify(name, &e.source);
            let target = qualify(name, &e.target);
            if e.target.is_qualified() {
                let span = module_span(m, Some(ElementKey::Edge(e.edge_ref())));
                let target_module = e.target.module().unwrap_or_default();
                let resolved = archive.module(target_module).and_then(|tm| {
                    let local = NodeId::new(e.target.local()).ok()?;
                    tm.graph()
                        .node(&local)
                        .map(|_| tm.graph().is_public(&local))
                });
                match resolved {
                    Some(true) => {}
                    Some(false) => {
                        diags.push(
                            Diagnostic::error(
                                "C003",
                                format!("module `{name}` references `{}` of module `{target_module}`, which is not public", e.target.local()),
                            )
                            .with_span(span),
                        );
                        continue;
                    }
                    None => {
                        let code = if module_names.contains(target_module) {
                            "C002"
                        } else {
                            "C001"
                        };
                        diags.push(
                            Diagnostic::error(
                                code,
                                format!("module `{name}` references unresolved `{}`", e.target),
                            )
                            .with_span(span),
                        );
                        continue;
                    }
                }
            }
            let targets = match (e.kind, redirect.get(&target)) {
                (EdgeKind::SupportedBy, Some(ts)) => ts.clone(),
                _ => vec![target],
            };
            for t in targets {
                let decoration = match &e.decoration {
                    EdgeDecoration::ChoiceMember { group } => EdgeDecoration::ChoiceMember {
                        group: format!("{name}::{group}"),
                    },
                    d => d.clone(),
                };
                let edge = Edge::new(source.clone(), t, e.kind).with_decoration(decoration);
                if out.edge(&edge.edge_ref()).is_none() && edge.source != edge.target {
                    out.add_edge(edge).expect("checked above");
                }
            }
        }
        for c in g.choice_groups() {
            let _ = out.add_choice_group(ChoiceGroup {
                group: format!("{name}::{}", c.group),
                source: qualify(name, &c.source),
                min: c.min,
                max: c.max,
            });
        }
        for a in g.acps() {
            if archive.module(&a.confidence_module).is_none() {
                diags.push(
                    Diagnostic::error(
                        "C005",
                        format!("assurance claim point `{name}::{}` names missing confidence module `{}`", a.id, a.confidence_module),
                    )
                    .with_span(module_span(m, Some(ElementKey::Acp(a.id.clone())))),
                );
            }
            let edge = EdgeRef::new(
                qualify(name, &a.edge.source),
                qualify(name, &a.edge.target),
                a.edge.kind,
            );
            let _ = out.add_acp(AssuranceClaimPoint {
                id: format!("{name}::{}", a.id),
                edge,
                confidence_module: a.confidence_module.clone(),
            });
        }
    }
    sort_diagnostics(&mut diags);
    (out, diags)
}

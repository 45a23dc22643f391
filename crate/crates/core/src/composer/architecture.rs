use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::diagnostic::{sort_diagnostics, Diagnostic, SourceSpan};

use super::archive::{ArchitectureTag, CaseArchive, LinkKind};

/// Module names an expanded ethics module must link to.
pub const ETHICS_SUBMODULES: [&str; 4] = [
    "justice",
    "beneficence",
    "non_maleficence",
    "human_autonomy",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArchitectureReport {
    pub shape_ok: bool,
    pub findings: Vec<Diagnostic>,
}

/// A supporting relation between two modules.
struct ModuleLink<'a> {
    from: &'a str,
    to: &'a str,
    kind: LinkKind,
    well_targeted: bool,
    span: Option<SourceSpan>,
}

fn module_links(archive: &CaseArchive) -> Vec<ModuleLink<'_>> {
    let mut out = Vec::new();
    for l in &archive.links {
        let well_targeted = match (&l.to_node, archive.module(&l.to_module)) {
            (None, Some(_)) => true,
            (Some(n), Some(m)) => super::compose::module_root(m.graph()).is_ok_and(|r| &r == n),
            (_, None) => false,
        };
        out.push(ModuleLink {
            from: l.from_module(),
            to: &l.to_module,
            kind: l.kind,
            well_targeted,
            span: l.span.clone(),
        });
    }
    for m in &archive.modules {
        for e in m.graph().edges() {
            if let Some(to) = e.target.module() {
                out.push(ModuleLink {
                    from: m.name(),
                    to,
                    kind: LinkKind::SupportedBy,
                    well_targeted: true,
                    span: None,
                });
            }
        }
    }
    out
}

/// Checks the module-level shape of a case:
///
/// * `A1` exactly one ethics module, supported by no other module
/// * `A2` every ethics module is supported by at least one system module
/// * `A3` every system module is supported by at least one model module
/// * `A4` purpose-specific to general-purpose links are optional and target
///   the general-purpose module's root
/// * `A5` an ethics module linking to `other` modules links to all of
///   justice, beneficence, non_maleficence and human_autonomy
///
/// Confidence modules take no part.
pub fn check_architecture(archive: &CaseArchive) -> ArchitectureReport {
    let links = module_links(archive);
    let tag = |name: &str| archive.module(name).map(|m| m.tag);
    let supporters = |name: &str| -> BTreeSet<&str> {
        links
            .iter()
            .filter(|l| l.from == name)
            .map(|l| l.to)
            .collect()
    };
    let mut findings = Vec::new();

    let ethics: Vec<_> = archive
        .modules
        .iter()
        .filter(|m| m.tag == ArchitectureTag::Ethics)
        .collect();
    match ethics.len() {
        1 => {
            let name = ethics[0].name();
            let above: BTreeSet<&str> = links
                .iter()
                .filter(|l| l.to == name)
                .map(|l| l.from)
                .collect();
            if !above.is_empty() {
                let list: Vec<&str> = above.into_iter().collect();
                findings.push(
                    Diagnostic::error(
                        "A1",
                        format!(
                            "ethics module `{name}` is not at the top: supported by {}",
                            list.join(", ")
                        ),
                    )
                    .with_span(ethics[0].span.clone()),
                );
            }
        }
        0 => findings.push(Diagnostic::error("A1", "case has no ethics module")),
        n => {
            let names: Vec<&str> = ethics.iter().map(|m| m.name()).collect();
            findings.push(
                Diagnostic::error(
                    "A1",
                    format!("case has {n} ethics modules: {}", names.join(", ")),
                )
                .with_span(ethics[1].span.clone()),
            );
        }
    }

    for e in &ethics {
        let sup = supporters(e.name());
        if !sup.iter().any(|s| tag(s) == Some(ArchitectureTag::System)) {
            findings.push(
                Diagnostic::error(
                    "A2",
                    format!(
                        "ethics module `{}` is not supported by any system module",
                        e.name()
                    ),
                )
                .with_span(e.span.clone()),
            );
        }
        let expanded = sup.iter().any(|s| tag(s) == Some(ArchitectureTag::Other));
        if expanded {
            let missing: Vec<&str> = ETHICS_SUBMODULES
                .iter()
                .copied()
                .filter(|s| !sup.contains(s))
                .collect();
            if !missing.is_empty() {
                findings.push(
                    Diagnostic::error(
                        "A5",
                        format!(
                            "ethics module `{}` is expanded but lacks {}",
                            e.name(),
                            missing.join(", ")
                        ),
                    )
                    .with_span(e.span.clone()),
                );
            }
        }
    }

    for s in archive
        .modules
        .iter()
        .filter(|m| m.tag == ArchitectureTag::System)
    {
        let sup = supporters(s.name());
        if !sup
            .iter()
            .any(|m| tag(m).is_some_and(ArchitectureTag::is_model))
        {
            findings.push(
                Diagnostic::error(
                    "A3",
                    format!(
                        "system module `{}` is not supported by any model argument module",
                        s.name()
                    ),
                )
                .with_span(s.span.clone()),
            );
        }
    }

    let mut reported: HashSet<(&str, &str)> = HashSet::new();
    for l in &links {
        if tag(l.from) == Some(ArchitectureTag::PurposeSpecificModel)
            && tag(l.to) == Some(ArchitectureTag::GeneralPurposeModel)
        {
            let bad_kind = l.kind != LinkKind::Optional;
            if (bad_kind || !l.well_targeted) && reported.insert((l.from, l.to)) {
                let why = if bad_kind {
                    "must be optional"
                } else {
                    "must target the module root"
                };
                findings.push(
                    Diagnostic::error("A4", format!("link from `{}` to `{}` {why}", l.from, l.to))
                        .with_span(l.span.clone()),
                );
            }
        }
    }

    sort_diagnostics(&mut findings);
    ArchitectureReport {
        shape_ok: !findings.iter().any(Diagnostic::is_error),
        findings,
    }
}

use std::path::Path;

use gsnkit_core::composer::compose;
use gsnkit_core::trace::{
    check_bindings, coverage, coverage_strict, impact, CoverageReport, ImpactReport, StrictCheck,
};
use gsnkit_core::{ArgumentGraph, Diagnostic};
use serde::Serialize;

use crate::input::{self, is_case, label};
use crate::output::{Failure, Outcome};
use crate::Format;

#[derive(Serialize)]
struct CoverageJson<'a> {
    coverage: &'a CoverageReport,
    strict_checks: &'a [StrictCheck],
}

#[derive(Serialize)]
struct ImpactJson<'a> {
    impact: &'a ImpactReport,
    coverage_after: &'a CoverageReport,
}

fn list<T: AsRef<str>>(items: &[T]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items
            .iter()
            .map(AsRef::as_ref)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn coverage_text(o: &mut Outcome, c: &CoverageReport) {
    o.out(c.to_string());
    for (what, ids) in [
        ("uncovered hazards", &c.hazards.uncovered),
        ("uncovered requirements", &c.requirements.uncovered),
        ("uncovered ML requirements", &c.ml_requirements.uncovered),
        ("hazards without evidence", &c.hazards_without_evidence),
    ] {
        if !ids.is_empty() {
            o.out(format!("{what}: {}", list(ids)));
        }
    }
    o.out(format!(
        "fully covered: {}",
        if c.fully_covered { "yes" } else { "no" }
    ));
}

fn fail(o: &mut Outcome, file: &str, code: &str, message: impl Into<String>) {
    o.diagnostics(file, &[Diagnostic::error(code, message)]);
}

pub fn run(
    path: &Path,
    evidence: Option<&str>,
    strict: bool,
    format: Format,
) -> Result<Outcome, Failure> {
    let mut o = Outcome::default();
    let file = label(path);
    let mut case: Option<ArgumentGraph> = None;
    let model = if is_case(path) {
        let archive = match input::archive(path)? {
            Ok(a) => a,
            Err(d) => {
                o.diagnostics(&file, &d);
                return Ok(o);
            }
        };
        let model = match input::trace_model(path, Some(&archive))? {
            Ok(m) => m,
            Err(d) => {
                o.diagnostics(&file, &d);
                return Ok(o);
            }
        };
        let (graph, _) = compose(&archive);
        for e in check_bindings(&model, &graph) {
            fail(&mut o, &file, "T004", e.to_string());
        }
        if o.failed {
            return Ok(o);
        }
        case = Some(graph);
        model
    } else {
        match input::trace_model(path, None)? {
            Ok(m) => m,
            Err(d) => {
                o.diagnostics(&file, &d);
                return Ok(o);
            }
        }
    };
    match evidence {
        Some(id) => {
            let report = match impact(&model, case.as_ref(), id) {
                Ok(r) => r,
                Err(e) => {
                    fail(&mut o, &file, "T005", e.to_string());
                    return Ok(o);
                }
            };
            let after = coverage(&report.model).map_err(|e| Failure::Io(e.to_string()))?;
            match format {
                Format::Text => {
                    o.out(format!("invalidated: {}", report.invalidated));
                    o.out(format!(
                        "affected requirements: {}",
                        list(&report.affected_requirements)
                    ));
                    o.out(format!(
                        "affected ML requirements: {}",
                        list(&report.affected_ml_requirements)
                    ));
                    o.out(format!(
                        "affected hazards: {}",
                        list(&report.affected_hazards)
                    ));
                    let claims: Vec<&str> = report
                        .challenged_claims
                        .iter()
                        .map(|n| n.as_str())
                        .collect();
                    o.out(format!("challenged claims: {}", list(&claims)));
                    o.out("after invalidation:");
                    coverage_text(&mut o, &after);
                }
                Format::Json => o.json(&ImpactJson {
                    impact: &report,
                    coverage_after: &after,
                }),
            }
        }
        None => {
            let (report, checks) = if strict {
                coverage_strict(&model)
            } else {
                coverage(&model).map(|c| (c, Vec::new()))
            }
            .map_err(|e| Failure::Io(e.to_string()))?;
            match format {
                Format::Text => {
                    coverage_text(&mut o, &report);
                    for c in &checks {
                        o.out(c.to_string());
                    }
                }
                Format::Json => o.json(&CoverageJson {
                    coverage: &report,
                    strict_checks: &checks,
                }),
            }
        }
    }
    Ok(o)
}

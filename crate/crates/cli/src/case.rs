use std::path::Path;

use gsnkit_core::composer::{self, check_architecture, CaseArchive};
use gsnkit_core::export::{graph_to_dot, graph_to_json};
use gsnkit_core::library::catalog as entries;
use gsnkit_core::validator::validate_module;
use serde::Serialize;

use crate::input::{self, label};
use crate::output::{Failure, Outcome};
use crate::{ComposeFormat, Format};

fn load(path: &Path, o: &mut Outcome) -> Result<Option<CaseArchive>, Failure> {
    match input::archive(path)? {
        Ok(a) => Ok(Some(a)),
        Err(d) => {
            o.diagnostics(&label(path), &d);
            Ok(None)
        }
    }
}

pub fn compose(path: &Path, format: ComposeFormat, out: Option<&Path>) -> Result<Outcome, Failure> {
    let mut o = Outcome::default();
    let Some(archive) = load(path, &mut o)? else {
        return Ok(o);
    };
    let (graph, diags) = composer::compose(&archive);
    let file = label(path);
    match format {
        ComposeFormat::Text => {
            o.diagnostics(&file, &diags);
            let mut text = format!(
                "{} modules, {} links: {} nodes, {} edges, {} assurance claim points\n",
                archive.modules.len(),
                archive.links.len(),
                graph.nodes().len(),
                graph.edges().len(),
                graph.acps().len()
            );
            for m in &archive.modules {
                let errors = validate_module(&m.decl)
                    .iter()
                    .filter(|d| d.is_error())
                    .count();
                text.push_str(&format!(
                    "  {} ({}): {} nodes, {} errors\n",
                    m.name(),
                    m.tag.keyword(),
                    m.graph().nodes().len(),
                    errors
                ));
            }
            o.emit(&text, out)?;
        }
        ComposeFormat::Json | ComposeFormat::Dot => {
            for d in &diags {
                o.err(d.render(&file));
                o.failed |= d.is_error();
            }
            let text = if format == ComposeFormat::Json {
                graph_to_json(&graph)
            } else {
                graph_to_dot(&graph)
            };
            o.emit(&text, out)?;
        }
    }
    Ok(o)
}

pub fn arch_check(path: &Path, format: Format) -> Result<Outcome, Failure> {
    let mut o = Outcome::default();
    let Some(archive) = load(path, &mut o)? else {
        return Ok(o);
    };
    let report = check_architecture(&archive);
    match format {
        Format::Text => {
            for d in &report.findings {
                o.out(d.render(&label(path)));
            }
            o.out(format!(
                "shape ok: {}",
                if report.shape_ok { "yes" } else { "no" }
            ));
        }
        Format::Json => o.json(&report),
    }
    o.failed |= !report.shape_ok;
    Ok(o)
}

#[derive(Serialize)]
struct Row {
    name: &'static str,
    kind: &'static str,
    path: &'static str,
    provenance: &'static str,
}

pub fn catalog(format: Format) -> Result<Outcome, Failure> {
    let mut o = Outcome::default();
    let rows: Vec<Row> = entries()
        .iter()
        .map(|e| Row {
            name: e.name,
            kind: if e.is_case() { "case" } else { "pattern" },
            path: e.path,
            provenance: e.provenance,
        })
        .collect();
    match format {
        Format::Text => {
            let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
            for r in &rows {
                o.out(format!("{:width$}  {:7}  {}", r.name, r.kind, r.path));
            }
        }
        Format::Json => o.json(&rows),
    }
    Ok(o)
}

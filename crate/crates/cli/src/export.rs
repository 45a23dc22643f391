use std::path::Path;

use gsnkit_core::composer::compose;
use gsnkit_core::export::{graph_to_dot, graph_to_json, to_dot, to_json};
use gsnkit_core::validator::validate_module;
use gsnkit_core::Diagnostic;

use crate::input::{self, is_case, label};
use crate::output::{Failure, Outcome};
use crate::ExportFormat;

/// Renders a valid `.gsn` document, or the composed graph of a `.case`.
/// Nothing is rendered when the input has errors.
pub fn run(path: &Path, format: ExportFormat, out: Option<&Path>) -> Result<Outcome, Failure> {
    let mut o = Outcome::default();
    let text = render(path, format, &mut o)?;
    o.stderr = std::mem::take(&mut o.stdout);
    if let Some(text) = text {
        o.emit(&text, out)?;
    }
    Ok(o)
}

fn render(path: &Path, format: ExportFormat, o: &mut Outcome) -> Result<Option<String>, Failure> {
    let file = label(path);
    let text = if is_case(path) {
        let archive = match input::archive(path)? {
            Ok(a) => a,
            Err(d) => {
                o.diagnostics(&file, &d);
                return Ok(None);
            }
        };
        let mut diags: Vec<Diagnostic> = archive
            .modules
            .iter()
            .flat_map(|m| validate_module(&m.decl))
            .collect();
        let (graph, composed) = compose(&archive);
        diags.extend(composed);
        o.diagnostics(&file, &diags);
        if o.failed {
            return Ok(None);
        }
        match format {
            ExportFormat::Dot => graph_to_dot(&graph),
            ExportFormat::Json => graph_to_json(&graph),
        }
    } else {
        let (doc, diags) = input::document(path)?;
        o.diagnostics(&file, &diags);
        match doc {
            Some(doc) if !o.failed => match format {
                ExportFormat::Dot => to_dot(&doc),
                ExportFormat::Json => to_json(&doc),
            },
            _ => return Ok(None),
        }
    };
    Ok(Some(text))
}

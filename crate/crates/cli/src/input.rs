use std::path::Path;

use gsnkit_core::composer::{load_archive, CaseArchive};
use gsnkit_core::dsl::{parse, Document};
use gsnkit_core::trace::{parse_trace, TraceModel};
use gsnkit_core::{validate, Diagnostic};

use crate::output::Failure;

pub fn label(path: &Path) -> String {
    path.display().to_string()
}

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read `{}`: {e}", path.display())))
}

pub fn is_case(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "case")
}

/// Parses and validates a `.gsn` file. The document is absent when parsing
/// failed.
pub fn document(path: &Path) -> Result<(Option<Document>, Vec<Diagnostic>), Failure> {
    let text = read(path)?;
    let out = parse(&text, &label(path));
    if out.has_errors() {
        return Ok((None, out.diagnostics));
    }
    let mut diags = out.diagnostics;
    diags.extend(validate(&out.document));
    Ok((Some(out.document), diags))
}

pub fn archive(path: &Path) -> Result<Result<CaseArchive, Vec<Diagnostic>>, Failure> {
    if !path.is_file() {
        read(path)?;
    }
    Ok(load_archive(path))
}

/// The trace model named by a `.case` manifest, or a `.trc` file itself.
pub fn trace_model(
    path: &Path,
    archive: Option<&CaseArchive>,
) -> Result<Result<TraceModel, Vec<Diagnostic>>, Failure> {
    let trc = match archive {
        Some(a) => match &a.trace {
            Some(t) => path.parent().unwrap_or(Path::new("")).join(t),
            None => return Ok(Ok(TraceModel::default())),
        },
        None => path.to_path_buf(),
    };
    let text = read(&trc)?;
    Ok(parse_trace(&text, &label(&trc)))
}

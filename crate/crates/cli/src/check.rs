use std::path::{Path, PathBuf};

use gsnkit_core::composer::compose;
use gsnkit_core::dsl::format as canonical;
use gsnkit_core::pattern::parse_bindings;
use gsnkit_core::trace::{check_bindings, parse_trace};
use gsnkit_core::validator::validate_module;
use gsnkit_core::Diagnostic;

use crate::input::{self, label};
use crate::output::{Failure, FileDiagnostic, Outcome};
use crate::Format;

/// Runs `job` on every path on its own thread and returns the results in
/// sorted path order.
fn each<T: Send>(paths: &[PathBuf], job: impl Fn(&Path) -> T + Sync) -> Vec<(PathBuf, T)> {
    let mut sorted = paths.to_vec();
    sorted.sort();
    sorted.dedup();
    std::thread::scope(|s| {
        let handles: Vec<_> = sorted.iter().map(|p| s.spawn(|| job(p))).collect();
        sorted
            .iter()
            .cloned()
            .zip(
                handles
                    .into_iter()
                    .map(|h| h.join().expect("worker panicked")),
            )
            .collect()
    })
}

fn ext(path: &Path) -> &str {
    path.extension().and_then(|e| e.to_str()).unwrap_or("")
}

pub fn diagnose(path: &Path) -> Result<Vec<Diagnostic>, Failure> {
    let file = label(path);
    match ext(path) {
        "case" => {
            let archive = match input::archive(path)? {
                Ok(a) => a,
                Err(d) => return Ok(d),
            };
            let mut out: Vec<Diagnostic> = archive
                .modules
                .iter()
                .flat_map(|m| validate_module(&m.decl))
                .collect();
            let (graph, composed) = compose(&archive);
            out.extend(composed);
            if archive.trace.is_some() {
                match input::trace_model(path, Some(&archive))? {
                    Ok(model) => out.extend(
                        check_bindings(&model, &graph)
                            .into_iter()
                            .map(|e| Diagnostic::error("T004", e.to_string())),
                    ),
                    Err(d) => out.extend(d),
                }
            }
            Ok(out)
        }
        "trc" => Ok(parse_trace(&input::read(path)?, &file)
            .err()
            .unwrap_or_default()),
        "bindings" => Ok(parse_bindings(&input::read(path)?, &file)
            .err()
            .unwrap_or_default()),
        _ => Ok(input::document(path)?.1),
    }
}

pub fn check(paths: &[PathBuf], format: Format) -> Result<Outcome, Failure> {
    let results = each(paths, diagnose);
    let mut o = Outcome::default();
    let mut all = Vec::new();
    for (path, r) in results {
        all.push((label(&path), r?));
    }
    match format {
        Format::Text => {
            for (file, diags) in &all {
                o.diagnostics(file, diags);
            }
        }
        Format::Json => {
            let rows: Vec<FileDiagnostic> = all
                .iter()
                .flat_map(|(file, diags)| {
                    diags.iter().map(move |d| FileDiagnostic {
                        file,
                        diagnostic: d,
                    })
                })
                .collect();
            o.failed = rows.iter().any(|r| r.diagnostic.is_error());
            o.json(&rows);
        }
    }
    Ok(o)
}

fn canonical_text(path: &Path) -> Result<Result<String, Vec<Diagnostic>>, Failure> {
    Ok(canonical(&input::read(path)?, &label(path)))
}

/// Prints the canonical form of one file, or with `check` lists every file
/// whose text differs from its canonical form. Inputs are never rewritten.
pub fn fmt(paths: &[PathBuf], check: bool, out: Option<&Path>) -> Result<Outcome, Failure> {
    let mut o = Outcome::default();
    if !check {
        let [path] = paths else {
            return Err(Failure::Usage(
                "fmt takes one file unless --check is given".into(),
            ));
        };
        match canonical_text(path)? {
            Ok(text) => o.emit(&text, out)?,
            Err(d) => o.diagnostics(&label(path), &d),
        }
        return Ok(o);
    }
    let results = each(paths, |p| {
        Ok::<_, Failure>((input::read(p)?, canonical_text(p)?))
    });
    for (path, r) in results {
        let (text, formatted) = r?;
        match formatted {
            Ok(f) if f == text => {}
            Ok(_) => {
                o.out(label(&path));
                o.failed = true;
            }
            Err(d) => o.diagnostics(&label(&path), &d),
        }
    }
    Ok(o)
}

use std::path::Path;

use gsnkit_core::dsl::{parse, serialize, Document, ModuleKind};
use gsnkit_core::pattern::{
    completeness, instance_module, instantiate, instantiate_partial, parse_bindings,
};

use crate::input::{label, read};
use crate::output::{Failure, Outcome};

pub fn run(
    pattern: &Path,
    bindings: &Path,
    out: Option<&Path>,
    module: Option<&str>,
    partial: bool,
) -> Result<Outcome, Failure> {
    let mut o = Outcome::default();
    let parsed = parse(&read(pattern)?, &label(pattern));
    let binding_text = read(bindings)?;
    if parsed.has_errors() {
        o.diagnostics(&label(pattern), &parsed.diagnostics);
        return Ok(o);
    }
    let doc = parsed.document;
    let decl = match module {
        Some(name) => doc
            .module(name)
            .ok_or_else(|| Failure::Usage(format!("no module `{name}` in `{}`", label(pattern))))?,
        None => {
            let patterns: Vec<_> = doc
                .modules
                .iter()
                .filter(|m| m.kind == ModuleKind::Pattern)
                .collect();
            match (patterns.as_slice(), doc.modules.as_slice()) {
                ([one], _) => *one,
                ([], [one]) => one,
                _ => {
                    return Err(Failure::Usage(format!(
                        "`{}` holds several modules; choose one with --module",
                        label(pattern)
                    )))
                }
            }
        }
    };
    let set = match parse_bindings(&binding_text, &label(bindings)) {
        Ok(s) => s,
        Err(d) => {
            o.diagnostics(&label(bindings), &d);
            return Ok(o);
        }
    };
    let result = if partial {
        instantiate_partial(&decl.graph, &set)
    } else {
        instantiate(&decl.graph, &set)
    };
    let instance = match result {
        Ok((g, _)) => g,
        Err(e) => {
            o.err(format!("error: {e}"));
            o.failed = true;
            return Ok(o);
        }
    };
    let report = completeness(&instance);
    let doc = Document {
        modules: vec![instance_module(decl, instance)],
        trailing_comments: Vec::new(),
    };
    let text =
        serialize(&doc).map_err(|e| Failure::Io(format!("cannot serialize instance: {e}")))?;
    let summary = format!(
        "remaining placeholders: {}, undeveloped nodes: {}",
        report.remaining_placeholders.len(),
        report.remaining_undeveloped.len()
    );
    o.emit(&text, out)?;
    if out.is_some() {
        o.out(summary);
    } else {
        o.err(summary);
    }
    Ok(o)
}

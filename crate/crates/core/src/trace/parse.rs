use crate::diagnostic::Diagnostic;
use crate::dsl::lexer::Token;
use crate::dsl::{lex, normalize_newlines, Cursor, Tok};
use crate::model::NodeId;

use super::model::{
    Direction, EvidenceItem, Hazard, Measurement, Metric, MlSafetyRequirement, Quantity, Relation,
    SafetyRequirement, TraceError, TraceModel,
};

/// Parses a trace file.
///
/// ```text
/// hazard H1 "Services miss an emergency" severity "loss of life"
/// req R1 "Locate the fire within 200m" mitigates H1 qty location_error<=200 m
/// mlreq M1 "Detector recall" from R1 metric recall>=0.95
/// evidence E1 test_report supports R1, M1 measured recall=0.97
/// evidence E2 field_trial supports R1 invalid
/// bind R1 -> system::G1
/// ```
///
/// Every entry sits on one line. Cross-references are checked after
/// parsing; problems are reported as `T001` (syntax), `T002` (duplicate id)
/// and `T003` (unresolved reference).
pub fn parse_trace(text: &str, file: &str) -> Result<TraceModel, Vec<Diagnostic>> {
    let text = normalize_newlines(text);
    let lexed = lex(&text, file);
    let mut diags: Vec<Diagnostic> = lexed.diagnostics.into_iter().map(syntax).collect();
    let mut c = Cursor::new(&lexed.tokens, file);
    let mut model = TraceModel::default();
    let mut spans = Vec::new();

    while !c.at_eof() {
        let start = c.peek();
        let line = start.line;
        match entry(&mut c, &mut model) {
            Ok(id) => {
                let span = c.span_from(start);
                if c.peek().line == line && !c.at_eof() {
                    diags.push(syntax(c.unexpected("end of line")));
                    c.skip_through_line(line);
                }
                spans.push((id, span));
            }
            Err(d) => {
                diags.push(syntax(d));
                c.skip_through_line(line);
            }
        }
    }

    for err in model.check() {
        let (code, at) = match &err {
            TraceError::DuplicateId(id) => ("T002", id.as_str()),
            TraceError::Dangling { from, .. } | TraceError::EmptyReference(from) => {
                ("T003", from.as_str())
            }
            TraceError::UnknownEntity(id) => ("T003", id.as_str()),
            _ => ("T003", ""),
        };
        let span = match &err {
            TraceError::DuplicateId(_) => spans.iter().filter(|(i, _)| i == at).nth(1),
            _ => spans.iter().find(|(i, _)| i == at),
        };
        diags
            .push(Diagnostic::error(code, err.to_string()).with_span(span.map(|(_, s)| s.clone())));
    }

    if diags.iter().any(Diagnostic::is_error) {
        crate::diagnostic::sort_diagnostics(&mut diags);
        Err(diags)
    } else {
        Ok(model)
    }
}

fn syntax(mut d: Diagnostic) -> Diagnostic {
    if d.code.starts_with('P') {
        d.code = "T001".into();
    }
    d
}

fn id_list(c: &mut Cursor<'_>, what: &str) -> Result<Vec<String>, Diagnostic> {
    let mut out = vec![c.expect_ident(what)?.0];
    while c.eat(&Tok::Comma) {
        out.push(c.expect_ident(what)?.0);
    }
    Ok(out)
}

/// A unit following a number on the same line: an identifier that is not a
/// clause keyword, or `%`.
fn unit(c: &mut Cursor<'_>, number: &Token) -> Option<String> {
    if c.peek().line != number.end_line {
        return None;
    }
    match c.tok() {
        Tok::Percent => {
            c.bump();
            Some("%".into())
        }
        Tok::Ident(w) if !matches!(w.as_str(), "measured" | "invalid" | "qty") => {
            c.bump();
            Some(w.clone())
        }
        _ => None,
    }
}

fn relation(c: &mut Cursor<'_>) -> Result<Relation, Diagnostic> {
    let r = match c.tok() {
        Tok::Eq => Relation::Equal,
        Tok::Le => Relation::AtMost,
        Tok::Ge => Relation::AtLeast,
        _ => return Err(c.unexpected("`=`, `<=` or `>=`")),
    };
    c.bump();
    Ok(r)
}

fn entry(c: &mut Cursor<'_>, model: &mut TraceModel) -> Result<String, Diagnostic> {
    let (word, _) = c.expect_ident("`hazard`, `req`, `mlreq`, `evidence` or `bind`")?;
    match word.as_str() {
        "hazard" => {
            let (id, _) = c.expect_ident("hazard id")?;
            let (description, _) = c.expect_string("hazard description")?;
            let severity_note = if c.eat_word("severity") {
                c.expect_string("severity note")?.0
            } else {
                String::new()
            };
            model.hazards.push(Hazard {
                id: id.clone(),
                description,
                severity_note,
            });
            Ok(id)
        }
        "req" => {
            let (id, _) = c.expect_ident("requirement id")?;
            let (text, _) = c.expect_string("requirement text")?;
            c.expect_word("mitigates")?;
            let mitigates = id_list(c, "hazard id")?;
            let mut quantities = Vec::new();
            while c.eat_word("qty") {
                let (name, _) = c.expect_ident("quantity name")?;
                let relation = relation(c)?;
                let (value, t) = c.expect_number("quantity value")?;
                let unit = unit(c, t).ok_or_else(|| c.unexpected("unit"))?;
                quantities.push(Quantity {
                    name,
                    relation,
                    value,
                    unit,
                });
            }
            model.requirements.push(SafetyRequirement {
                id: id.clone(),
                text,
                quantities,
                mitigates,
            });
            Ok(id)
        }
        "mlreq" => {
            let (id, _) = c.expect_ident("ML requirement id")?;
            let (text, _) = c.expect_string("ML requirement text")?;
            c.expect_word("from")?;
            let derived_from = id_list(c, "requirement id")?;
            c.expect_word("metric")?;
            let (name, _) = c.expect_ident("metric name")?;
            let direction = match relation(c)? {
                Relation::AtLeast => Direction::AtLeast,
                Relation::AtMost => Direction::AtMost,
                Relation::Equal => {
                    return Err(
                        Diagnostic::error("T001", "metric thresholds need `<=` or `>=`")
                            .with_span(Some(c.prev().span(c.file))),
                    )
                }
            };
            let (threshold, t) = c.expect_number("threshold")?;
            let unit = unit(c, t);
            model.ml_requirements.push(MlSafetyRequirement {
                id: id.clone(),
                text,
                derived_from,
                metric: Metric {
                    name,
                    threshold,
                    direction,
                    unit,
                },
            });
            Ok(id)
        }
        "evidence" => {
            let (id, _) = c.expect_ident("evidence id")?;
            let (kind, _) = c.expect_ident("evidence kind")?;
            c.expect_word("supports")?;
            let supports = id_list(c, "requirement id")?;
            let mut measured = Vec::new();
            while c.eat_word("measured") {
                let (name, _) = c.expect_ident("measurement name")?;
                c.expect(&Tok::Eq)?;
                let (value, t) = c.expect_number("measured value")?;
                let unit = unit(c, t);
                measured.push(Measurement { name, value, unit });
            }
            let valid = !c.eat_word("invalid");
            model.evidence.push(EvidenceItem {
                id: id.clone(),
                kind,
                supports,
                measured,
                valid,
            });
            Ok(id)
        }
        "bind" => {
            let (id, _) = c.expect_ident("entity id")?;
            c.expect(&Tok::Arrow)?;
            let (node, span) = c.expect_ref("module::node")?;
            let node = NodeId::new(&node)
                .ok()
                .filter(NodeId::is_qualified)
                .ok_or_else(|| {
                    Diagnostic::error("T001", format!("`{node}` is not a qualified node id"))
                        .with_span(Some(span))
                })?;
            if model.gsn_bindings.insert(id.clone(), node).is_some() {
                return Err(Diagnostic::error("T002", format!("`{id}` is bound twice"))
                    .with_span(Some(c.span_from(c.prev()))));
            }
            Ok(format!("bind {id}"))
        }
        other => Err(Diagnostic::error(
            "T001",
            format!("expected `hazard`, `req`, `mlreq`, `evidence` or `bind`, found `{other}`"),
        )
        .with_span(Some(c.prev().span(c.file)))),
    }
}

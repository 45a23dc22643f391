use super::*;
use crate::model::{EdgeDecoration, NodeId, NodeKind};
use crate::placeholder::placeholders;

fn codes(out: &ParseOutput) -> Vec<&str> {
    out.diagnostics.iter().map(|d| d.code.as_str()).collect()
}

#[test]
fn single_goal_module() {
    let src = r#"module m { goal G0 "{AI System (AIS)} is sufficiently safe throughout its entire operational life" uninstantiated }"#;
    let out = parse(src, "m.gsn");
    assert!(out.diagnostics.is_empty(), "{:?}", out.diagnostics);
    assert_eq!(out.document.modules.len(), 1);
    let g = &out.document.modules[0].graph;
    assert_eq!(g.nodes().len(), 1);
    let n = &g.nodes()[0];
    assert_eq!(n.kind, NodeKind::Goal);
    assert!(n.uninstantiated);
    assert_eq!(placeholders(&n.statement).unwrap().len(), 1);
    let text = serialize(&out.document).unwrap();
    assert!(text.contains("uninstantiated"));
}

#[test]
fn empty_input() {
    let out = parse("", "e.gsn");
    assert!(out.document.modules.is_empty());
    assert!(out.diagnostics.is_empty());
    assert_eq!(serialize(&out.document).unwrap(), "");
}

#[test]
fn duplicate_id_reports_both_spans() {
    let src = "module m {\n  goal G1 \"x\"\n  goal G1 \"y\"\n}\n";
    let out = parse(src, "d.gsn");
    assert_eq!(codes(&out), ["P003"]);
    let d = &out.diagnostics[0];
    assert!(d.message.contains("G1"));
    let span = d.span.as_ref().unwrap();
    assert_eq!((span.start_line, span.start_col), (3, 8));
    assert_eq!(span.slice(src), "G1");
    assert_eq!(d.related.len(), 1);
    assert_eq!(d.related[0].start_line, 2);
    assert_eq!(out.document.modules[0].graph.nodes().len(), 1);
}

#[test]
fn unit_multiplicity_is_not_serialized() {
    let src = "module m {\n  goal A \"a\"\n  goal B \"b\"\n  A -> B : supported_by mult 1..1\n}\n";
    let out = parse(src, "u.gsn");
    assert!(out.diagnostics.is_empty());
    assert!(out.document.modules[0].graph.edges()[0]
        .decoration
        .is_none());
    let text = serialize(&out.document).unwrap();
    assert!(!text.contains("mult"));
}

#[test]
fn decorations_parse() {
    let src = r#"pattern p {
  goal A "a"
  strategy S "s"
  goal B "b"
  goal C "c"
  context X "x"

  A -> S : supported_by
  S -> B : supported_by choice K
  S -> C : supported_by choice K
  A -> X : in_context_of mult 0..*
  B -> C : supported_by optional

  choice K at S pick 1..2

  acp Q on (A -> X : in_context_of) confidence conf

  public A
}
"#;
    let out = parse(src, "p.gsn");
    assert!(out.diagnostics.is_empty(), "{:?}", out.diagnostics);
    let m = &out.document.modules[0];
    assert_eq!(m.kind, ModuleKind::Pattern);
    let g = &m.graph;
    assert_eq!(g.choice_members("K").count(), 2);
    assert_eq!(g.choice_groups()[0].min, 1);
    assert_eq!(
        g.edges()[3].decoration,
        EdgeDecoration::Multiplicity { min: 0, max: None }
    );
    assert_eq!(g.edges()[4].decoration, EdgeDecoration::Optional);
    assert_eq!(g.acps()[0].confidence_module, "conf");
    assert_eq!(g.public_ids(), &[NodeId::new("A").unwrap()]);
    assert_eq!(serialize(&out.document).unwrap(), src);
}

#[test]
fn recovers_after_errors() {
    let src = "module m {\n  goal G1 \"ok\"\n  goal ??? \"bad\"\n  goal G2 \"ok\"\n  G1 -> : supported_by\n  G1 -> G2 : supported_by\n}\nmodule n { goal X \"x\" }\n";
    let out = parse(src, "r.gsn");
    assert!(out.has_errors());
    assert_eq!(out.document.modules.len(), 2);
    let g = &out.document.modules[0].graph;
    assert_eq!(g.nodes().len(), 2);
    assert_eq!(g.edges().len(), 1);
    for d in out.diagnostics.iter().filter(|d| d.is_error()) {
        let span = d.span.as_ref().expect("error has span");
        assert!(!span.slice(src).is_empty(), "{d:?}");
    }
}

#[test]
fn missing_close_brace() {
    let out = parse(
        "module m { goal A \"a\"\nmodule n { goal B \"b\" }",
        "x.gsn",
    );
    assert_eq!(codes(&out), ["P002"]);
    assert_eq!(out.document.modules.len(), 2);
}

#[test]
fn structural_errors() {
    let src = "module m {\n goal A \"a\"\n goal B \"{b\"\n A -> A : supported_by\n A -> B : supported_by\n A -> B : supported_by\n A -> Z : supported_by\n A -> B : in_context_of mult 3..2\n B -> A : in_context_of optional mult 2..3\n public Q\n}\nmodule m { }\n";
    let out = parse(src, "s.gsn");
    let mut c = codes(&out);
    c.sort();
    assert_eq!(
        c,
        ["P004", "P005", "P005", "P006", "P006", "P007", "P008", "P009"]
    );
}

#[test]
fn reserved_words_rejected() {
    let out = parse("module m { goal goal \"x\" }", "k.gsn");
    assert_eq!(codes(&out), ["P002"]);
}

#[test]
fn qualified_targets_allowed() {
    let out = parse(
        "module m { goal A \"a\" A -> system::G0 : supported_by }",
        "q.gsn",
    );
    assert!(out.diagnostics.is_empty(), "{:?}", out.diagnostics);
    let e = &out.document.modules[0].graph.edges()[0];
    assert_eq!(e.target.module(), Some("system"));
}

#[test]
fn comments_round_trip() {
    let src = "# file header\npattern p {\n  # about A\n  goal A \"a\" # inferred\n  goal B \"b\"\n\n  A -> B : supported_by # inferred\n  # end\n}\n\n# footer\n";
    let out = parse(src, "c.gsn");
    assert!(out.diagnostics.is_empty());
    assert_eq!(serialize(&out.document).unwrap(), src);
}

#[test]
fn format_is_canonical_and_idempotent() {
    let messy =
        "module   m{goal A   \"a\"  undeveloped\n\n\n goal B \"b\" A->B:supported_by public A,B}";
    let once = format(messy, "f.gsn").unwrap();
    assert_eq!(
        once,
        "module m {\n  goal A \"a\" undeveloped\n  goal B \"b\"\n\n  A -> B : supported_by\n\n  public A, B\n}\n"
    );
    assert_eq!(format(&once, "f.gsn").unwrap(), once);
}

#[test]
fn format_rejects_syntax_errors() {
    let bad = "module m { goal }";
    let errs = format(bad, "f.gsn").unwrap_err();
    assert!(errs.iter().all(|d| d.is_error()));
}

#[test]
fn crlf_is_normalized() {
    let out = parse("module m {\r\n  goal A \"a\"\r\n}\r\n", "w.gsn");
    assert!(out.diagnostics.is_empty());
    assert_eq!(
        serialize(&out.document).unwrap(),
        "module m {\n  goal A \"a\"\n}\n"
    );
}

#[test]
fn escapes_round_trip() {
    let src = "module m {\n  goal A \"say \\\"hi\\\" \\\\ \\{lit\\} {Role}\" uninstantiated\n}\n";
    let out = parse(src, "e.gsn");
    assert!(out.diagnostics.is_empty(), "{:?}", out.diagnostics);
    let n = &out.document.modules[0].graph.nodes()[0];
    assert_eq!(n.statement, "say \"hi\" \\ \\{lit\\} {Role}");
    assert_eq!(placeholders(&n.statement).unwrap(), vec!["Role"]);
    assert_eq!(serialize(&out.document).unwrap(), src);
}

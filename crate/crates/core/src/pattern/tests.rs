use super::*;
use crate::dsl::parse;
use crate::model::{EdgeKind, EdgeRef, NodeId};

fn graph(src: &str) -> ArgumentGraph {
    let out = parse(src, "p.gsn");
    assert!(out.diagnostics.is_empty(), "{:?}", out.diagnostics);
    out.document.modules.into_iter().next().unwrap().graph
}

fn id(s: &str) -> NodeId {
    NodeId::new(s).unwrap()
}

fn sb(a: &str, b: &str) -> EdgeRef {
    EdgeRef::new(id(a), id(b), EdgeKind::SupportedBy)
}

fn ids(g: &ArgumentGraph) -> Vec<&str> {
    g.nodes().iter().map(|n| n.id.as_str()).collect()
}

const SYSTEMS: &str = r#"pattern p {
  goal G0 "{Org} deploys safe systems" uninstantiated
  strategy S "argue over each system"
  goal G1 "{System} is safe" uninstantiated
  solution E "test report for {System}" uninstantiated
  context C "operating context"

  G0 -> S : supported_by
  S -> G1 : supported_by mult 1..3
  G1 -> E : supported_by
  G1 -> C : in_context_of

  acp A1 on (G1 -> C : in_context_of) confidence conf
}
"#;

#[test]
fn binds_single_role() {
    let g = graph("module m { goal G0 \"{AI System (AIS)} is sufficiently safe throughout its entire operational life\" uninstantiated }");
    let b = BindingSet::new().role("AI System (AIS)", "Wildfire Alert System");
    let (out, report) = instantiate(&g, &b).unwrap();
    let n = &out.nodes()[0];
    assert_eq!(
        n.statement,
        "Wildfire Alert System is sufficiently safe throughout its entire operational life"
    );
    assert!(!n.uninstantiated);
    assert!(report.fully_instantiated);
}

#[test]
fn identity_instantiation() {
    let g = graph("module m { goal A \"a\" strategy S \"s\" goal B \"b\" undeveloped A -> S : supported_by S -> B : supported_by mult 1..1 }");
    let (out, report) = instantiate(&g, &BindingSet::new()).unwrap();
    assert_eq!(out, g);
    assert!(report.fully_instantiated);
    assert_eq!(report.remaining_undeveloped, vec![id("B")]);
}

#[test]
fn multiplicity_replicates_subtree() {
    let g = graph(SYSTEMS);
    let b = BindingSet::new()
        .role("Org", "Acme")
        .role("System", "generic")
        .indexed_role("System", 2, "drone")
        .count(sb("S", "G1"), 2);
    let (out, report) = instantiate(&g, &b).unwrap();
    assert_eq!(
        ids(&out),
        ["G0", "S", "G1_1", "E_1", "C_1", "G1_2", "E_2", "C_2"]
    );
    assert_eq!(out.edges().len(), 7);
    assert_eq!(out.node(&id("G1_1")).unwrap().statement, "generic is safe");
    assert_eq!(
        out.node(&id("E_2")).unwrap().statement,
        "test report for drone"
    );
    let acps: Vec<&str> = out.acps().iter().map(|a| a.id.as_str()).collect();
    assert_eq!(acps, ["A1_1", "A1_2"]);
    assert_eq!(out.acps()[1].edge.source, id("G1_2"));
    assert!(report.fully_instantiated);
}

#[test]
fn default_count_is_lower_bound() {
    let g = graph(SYSTEMS);
    let b = BindingSet::new().role("Org", "o").role("System", "s");
    let (out, _) = instantiate(&g, &b).unwrap();
    assert!(out.contains(&id("G1_1")));
    assert!(!out.contains(&id("G1_2")));
}

#[test]
fn count_outside_range() {
    let g = graph(SYSTEMS);
    let b = BindingSet::new()
        .role("Org", "o")
        .role("System", "s")
        .count(sb("S", "G1"), 4);
    assert!(matches!(
        instantiate(&g, &b),
        Err(InstantiateError::Cardinality(_))
    ));
}

#[test]
fn unbound_role_is_named() {
    let g = graph(SYSTEMS);
    let b = BindingSet::new().role("Org", "o");
    assert_eq!(
        instantiate(&g, &b).unwrap_err(),
        InstantiateError::UnboundRole("System".into())
    );
    let (out, report) = instantiate_partial(&g, &b).unwrap();
    assert!(!report.fully_instantiated);
    assert!(out.node(&id("G1_1")).unwrap().uninstantiated);
    assert!(!out.node(&id("G0")).unwrap().uninstantiated);
}

#[test]
fn rejects_bad_binding_text() {
    let g = graph(SYSTEMS);
    let empty = BindingSet::new().role("Org", " ");
    assert_eq!(
        instantiate(&g, &empty).unwrap_err(),
        InstantiateError::EmptyBinding("Org".into())
    );
    let braces = BindingSet::new().role("Org", "{x}");
    assert_eq!(
        instantiate(&g, &braces).unwrap_err(),
        InstantiateError::InvalidBinding("Org".into())
    );
}

#[test]
fn nested_multiplicity_uses_innermost_index() {
    let g = graph(
        r#"pattern p {
  goal G "top"
  strategy S "over teams"
  goal T "{Team} ok" uninstantiated
  strategy U "over members"
  goal M "{Member} ok" uninstantiated

  G -> S : supported_by
  S -> T : supported_by mult 1..*
  T -> U : supported_by
  U -> M : supported_by mult 1..3
}
"#,
    );
    let b = BindingSet::new()
        .role("Team", "team")
        .indexed_role("Team", 2, "second team")
        .role("Member", "member")
        .indexed_role("Member", 2, "second member")
        .count(sb("S", "T"), 2)
        .count(sb("U", "M"), 2);
    let (out, _) = instantiate(&g, &b).unwrap();
    assert_eq!(out.nodes().len(), 2 + 2 * (2 + 2));
    assert_eq!(out.node(&id("T_2")).unwrap().statement, "second team ok");
    assert_eq!(
        out.node(&id("M_1_2")).unwrap().statement,
        "second member ok"
    );
    assert_eq!(out.node(&id("M_2_1")).unwrap().statement, "member ok");
}

#[test]
fn choices_and_optionals() {
    let g = graph(
        r#"pattern p {
  goal G "g"
  strategy S "s"
  goal A "a" undeveloped
  goal B "b" undeveloped
  goal C "c"
  goal D "d" undeveloped

  G -> S : supported_by
  S -> A : supported_by choice K
  S -> B : supported_by choice K
  S -> C : supported_by
  C -> D : supported_by optional

  choice K at S pick 1..1
}
"#,
    );
    let missing = BindingSet::new();
    assert!(matches!(
        instantiate(&g, &missing),
        Err(InstantiateError::Cardinality(_))
    ));

    let both = BindingSet::new().choose("K", vec![id("A"), id("B")]);
    assert!(matches!(
        instantiate(&g, &both),
        Err(InstantiateError::Cardinality(_))
    ));

    let b = BindingSet::new().choose("K", vec![id("B")]);
    let (out, _) = instantiate(&g, &b).unwrap();
    assert_eq!(ids(&out), ["G", "S", "B", "C"]);
    assert!(out.choice_groups().is_empty());
    assert!(out.edges().iter().all(|e| e.decoration.is_none()));

    let b = b.include(sb("C", "D"), true);
    let (out, _) = instantiate(&g, &b).unwrap();
    assert_eq!(ids(&out), ["G", "S", "B", "C", "D"]);
}

#[test]
fn zero_count_cannot_empty_a_strategy() {
    let g = graph("pattern p { goal G \"g\" strategy S \"s\" goal A \"a\" G -> S : supported_by S -> A : supported_by mult 0..2 }");
    let b = BindingSet::new().count(sb("S", "A"), 0);
    assert_eq!(
        instantiate(&g, &b).unwrap_err(),
        InstantiateError::EmptiedStrategy(id("S"))
    );
}

#[test]
fn suffix_collision_is_reported() {
    let g = graph("pattern p { goal G \"g\" strategy S \"s\" goal A \"a\" goal A_1 \"x\" G -> S : supported_by S -> A : supported_by mult 1..2 S -> A_1 : supported_by }");
    assert_eq!(
        instantiate(&g, &BindingSet::new()).unwrap_err(),
        InstantiateError::IdCollision(id("A_1"))
    );
}

#[test]
fn wrong_edge_keys_are_rejected() {
    let g = graph(SYSTEMS);
    let b = BindingSet::new().count(sb("G0", "S"), 1);
    assert!(matches!(
        instantiate(&g, &b),
        Err(InstantiateError::NotMultiplicity(_))
    ));
    let b = BindingSet::new().include(sb("S", "G1"), true);
    assert!(matches!(
        instantiate(&g, &b),
        Err(InstantiateError::NotOptional(_))
    ));
    let b = BindingSet::new().choose("Z", vec![id("G1")]);
    assert!(matches!(
        instantiate(&g, &b),
        Err(InstantiateError::UnknownGroup(_))
    ));
}

#[test]
fn completeness_of_empty_graph() {
    let r = completeness(&ArgumentGraph::new("e"));
    assert!(r.fully_instantiated);
    assert!(r.remaining_placeholders.is_empty() && r.remaining_undeveloped.is_empty());
}

#[test]
fn bindings_file_round_trip() {
    let text = r#"# wildfire
role "AI System (AIS)" = "Wildfire Alert System"
role "ML Model"[2] = "smoke classifier"
count S -> G1 = 2
count G1 -> C : in_context_of = 1
choose MODEL = PSM, GPM
include PSM -> GPM = true
"#;
    let b = parse_bindings(text, "b.bindings").unwrap();
    assert_eq!(b.role_bindings["AI System (AIS)"], "Wildfire Alert System");
    assert_eq!(
        b.indexed_bindings[&("ML Model".to_string(), 2)],
        "smoke classifier"
    );
    assert_eq!(b.multiplicity_counts[&sb("S", "G1")], 2);
    assert_eq!(
        b.multiplicity_counts[&EdgeRef::new(id("G1"), id("C"), EdgeKind::InContextOf)],
        1
    );
    assert_eq!(b.choice_selections["MODEL"], vec![id("PSM"), id("GPM")]);
    assert!(b.optional_inclusions[&sb("PSM", "GPM")]);
    assert_eq!(parse_bindings(&b.to_text(), "b").unwrap(), b);
}

#[test]
fn bindings_file_errors() {
    let errs = parse_bindings(
        "role \"A\" = \"x\"\nrole \"A\" = \"y\"\nbogus 1\ninclude A -> B = maybe\n",
        "b",
    )
    .unwrap_err();
    let mut codes: Vec<&str> = errs.iter().map(|d| d.code.as_str()).collect();
    codes.sort();
    assert_eq!(codes, ["P002", "P002", "P003"]);
}

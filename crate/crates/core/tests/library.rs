use std::collections::BTreeSet;

use gsnkit_core::composer::{check_architecture, compose};
use gsnkit_core::dsl::{format, parse, serialize, Document};
use gsnkit_core::library::{self, check_expected, Loaded, FILES};
use gsnkit_core::pattern::{instance_module, instantiate, parse_bindings};
use gsnkit_core::trace::{check_bindings, coverage, impact, strict_checks};
use gsnkit_core::{validate, NodeId};

fn case(name: &str) -> library::LoadedCase {
    match library::load(name).unwrap() {
        Loaded::Case(c) => c,
        Loaded::Pattern(_) => panic!("{name} is not a case"),
    }
}

#[test]
fn every_entry_loads_and_meets_expectations() {
    assert!(library::catalog().len() >= 8);
    for e in library::catalog() {
        let loaded = library::load(e.name).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        assert_eq!(
            check_expected(&e.expected, &loaded),
            Vec::<String>::new(),
            "{}",
            e.name
        );
    }
}

#[test]
fn catalog_order_is_fixed() {
    let names: Vec<&str> = library::catalog().iter().map(|e| e.name).collect();
    assert_eq!(
        names,
        [
            "big_top",
            "ethics",
            "justice",
            "system",
            "amlas_scoping",
            "gpai",
            "wildfire_case",
            "sepsis_trace"
        ]
    );
    assert!(library::load("nope").is_err());
}

#[test]
fn shipped_gsn_files_are_canonical() {
    for (path, text) in FILES.iter().filter(|(p, _)| p.ends_with(".gsn")) {
        assert_eq!(format(text, path).unwrap(), *text, "{path}");
        assert!(
            validate(&parse(text, path).document)
                .iter()
                .all(|d| !d.is_error()),
            "{path}"
        );
    }
}

#[test]
fn shipped_instances_match_their_patterns() {
    for name in ["ethics", "justice", "system"] {
        let pattern_path = format!("patterns/{name}.gsn");
        let pattern = parse(library::file(&pattern_path).unwrap(), &pattern_path)
            .document
            .modules
            .remove(0);
        let bpath = format!("samples/wildfire/{name}.bindings");
        let b = parse_bindings(library::file(&bpath).unwrap(), &bpath).unwrap();
        let (g, _) = instantiate(&pattern.graph, &b).unwrap();
        let doc = Document {
            modules: vec![instance_module(&pattern, g)],
            trailing_comments: Vec::new(),
        };
        let expected = library::file(&format!("samples/wildfire/{name}.gsn")).unwrap();
        assert_eq!(serialize(&doc).unwrap(), expected, "{name}");
    }
}

#[test]
fn system_instance_names_the_wildfire_system() {
    let g = library::load("wildfire_case").unwrap().graph();
    let g0 = g.node(&NodeId::new("system::G0").unwrap()).unwrap();
    assert_eq!(
        g0.statement,
        "Wildfire Alert System is sufficiently safe throughout its entire operational life"
    );
}

#[test]
fn wildfire_architecture() {
    let c = case("wildfire_case");
    let (_, diags) = compose(&c.archive);
    assert!(diags.iter().all(|d| !d.is_error()), "{diags:?}");
    let r = check_architecture(&c.archive);
    assert!(r.shape_ok, "{:?}", r.findings);

    let codes = |a| -> Vec<String> {
        check_architecture(a)
            .findings
            .into_iter()
            .map(|d| d.code)
            .collect()
    };
    let removed = c.archive.without_module("system").unwrap();
    assert_eq!(codes(&removed), ["A2"]);
    let duplicated = c.archive.duplicate_module("ethics", "ethics_copy").unwrap();
    assert_eq!(codes(&duplicated), ["A1"]);
}

#[test]
fn wildfire_trace() {
    let c = case("wildfire_case");
    let m = c.trace.unwrap();
    let (g, _) = compose(&c.archive);
    assert!(check_bindings(&m, &g).is_empty());

    let qty: Vec<(f64, &str)> = m
        .requirements
        .iter()
        .flat_map(|r| r.quantities.iter().map(|q| (q.value, q.unit.as_str())))
        .collect();
    assert_eq!(
        qty,
        [(200.0, "m"), (3.0, "h"), (95.0, "%"), (52.0, "per_month")]
    );

    let r = coverage(&m).unwrap();
    assert_eq!((r.hazards.covered, r.hazards.total), (2, 2));
    assert_eq!((r.requirements.covered, r.requirements.total), (4, 4));
    assert!(r.fully_covered);

    let i = impact(&m, Some(&g), "EV-ER2").unwrap();
    assert_eq!(i.affected_requirements, ["REQ-SAFE-ER-2"]);
    assert!(i.affected_hazards.is_empty());
    let after = coverage(&i.model).unwrap();
    assert_eq!((after.hazards.covered, after.requirements.covered), (2, 3));
    let h1: BTreeSet<&str> = m
        .requirements
        .iter()
        .filter(|r| {
            r.mitigates.iter().any(|h| h == "H1") && !i.affected_requirements.contains(&r.id)
        })
        .map(|r| r.id.as_str())
        .collect();
    assert_eq!(h1, BTreeSet::from(["REQ-SAFE-ER-1", "REQ-SAFE-ER-3"]));
    assert!(!i.challenged_claims.is_empty());
}

#[test]
fn wildfire_er4_invalid_flags_hazard_two() {
    let m = case("wildfire_case")
        .trace
        .unwrap()
        .invalidate("EV-ER4")
        .unwrap();
    let r = coverage(&m).unwrap();
    assert_eq!((r.requirements.covered, r.requirements.total), (3, 4));
    assert_eq!(r.hazards_without_evidence, ["H2"]);
}

#[test]
fn sepsis_strict_mode() {
    let m = case("sepsis_trace").trace.unwrap();
    let measured = |id: &str| -> Vec<f64> {
        m.evidence_item(id)
            .unwrap()
            .measured
            .iter()
            .filter(|x| x.unit.as_deref() == Some("%"))
            .map(|x| x.value)
            .collect()
    };
    assert_eq!(measured("EV-CLINICIAN"), [97.0, 3.0]);
    assert_eq!(measured("EV-ORIGINAL"), [65.0, 35.0]);
    assert_eq!(measured("EV-MODIFIED"), [92.0, 8.0]);

    let checks = strict_checks(&m);
    let verdict = |id: &str| {
        checks
            .iter()
            .find(|c| c.evidence == id && c.name == "large_dose_change")
            .map(|c| c.passed)
    };
    assert_eq!(verdict("EV-MODIFIED"), Some(true));
    assert_eq!(verdict("EV-ORIGINAL"), Some(false));
    assert_eq!(verdict("EV-CLINICIAN"), Some(true));
}

#[test]
fn json_output_validates_against_schema() {
    let schema: serde_json::Value = serde_json::from_str(gsnkit_core::export::SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for (path, text) in FILES.iter().filter(|(p, _)| p.ends_with(".gsn")) {
        let doc = parse(text, path).document;
        let json: serde_json::Value = serde_json::from_str(&gsnkit_core::to_json(&doc)).unwrap();
        let errors: Vec<String> = validator
            .iter_errors(&json)
            .map(|e| e.to_string())
            .collect();
        assert!(errors.is_empty(), "{path}: {errors:?}");
    }
    let bad = serde_json::json!({"format_version": 1, "modules": [], "extra": true});
    assert!(!validator.is_valid(&bad));
}

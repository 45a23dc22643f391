use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gsnkit_core::dsl::parse;
use gsnkit_core::export::from_json;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn gsnkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsnkit"))
        .args(args)
        .current_dir(root())
        .env("NO_COLOR", "1")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn temp(name: &str, text: &str) -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    (dir, p.display().to_string())
}

const BAD: &str = "module bad {
  goal G \"g\"
  goal G2 \"h\"
  solution Sn1 \"e\"
  solution Sn2 \"f\"
  G -> G2 : supported_by
  G2 -> Sn1 : supported_by
  G -> Sn2 : supported_by
  Sn2 -> G2 : supported_by
}
";

#[test]
fn check_valid_pattern_is_silent() {
    let o = gsnkit(&["check", "patterns/justice.gsn"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "");
}

#[test]
fn check_reports_supported_solution() {
    let (_d, p) = temp("bad.gsn", BAD);
    let o = gsnkit(&["check", &p]);
    assert_eq!(code(&o), 1);
    let lines: Vec<_> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 1, "{lines:?}");
    assert!(lines[0].contains("error[V005]"));
    assert!(lines[0].starts_with(&format!("{p}:9:3:")));
}

#[test]
fn check_missing_file_is_usage_failure() {
    let o = gsnkit(&["check", "missing.gsn"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("missing.gsn"));
}

#[test]
fn check_json_lists_file_and_code() {
    let (_d, p) = temp("bad.gsn", BAD);
    let o = gsnkit(&["check", "--format", "json", &p]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["code"], "V005");
    assert_eq!(v[0]["file"], p.as_str());
}

#[test]
fn check_output_is_in_path_order() {
    let (_d, p) = temp("bad.gsn", BAD);
    let (_e, q) = temp(
        "a.gsn",
        "module a {\n  goal G \"g\"\n  solution S \"s\"\n  S -> G : supported_by\n}\n",
    );
    let forward = gsnkit(&["check", &p, &q]);
    let backward = gsnkit(&["check", &q, &p]);
    assert_eq!(forward.stdout, backward.stdout);
    let out = stdout(&forward);
    let first = out.lines().next().unwrap();
    assert!(first.starts_with(p.min(q.clone()).as_str()), "{out}");
}

#[test]
fn check_whole_corpus() {
    let o = gsnkit(&[
        "check",
        "patterns/big_top.gsn",
        "samples/wildfire/wildfire.case",
        "samples/wildfire/wildfire.trc",
        "samples/wildfire/system.bindings",
        "samples/sepsis/sepsis.case",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn instantiate_reproduces_shipped_instances() {
    for m in ["ethics", "justice", "system"] {
        let o = gsnkit(&[
            "instantiate",
            &format!("patterns/{m}.gsn"),
            "--bindings",
            &format!("samples/wildfire/{m}.bindings"),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let shipped =
            std::fs::read_to_string(root().join(format!("samples/wildfire/{m}.gsn"))).unwrap();
        assert_eq!(stdout(&o), shipped, "{m}");
        assert!(stderr(&o).starts_with("remaining placeholders: 0,"));
    }
}

#[test]
fn instantiate_names_the_wildfire_system() {
    let o = gsnkit(&[
        "instantiate",
        "patterns/system.gsn",
        "--bindings",
        "samples/wildfire/system.bindings",
    ]);
    let doc = parse(&stdout(&o), "out.gsn").document;
    let g0 = doc.modules[0]
        .graph
        .nodes()
        .iter()
        .find(|n| n.id.as_str() == "G0")
        .unwrap()
        .statement
        .clone();
    assert!(g0.contains("Wildfire Alert System"), "{g0}");
}

#[test]
fn instantiate_writes_out_file_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("system.gsn");
    let o = gsnkit(&[
        "instantiate",
        "patterns/system.gsn",
        "--bindings",
        "samples/wildfire/system.bindings",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "remaining placeholders: 0, undeveloped nodes: 1\n"
    );
    let check = gsnkit(&["check", out.to_str().unwrap()]);
    assert_eq!(code(&check), 0, "{}", stdout(&check));
}

#[test]
fn instantiate_identity_equals_canonical_input() {
    let src = "module p {\n    goal   G \"g\"\n  solution Sn \"e\"\n  G -> Sn : supported_by\n}\n";
    let (_d, p) = temp("p.gsn", src);
    let (_e, b) = temp("none.bindings", "");
    let o = gsnkit(&["instantiate", &p, "--bindings", &b]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let fmt = gsnkit(&["fmt", &p]);
    assert_eq!(
        stdout(&o).replacen("instance p", "module p", 1),
        stdout(&fmt)
    );
}

#[test]
fn instantiate_rejects_out_of_range_count() {
    let (_d, b) = temp(
        "bad.bindings",
        "role \"AI System (AIS)\" = \"X\"\ncount S2 -> G9 = 0\n",
    );
    let o = gsnkit(&["instantiate", "patterns/system.gsn", "--bindings", &b]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("cardinality"), "{}", stderr(&o));
    assert_eq!(stdout(&o), "");
}

#[test]
fn instantiate_names_unbound_role() {
    let (_d, b) = temp("none.bindings", "");
    let o = gsnkit(&["instantiate", "patterns/system.gsn", "--bindings", &b]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("role `"), "{}", stderr(&o));
}

#[test]
fn trace_wildfire_coverage() {
    let o = gsnkit(&["trace", "samples/wildfire/wildfire.case"]);
    assert_eq!(code(&o), 0);
    assert!(
        stdout(&o).starts_with("hazards 2/2, requirements 4/4\n"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn trace_impact_of_sole_evidence() {
    let o = gsnkit(&[
        "trace",
        "samples/wildfire/wildfire.case",
        "--impact",
        "EV-ER2",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v["impact"]["affected_requirements"],
        serde_json::json!(["REQ-SAFE-ER-2"])
    );
    assert_eq!(v["impact"]["affected_hazards"], serde_json::json!([]));
    assert_eq!(v["coverage_after"]["hazards"]["covered"], 2);
}

#[test]
fn trace_unknown_evidence_fails() {
    let o = gsnkit(&[
        "trace",
        "samples/wildfire/wildfire.trc",
        "--impact",
        "EV-NONE",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn trace_empty_file() {
    let (_d, p) = temp("empty.trc", "");
    let o = gsnkit(&["trace", &p]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "hazards 0/0, requirements 0/0\nfully covered: yes\n"
    );
}

#[test]
fn trace_strict_sepsis() {
    let o = gsnkit(&[
        "trace",
        "samples/sepsis/sepsis.case",
        "--strict",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let verdict = |ev: &str| {
        v["strict_checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["evidence"] == ev)
            .unwrap()["passed"]
            .clone()
    };
    assert_eq!(verdict("EV-MODIFIED"), true);
    assert_eq!(verdict("EV-ORIGINAL"), false);
}

#[test]
fn export_justice_dot_shapes_strategies() {
    let o = gsnkit(&["export", "patterns/justice.gsn", "--format", "dot"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let strategies: Vec<&str> = text
        .lines()
        .filter(|l| l.contains("shape=parallelogram"))
        .collect();
    assert_eq!(strategies.len(), 2, "{text}");
    assert!(
        strategies.iter().any(|l| l.contains("JA1"))
            && strategies.iter().any(|l| l.contains("JA2"))
    );
}

#[test]
fn export_empty_module_json() {
    let (_d, p) = temp("e.gsn", "module empty {\n}\n");
    let o = gsnkit(&["export", &p, "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["nodes", "edges", "choice_groups", "acps", "public"] {
        assert_eq!(v["modules"][0][key], serde_json::json!([]));
    }
}

#[test]
fn export_json_reimports() {
    let o = gsnkit(&["export", "patterns/system.gsn", "--format", "json"]);
    let back = from_json(&stdout(&o)).unwrap();
    let src = std::fs::read_to_string(root().join("patterns/system.gsn")).unwrap();
    assert_eq!(back, parse(&src, "system.gsn").document);
}

#[test]
fn export_invalid_input_fails() {
    let (_d, p) = temp("bad.gsn", BAD);
    let o = gsnkit(&["export", &p, "--format", "dot"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "");
}

#[test]
fn fmt_check_lists_non_canonical_without_touching_it() {
    let src = "module m {\n      goal G \"g\"\n}\n";
    let (_d, p) = temp("m.gsn", src);
    let o = gsnkit(&["fmt", "--check", &p, "patterns/justice.gsn"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), format!("{p}\n"));
    assert_eq!(std::fs::read_to_string(&p).unwrap(), src);
}

#[test]
fn fmt_several_files_needs_check() {
    let o = gsnkit(&["fmt", "patterns/justice.gsn", "patterns/system.gsn"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn arch_check_and_compose() {
    let o = gsnkit(&["arch-check", "samples/wildfire/wildfire.case"]);
    assert_eq!((code(&o), stdout(&o)), (0, "shape ok: yes\n".to_string()));
    let c = gsnkit(&[
        "compose",
        "samples/wildfire/wildfire.case",
        "--format",
        "json",
    ]);
    assert_eq!(code(&c), 0);
    serde_json::from_str::<serde_json::Value>(&stdout(&c)).unwrap();
}

#[test]
fn catalog_lists_every_entry() {
    let o = gsnkit(&["catalog", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v.as_array().unwrap().len(),
        gsnkit_core::library::catalog().len()
    );
}

#[test]
fn color_never_reaches_pipes() {
    let (_d, p) = temp("bad.gsn", BAD);
    let o = Command::new(env!("CARGO_BIN_EXE_gsnkit"))
        .args(["check", &p])
        .env_remove("NO_COLOR")
        .output()
        .unwrap();
    assert!(!stdout(&o).contains('\x1b'));
}

//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};

use gsnkit_core::composer::{check_architecture, compose};
use gsnkit_core::dsl::{format, parse, serialize};
use gsnkit_core::library::{self, check_expected, Loaded, LoadedCase, FILES};
use gsnkit_core::pattern::instantiate;
use gsnkit_core::trace::{coverage, impact, strict_checks};
use gsnkit_core::validator::{validate_graph, CONSEQUENTIAL};
use gsnkit_core::{ArgumentGraph, EdgeKind, NodeId};
use gsnkit_testkit::{document, expansion, impact as oracle, mutate, pattern, runner, trace};
use proptest::prelude::*;
use proptest::sample::Index;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestCaseError;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pattern_graph(name: &str) -> Result<ArgumentGraph, String> {
    match library::load(name).map_err(|e| e.to_string())? {
        Loaded::Pattern(m) => Ok(m.graph),
        Loaded::Case(_) => Err(format!("{name} is a case")),
    }
}

fn case(name: &str) -> Result<LoadedCase, String> {
    match library::load(name).map_err(|e| e.to_string())? {
        Loaded::Case(c) => Ok(c),
        Loaded::Pattern(_) => Err(format!("{name} is a pattern")),
    }
}

fn errors(g: &ArgumentGraph) -> usize {
    validate_graph(g).iter().filter(|d| d.is_error()).count()
}

fn statement<'a>(g: &'a ArgumentGraph, id: &str) -> Result<&'a str, String> {
    g.node(&NodeId::new(id).map_err(|e| e.to_string())?)
        .map(|n| n.statement.as_str())
        .ok_or_else(|| format!("{} lacks {id}", g.module_name()))
}

fn has_ids(g: &ArgumentGraph, ids: &[&str]) -> Result<(), String> {
    for id in ids {
        statement(g, id)?;
    }
    Ok(())
}

fn golden_patterns() -> Verdict {
    let mut checked = 0;
    for e in library::catalog().iter().filter(|e| !e.is_case()) {
        let loaded = library::load(e.name).map_err(|err| format!("{}: {err}", e.name))?;
        let g = loaded.graph();
        ensure(errors(&g) == 0, || {
            format!("{} has validation errors", e.name)
        })?;
        let missing = check_expected(&e.expected, &loaded);
        ensure(missing.is_empty(), || format!("{}: {missing:?}", e.name))?;
        checked += 1;
    }

    let j = pattern_graph("justice")?;
    has_ids(&j, &["JA1", "JA2", "JG3", "JG4", "JG5"])?;
    let root =
        gsnkit_core::composer::module_root(&j).map_err(|r| format!("justice roots {r:?}"))?;
    let text = statement(&j, root.as_str())?;
    ensure(
        text.starts_with("distribution of benefit, tolerable residual risk"),
        || format!("justice root: {text}"),
    )?;

    let s = pattern_graph("system")?;
    has_ids(
        &s,
        &[
            "G0", "G1", "G3", "G7", "G9", "S3", "J1", "C1", "C2", "C3", "C4",
        ],
    )?;
    ensure(
        statement(&s, "G0")?.contains("sufficiently safe throughout its entire operational life"),
        || "system G0 statement".into(),
    )?;
    ensure(s.acps().len() >= 2, || {
        format!("system has {} ACPs", s.acps().len())
    })?;
    ensure(
        s.acps()
            .iter()
            .any(|a| a.edge.source.as_str() == "G3" && a.edge.target.as_str() == "C2"),
        || "no ACP on G3 -> C2".into(),
    )?;

    let a = pattern_graph("amlas_scoping")?;
    has_ids(&a, &["G3.1", "G3.2"])?;
    ensure(
        statement(&a, "G3.1")?.contains("satisfies its allocated system safety requirements"),
        || "amlas G3.1 statement".into(),
    )?;
    let stages = a
        .edges()
        .iter()
        .filter(|e| e.kind == EdgeKind::SupportedBy && e.source.as_str() == "S3.1")
        .count();
    ensure(stages == 6, || format!("{stages} stage sub-roots"))?;

    let p = pattern_graph("gpai")?;
    has_ids(&p, &["GPG1", "GPC3", "GPC5"])?;
    ensure(
        statement(&p, "GPG1")?.contains("GPAI capabilities do not cause unacceptable outcomes"),
        || "gpai GPG1 statement".into(),
    )?;
    Ok(format!(
        "{checked} patterns, 0 errors, all named elements present"
    ))
}

fn architecture() -> Verdict {
    let c = case("wildfire_case")?;
    let r = check_architecture(&c.archive);
    ensure(r.shape_ok, || format!("shipped case: {:?}", r.findings))?;
    let codes = |a| -> Vec<String> {
        check_architecture(a)
            .findings
            .into_iter()
            .map(|d| d.code)
            .collect()
    };
    let removed = c
        .archive
        .without_module("system")
        .map_err(|e| e.to_string())?;
    let dup = c
        .archive
        .duplicate_module("ethics", "ethics_copy")
        .map_err(|e| e.to_string())?;
    let (a2, a1) = (codes(&removed), codes(&dup));
    ensure(a2 == ["A2"] && a1 == ["A1"], || {
        format!("without system {a2:?}, duplicated ethics {a1:?}")
    })?;
    Ok("shape ok; without system [A2]; duplicated ethics [A1]".into())
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn round_trip() -> Verdict {
    let max_nodes = Cell::new(0);
    runner(1000)
        .run(&document::document(), |doc| {
            max_nodes.set(max_nodes.get().max(document::node_count(&doc)));
            let text = serialize(&doc).map_err(|e| fail(e.to_string()))?;
            let out = parse(&text, "gen.gsn");
            prop_assert!(out.diagnostics.is_empty(), "{:?}", out.diagnostics);
            prop_assert_eq!(&out.document, &doc);
            let once = format(&text, "gen.gsn").map_err(|d| fail(format!("{d:?}")))?;
            prop_assert_eq!(&once, &text);
            prop_assert_eq!(
                format(&once, "gen.gsn").map_err(|d| fail(format!("{d:?}")))?,
                once
            );
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let max_nodes = max_nodes.get();
    ensure(max_nodes <= document::MAX_NODES, || {
        format!("{max_nodes} nodes generated")
    })?;
    Ok(format!("1000 documents, largest {max_nodes} nodes"))
}

fn mutation_suite() -> Verdict {
    let names = [
        "big_top",
        "ethics",
        "justice",
        "system",
        "amlas_scoping",
        "gpai",
    ];
    let patterns = names
        .iter()
        .map(|n| pattern_graph(n))
        .collect::<Result<Vec<_>, _>>()?;
    let mut r = runner(1);
    let picks = (any::<Index>(), any::<Index>(), any::<Index>());
    let mut detected: BTreeMap<&str, usize> = BTreeMap::new();
    let mut pairs = BTreeSet::new();
    for rule in mutate::RULES {
        for g in &patterns {
            for _ in 0..25 {
                let (a, b, c) = picks.new_tree(&mut r).map_err(|e| e.to_string())?.current();
                let Some(m) = mutate::mutate(g, rule, mutate::Picks(a, b, c)) else {
                    continue;
                };
                let extra = mutate::verdict(rule, &mutate::codes(&m))
                    .map_err(|e| format!("{}: {e}", g.module_name()))?;
                *detected.entry(rule).or_default() += 1;
                pairs.extend(extra.into_iter().map(|x| (rule.to_string(), x)));
            }
        }
    }
    let documented: BTreeSet<(String, String)> = CONSEQUENTIAL
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    ensure(pairs == documented, || {
        format!("consequential pairs {pairs:?}, documented {documented:?}")
    })?;
    ensure(detected.len() == mutate::RULES.len(), || {
        format!("detected {detected:?}")
    })?;
    let total: usize = detected.values().sum();
    Ok(format!(
        "{}/12 rules detected over {total} mutants",
        detected.len()
    ))
}

fn instantiation_oracle() -> Verdict {
    let nodes = Cell::new(0);
    runner(200)
        .run(&pattern::pattern_case(), |case| {
            prop_assert!(case.pattern.nodes().len() <= pattern::MAX_NODES);
            prop_assert_eq!(errors(&case.pattern), 0);
            let (instance, report) =
                instantiate(&case.pattern, &case.bindings).map_err(|e| fail(e.to_string()))?;
            let expected = expansion::expand(&case.pattern, &case.bindings);
            prop_assert_eq!(
                (instance.nodes().len(), instance.edges().len()),
                expansion::counts(&case.pattern, &case.bindings)
            );
            prop_assert_eq!(expansion::Expansion::of(&instance), expected);
            prop_assert_eq!(errors(&instance), 0);
            prop_assert!(report.fully_instantiated);
            nodes.set(nodes.get() + instance.nodes().len());
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "200 patterns, {} instance nodes matched",
        nodes.get()
    ))
}

fn impact_oracle() -> Verdict {
    let impacts = Cell::new(0);
    runner(200)
        .run(&trace::trace_case(), |case| {
            prop_assert!(trace::entities(&case.model) <= trace::MAX_ENTITIES);
            for e in &case.model.evidence {
                let got = impact(&case.model, Some(&case.case), &e.id)
                    .map_err(|e| fail(e.to_string()))?;
                let want = oracle::expected(&case.model, Some(&case.case), &e.id);
                prop_assert_eq!(&got.affected_requirements, &want.affected_requirements);
                prop_assert_eq!(
                    &got.affected_ml_requirements,
                    &want.affected_ml_requirements
                );
                prop_assert_eq!(&got.affected_hazards, &want.affected_hazards);
                prop_assert_eq!(&got.challenged_claims, &want.challenged_claims);
                impacts.set(impacts.get() + 1);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "200 models, {} impacts equal to recomputation",
        impacts.get()
    ))
}

fn wildfire_trace() -> Verdict {
    let c = case("wildfire_case")?;
    let m = c.trace.ok_or("wildfire case has no trace")?;
    let qty: Vec<(f64, &str)> = m
        .requirements
        .iter()
        .flat_map(|r| r.quantities.iter().map(|q| (q.value, q.unit.as_str())))
        .collect();
    ensure(m.requirements.len() == 4, || {
        format!("{} requirements", m.requirements.len())
    })?;
    ensure(
        qty == [(200.0, "m"), (3.0, "h"), (95.0, "%"), (52.0, "per_month")],
        || format!("quantities {qty:?}"),
    )?;
    let r = coverage(&m).map_err(|e| e.to_string())?;
    ensure(
        (
            r.hazards.covered,
            r.hazards.total,
            r.requirements.covered,
            r.requirements.total,
        ) == (2, 2, 4, 4),
        || format!("coverage {r}"),
    )?;
    let (g, _) = compose(&c.archive);
    let i = impact(&m, Some(&g), "EV-ER2").map_err(|e| e.to_string())?;
    ensure(i.affected_requirements == ["REQ-SAFE-ER-2"], || {
        format!("affected {:?}", i.affected_requirements)
    })?;
    let after = coverage(&i.model).map_err(|e| e.to_string())?;
    let h1: BTreeSet<&str> = i
        .model
        .requirements
        .iter()
        .filter(|r| {
            r.mitigates.iter().any(|h| h == "H1") && !after.requirements.uncovered.contains(&r.id)
        })
        .map(|r| r.id.as_str())
        .collect();
    ensure(
        h1 == BTreeSet::from(["REQ-SAFE-ER-1", "REQ-SAFE-ER-3"]),
        || format!("H1 covered by {h1:?}"),
    )?;
    ensure(
        !after.hazards.uncovered.contains(&"H1".to_string())
            && !after.hazards_without_evidence.contains(&"H1".into()),
        || "H1 lost coverage".into(),
    )?;
    Ok(
        "4 quantities, 2/2 hazards, 4/4 requirements; without EV-ER2 H1 covered by ER-1, ER-3"
            .into(),
    )
}

fn sepsis_trace() -> Verdict {
    let m = case("sepsis_trace")?
        .trace
        .ok_or("sepsis case has no trace")?;
    for (id, want) in [
        ("EV-CLINICIAN", [97.0, 3.0]),
        ("EV-ORIGINAL", [65.0, 35.0]),
        ("EV-MODIFIED", [92.0, 8.0]),
    ] {
        let got: Vec<f64> = m
            .evidence_item(id)
            .ok_or_else(|| format!("missing {id}"))?
            .measured
            .iter()
            .filter(|x| x.unit.as_deref() == Some("%"))
            .map(|x| x.value)
            .collect();
        ensure(got == want, || format!("{id} measured {got:?}"))?;
    }
    let checks = strict_checks(&m);
    let verdict = |id: &str| {
        checks
            .iter()
            .find(|c| c.evidence == id && c.name == "large_dose_change")
            .map(|c| c.passed)
    };
    ensure(
        verdict("EV-MODIFIED") == Some(true) && verdict("EV-ORIGINAL") == Some(false),
        || {
            format!(
                "modified {:?}, original {:?}",
                verdict("EV-MODIFIED"),
                verdict("EV-ORIGINAL")
            )
        },
    )?;
    Ok("97/3, 65/35, 92/8 measured; modified 8% accepted, original 35% rejected".into())
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

#[derive(PartialEq)]
struct Run {
    stdout: Vec<u8>,
    stderr: Vec<u8>,
    code: Option<i32>,
    written: Option<Vec<u8>>,
}

fn run(args: &[String], out: Option<&Path>) -> Result<Run, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gsnkit"));
    cmd.args(args).current_dir(root());
    if let Some(p) = out {
        cmd.arg("--out").arg(p);
    }
    let o = cmd.output().map_err(|e| e.to_string())?;
    let written = out
        .map(std::fs::read)
        .transpose()
        .map_err(|e| e.to_string())?;
    Ok(Run {
        stdout: o.stdout,
        stderr: o.stderr,
        code: o.status.code(),
        written,
    })
}

fn commands() -> Result<Vec<(Vec<String>, bool)>, String> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let gsn: Vec<&str> = FILES
        .iter()
        .map(|(p, _)| *p)
        .filter(|p| p.ends_with(".gsn"))
        .collect();
    let cases: Vec<&str> = FILES
        .iter()
        .map(|(p, _)| *p)
        .filter(|p| p.ends_with(".case"))
        .collect();
    let traces: Vec<&str> = FILES
        .iter()
        .map(|(p, _)| *p)
        .filter(|p| p.ends_with(".trc"))
        .collect();
    let all: Vec<&str> = FILES.iter().map(|(p, _)| *p).collect();
    let mut cmds = Vec::new();
    for f in ["text", "json"] {
        cmds.push((s(&[&["check", "--format", f][..], &all].concat()), false));
        cmds.push((s(&["catalog", "--format", f]), false));
    }
    for p in &all {
        cmds.push((s(&["check", p]), false));
    }
    cmds.push((s(&[&["fmt", "--check"][..], &gsn].concat()), false));
    for p in &gsn {
        cmds.push((s(&["fmt", p]), false));
        cmds.push((s(&["fmt", p]), true));
        for f in ["dot", "json"] {
            cmds.push((s(&["export", p, "--format", f]), false));
            cmds.push((s(&["export", p, "--format", f]), true));
        }
    }
    for m in ["ethics", "justice", "system"] {
        let args = s(&[
            "instantiate",
            &format!("patterns/{m}.gsn"),
            "--bindings",
            &format!("samples/wildfire/{m}.bindings"),
        ]);
        cmds.push((args.clone(), false));
        cmds.push((args, true));
    }
    for c in &cases {
        for f in ["text", "json", "dot"] {
            cmds.push((s(&["compose", c, "--format", f]), false));
            cmds.push((s(&["compose", c, "--format", f]), true));
        }
        for f in ["dot", "json"] {
            cmds.push((s(&["export", c, "--format", f]), false));
        }
        for f in ["text", "json"] {
            cmds.push((s(&["arch-check", c, "--format", f]), false));
            cmds.push((s(&["trace", c, "--format", f]), false));
            cmds.push((s(&["trace", c, "--strict", "--format", f]), false));
        }
    }
    for t in &traces {
        let text = library::file(t).ok_or("missing trace")?;
        let model = gsnkit_core::trace::parse_trace(text, t).map_err(|d| format!("{d:?}"))?;
        for f in ["text", "json"] {
            cmds.push((s(&["trace", t, "--format", f]), false));
            for e in &model.evidence {
                cmds.push((s(&["trace", t, "--impact", &e.id, "--format", f]), false));
            }
        }
        let manifest = cases
            .iter()
            .find(|c| Path::new(c).parent() == Path::new(t).parent())
            .ok_or("no manifest")?;
        for e in &model.evidence {
            cmds.push((s(&["trace", manifest, "--impact", &e.id]), false));
        }
    }
    Ok(cmds)
}

fn determinism() -> Verdict {
    let before: Vec<Vec<u8>> = FILES
        .iter()
        .map(|(p, _)| std::fs::read(root().join(p)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let dir = std::env::temp_dir().join(format!("gsnkit-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let cmds = commands()?;
    let mut failed = Vec::new();
    for (i, (args, to_file)) in cmds.iter().enumerate() {
        let out = |n: u8| to_file.then(|| dir.join(format!("{i}_{n}.out")));
        let (a, b) = (run(args, out(1).as_deref())?, run(args, out(2).as_deref())?);
        if a != b {
            failed.push(args.join(" "));
        }
        if a.code.is_none() || a.code == Some(2) {
            failed.push(format!("{} exited {:?}", args.join(" "), a.code));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    let after: Vec<Vec<u8>> = FILES
        .iter()
        .map(|(p, _)| std::fs::read(root().join(p)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(before == after, || "an input file changed".into())?;
    ensure(failed.is_empty(), || format!("differing runs: {failed:?}"))?;
    Ok(format!(
        "{} commands byte-identical across two runs",
        cmds.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("golden pattern conformance", golden_patterns),
        ("architecture check", architecture),
        ("parser round-trip", round_trip),
        ("validator mutation suite", mutation_suite),
        ("instantiation oracle", instantiation_oracle),
        ("impact-analysis oracle", impact_oracle),
        ("wildfire trace reproduction", wildfire_trace),
        ("sepsis trace sample", sepsis_trace),
        ("CLI determinism", determinism),
    ];
    let mut ok = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                ok = false;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

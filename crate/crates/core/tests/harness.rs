use std::collections::BTreeSet;

use dehnfill::harness::cli::run;
use dehnfill::harness::{
    fills_text, render_structured, render_table, run_check, run_checks, select, AssertionKind, Outcome, ParamRange,
    RunOptions, REGISTRY,
};
use dehnfill::tangles::{tabulated_fills, Section};

fn cli(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("dehnfill").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn small() -> RunOptions {
    RunOptions { p_range: Some(2..=4), ..RunOptions::default() }
}

#[test]
fn ids_are_unique_and_anchored() {
    let ids: BTreeSet<_> = REGISTRY.iter().map(|c| c.id).collect();
    assert_eq!(ids.len(), REGISTRY.len());
    for c in REGISTRY {
        assert!(!c.anchor.is_empty() && !c.summary.is_empty() && !c.kinds.is_empty(), "{}", c.id);
    }
}

#[test]
fn registry_covers_every_statement() {
    let anchors: Vec<&str> = REGISTRY.iter().map(|c| c.anchor).collect();
    for want in ["L2.1", "L2.2", "L2.5", "T2.6", "L3.1", "L3.2", "T3.6", "L4.1(1)", "L4.1(2)", "L4.1(3)", "L4.1(4)", "T4.2"] {
        assert!(anchors.contains(&want), "no check anchored at {want}");
    }
    for section in ["F2.1", "F3.1", "F4.1"] {
        assert!(anchors.contains(&section), "{section} has no transcription check");
    }
}

#[test]
fn every_tabulated_fill_meets_a_diagram_oracle() {
    let reports = run_checks(&select("all"), &small());
    let covered: BTreeSet<String> = reports
        .iter()
        .flat_map(|r| &r.records)
        .filter(|rec| rec.kind == AssertionKind::Oracle && rec.outcome == Outcome::Pass)
        .filter_map(|rec| rec.subject.clone())
        .collect();
    for section in [Section::Two, Section::Three, Section::Four] {
        for fills in tabulated_fills(section) {
            let key = fills_text(&fills);
            assert!(covered.contains(&key), "section {section} fill {key} has no passing oracle");
        }
    }
}

#[test]
fn all_checks_pass_on_small_range() {
    for r in run_checks(&select("all"), &small()) {
        assert!(r.passed(), "{}", render_table(std::slice::from_ref(&r)));
        assert!(!r.records.is_empty(), "{} recorded nothing", r.check);
    }
}

#[test]
fn selection() {
    let ids = |s: &str| select(s).iter().map(|c| c.id).collect::<Vec<_>>();
    assert_eq!(ids("L4.1"), ["L4.1(1)", "L4.1(2)", "L4.1(3)", "L4.1(4)"]);
    assert_eq!(ids("T2.6"), ["T2.6", "T2.6-k"]);
    assert_eq!(ids("L2.5-cabling"), ["L2.5-cabling"]);
    assert!(ids("L4").is_empty());
    assert_eq!(ids("all").len(), REGISTRY.len());
}

#[test]
fn one_outcome_group_per_parameter() {
    let spec = select("T2.6-k")[0];
    let r = run_check(spec, &RunOptions::default());
    let ParamRange::K(range) = &spec.range else { panic!("k range") };
    let ks: BTreeSet<i64> = r.records.iter().map(|x| x.param.unwrap().value).collect();
    assert_eq!(ks, range.clone().collect());
    let spec = select("L4.1(2)")[0];
    let r = run_check(spec, &RunOptions { p_range: Some(2..=10), ..RunOptions::default() });
    assert!(r.passed());
    let ps: BTreeSet<i64> = r.records.iter().map(|x| x.param.unwrap().value).collect();
    assert_eq!(ps, (2..=10).collect());
}

fn strip_timing(text: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
    for r in v["reports"].as_array_mut().unwrap() {
        r.as_object_mut().unwrap().remove("elapsed_ms");
    }
    v
}

#[test]
fn structured_reports_are_deterministic() {
    let specs = select("all");
    let a = render_structured(&run_checks(&specs, &small()));
    let b = render_structured(&run_checks(&specs, &small()));
    assert_eq!(strip_timing(&a), strip_timing(&b));
    let v = strip_timing(&a);
    assert_eq!(v["passed"], true);
    let rec = &v["reports"][0]["records"][0];
    for field in ["param", "kind", "assertion", "subject", "outcome"] {
        assert!(rec.get(field).is_some(), "record lacks {field}");
    }
    assert!(v["scope"].as_str().unwrap().contains("hyperbolicity"));
}

#[test]
fn failures_carry_witnesses() {
    let dir = std::env::temp_dir().join(format!("dehnfill-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/templates");
    for n in 2..=4 {
        let name = format!("section{n}.tmpl");
        let mut text = std::fs::read_to_string(src.join(&name)).unwrap();
        if n == 4 {
            text = text.replace("\"det\": \"6\"", "\"det\": \"7\"");
        }
        std::fs::write(dir.join(&name), text).unwrap();
    }
    let (code, out, _) = cli(&["verify", "--check", "F4.1", "--p", "2..3", "--data", dir.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("FAIL") && out.contains("S0=1/3"), "{out}");
}

#[test]
fn cli_examples() {
    assert_eq!(cli(&["distance", "inf", "-1/2"]), (0, "2\n".into(), String::new()));
    assert_eq!(cli(&["solve", "--anchor", "1:1", "--anchor", "1/3:1"]), (0, "0, 1/2\n".into(), String::new()));
    assert_eq!(cli(&["solve", "--anchor", "inf:1", "--anchor", "-1/2:1"]).1, "-1, 0\n");
    let (code, out, _) = cli(&["verify", "--check", "L4.1", "--p", "2..8"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("4 checks: 84 passed, 0 failed, 0 skipped\n"), "{out}");
}

#[test]
fn cli_covers_and_families() {
    let (code, out, _) = cli(&["dbc", "--expr", "T[1/3] + T[-1/5]"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("Q(3,-5)\n") && out.contains("montesinos-tangle [L2.2(2)]"), "{out}");
    let (code, out, _) = cli(&["family", "--section", "4", "--p", "3", "--fill", "S0=0"]);
    assert_eq!(code, 0);
    assert!(out.contains("cover: L(13,6)") && out.contains("h1: 13"), "{out}");
    let (code, out, _) = cli(&["family", "--section", "3", "--p", "2", "--fill", "S0=0", "--fill", "S1=inf"]);
    assert_eq!(code, 0);
    assert!(out.contains("cover: S1xS2 # RP3") && out.contains("h1: infinite"), "{out}");
}

#[test]
fn cli_det_reads_diagram_files() {
    let path = std::env::temp_dir().join(format!("dehnfill-det-{}.txt", std::process::id()));
    std::fs::write(&path, dehnfill::diagrams::two_bridge_diagram(7, 3).unwrap().to_string()).unwrap();
    let (code, out, err) = cli(&["det", "--diagram", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!((code, out.as_str()), (0, "7\n"), "{err}");
}

#[test]
fn cli_usage_errors() {
    for args in [
        &["distance", "x", "1"][..],
        &["distance", "1"],
        &["solve", "--anchor", "1"],
        &["family", "--section", "5", "--p", "2", "--fill", "S0=0"],
        &["family", "--section", "2", "--p", "2", "--fill", "S0=7"],
        &["verify", "--check", "nope"],
        &["verify", "--p", "5..2"],
        &["det", "--diagram", "/nonexistent/diagram"],
        &["bogus"],
    ] {
        let (code, out, err) = cli(args);
        assert_eq!(code, 2, "{args:?}: {out}");
        assert!(!err.is_empty(), "{args:?}");
    }
    assert_eq!(cli(&["--help"]).0, 0);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dehnfill");
    let out = std::process::Command::new(bin).args(["distance", "inf", "-1/2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, b"2\n");
    let out = std::process::Command::new(bin).args(["distance", "inf"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

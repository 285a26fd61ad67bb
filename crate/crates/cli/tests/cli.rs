use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hovey_cli::{load_scenario, run_scenario, verify_witnesses, write_report, Check};
use serde_json::Value;

fn hovey(args: &[&str], env: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hovey"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn unknown_check_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let s =
        write(dir.path(), "s.json", r#"{"name": "x", "algebra": "fixture:a2", "checks": [{"check": "frobnicate"}]}"#);
    let out = hovey(&["scenario", "run", &s], &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("frobnicate"));
}

#[test]
fn unresolved_references_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("class.json", r#"{"name": "x", "algebra": "fixture:a2", "checks": [{"check": "class-show", "class": "Q"}]}"#),
        (
            "shape.json",
            r#"{"name": "x", "algebra": "fixture:a2", "checks": [{"check": "quiver-pair", "shape": "loop", "pair": {"x": "all", "y": "injectives"}}]}"#,
        ),
        ("algebra.json", r#"{"name": "x", "algebra": "missing.json", "checks": []}"#),
        ("fixture.json", r#"{"name": "x", "algebra": "fixture:e8", "checks": []}"#),
    ] {
        let s = write(dir.path(), name, text);
        assert_eq!(hovey(&["scenario", "run", &s], &[]).status.code(), Some(3), "{name}");
    }
    assert_eq!(hovey(&["scenario", "run", "/nonexistent/s.json"], &[]).status.code(), Some(3));
}

#[test]
fn exit_codes_follow_the_verdict() {
    let pass =
        hovey(&["hovey", "verify", "--algebra", "fixture:a2", "--c", "all", "--w", "all", "--f", "injectives"], &[]);
    assert_eq!(pass.status.code(), Some(0));
    let fail =
        hovey(&["hovey", "verify", "--algebra", "fixture:a2", "--c", "all", "--w", "projectives", "--f", "all"], &[]);
    assert_eq!(fail.status.code(), Some(1));
    let undecided = hovey(
        &["hovey", "lift", "--algebra", "fixture:a2", "--c", "all", "--w", "all", "--f", "injectives"]
            .into_iter()
            .chain(["--side", "right", "--n-max", "1", "--cap", "0"])
            .collect::<Vec<_>>(),
        &[],
    );
    assert_eq!(undecided.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&undecided.stdout).contains("[INCONCLUSIVE]"));
}

#[test]
fn one_shot_report_is_written_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = hovey(
        &["hovey", "tower", "--algebra", "fixture:dual-numbers", "--c", "all", "--w", "projectives", "--f", "all"]
            .into_iter()
            .chain(["--n-max", "2", "--out", out.to_str().unwrap()])
            .collect::<Vec<_>>(),
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["schema"], "hovey-report/1");
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["checks"][0]["report"]["facts"]["stable_class_counts"], serde_json::json!([1, 1, 1]));
    let v = hovey(&["verify-witness", out.to_str().unwrap()], &[]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn tampered_witness_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = hovey(&["scenario", "run", "--out", out.to_str().unwrap(), "/dev/null"], &[]);
    assert_eq!(o.status.code(), Some(3));
    let s = write(
        dir.path(),
        "s.json",
        r#"{"name": "ext", "algebra": "fixture:dual-numbers", "checks": [{"check": "ext-agreement", "max_degree": 2}]}"#,
    );
    assert_eq!(hovey(&["scenario", "run", &s, "--out", out.to_str().unwrap()], &[]).status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"dim\": 1"));
    fs::write(&out, text.replacen("\"dim\": 1", "\"dim\": 2", 1)).unwrap();
    let summary = verify_witnesses(&out).unwrap();
    assert_eq!(summary.rejected.len(), 1);
    assert_eq!(hovey(&["verify-witness", out.to_str().unwrap()], &[]).status.code(), Some(1));
}

#[test]
fn scenario_output_path_is_relative_to_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(
        dir.path(),
        "s.json",
        r#"{"name": "u", "algebra": "fixture:a2", "universe": {"max_dim": 2}, "checks": [{"check": "universe"}], "output": "u.report.json"}"#,
    );
    assert_eq!(hovey(&["scenario", "run", &s], &[]).status.code(), Some(0));
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("u.report.json")).unwrap()).unwrap();
    assert_eq!(report["universe_size"], 3);
    assert_eq!(report["checks"][0]["report"]["facts"]["objects"].as_array().unwrap().len(), 3);
}

#[test]
fn cache_directory_reproduces_the_universe() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["universe", "enumerate", "--algebra", "fixture:truncated-3", "--max-dim", "3"];
    let first = hovey(&args, &[("HOVEY_CACHE_DIR", &cache)]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 1);
    let second = hovey(&args, &[("HOVEY_CACHE_DIR", &cache)]);
    let uncached = hovey(&args, &[]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, uncached.stdout);
}

#[test]
fn library_runs_declared_universe_and_class_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let u = hovey_core::Universe::enumerate(std::sync::Arc::new(hovey_core::fixtures::a2(2)), 2).unwrap();
    write(dir.path(), "u.json", &serde_json::to_string(&u.to_spec()).unwrap());
    let s = write(
        dir.path(),
        "s.json",
        r#"{
            "name": "declared",
            "algebra": "fixture:a2",
            "universe": {"declared": "u.json"},
            "classes": {"I": "injectives", "perpI": "left-ext-orthogonal-of:I", "both": "I & projectives"},
            "checks": [
                {"check": "class-show", "class": "perpI"},
                {"check": "class-show", "class": "both"},
                {"check": "class-show", "class": ["U0", "U2"]}
            ]
        }"#,
    );
    let scenario = load_scenario(Path::new(&s)).unwrap();
    assert!(matches!(scenario.checks[0], Check::ClassShow { .. }));
    let report = run_scenario(scenario, dir.path()).unwrap();
    assert!(report.verdict.is_pass());
    let members: Vec<Value> = report.checks.iter().map(|c| c.report.facts["members"].clone()).collect();
    assert_eq!(members[0], serde_json::json!(["U0", "U1", "U2"]));
    assert_eq!(members[1], serde_json::json!(["U2"]));
    assert_eq!(members[2], serde_json::json!(["U0", "U2"]));
    write_report(&report, &dir.path().join("r.json")).unwrap();
    assert!(verify_witnesses(&dir.path().join("r.json")).unwrap().all_verified());
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn archlens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_archlens"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn analyze_writes_artifacts_and_prints_the_table() {
    let out = tempfile::tempdir().unwrap();
    let o = archlens(&["analyze", arg(&fixture("corpus")), "--out", arg(out.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for f in ["ir.json", "graph.json", "context-map.mmd", "timeline.csv"] {
        assert!(out.path().join(f).is_file(), "{f} missing");
    }
    assert!(!out.path().join("services").exists());
    let text = stdout(&o);
    assert!(text.starts_with("Metric"));
    assert!(text.contains("S1. #μs               4\n"), "{text}");
    assert!(text.contains("D5. #MRDEs            1\n"), "{text}");
    // the unmatched shipping call is a warning
    assert!(stderr(&o).contains("unresolved call GET /api/v1/orders/*/history"));

    let csv = std::fs::read_to_string(out.path().join("timeline.csv")).unwrap();
    assert_eq!(csv, "version,s1,s2,d1,d2,d3,d4,d5\ncorpus,4,6,7,3,5,2,1\n");
}

#[test]
fn missing_path_exits_1() {
    let o = archlens(&["analyze", "/nonexistent/archlens"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("does not exist"));
}

#[test]
fn out_of_range_threshold_exits_2() {
    for flag in ["--name-sim", "--field-sim"] {
        let o = archlens(&["analyze", arg(&fixture("corpus")), flag, "2.0"]);
        assert_eq!(o.status.code(), Some(2), "{flag}");
    }
    let o = archlens(&["analyze", arg(&fixture("corpus")), "--name-sim", "-0.1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_profile_exits_2() {
    let o = archlens(&["analyze", arg(&fixture("corpus")), "--profile", "django"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown profile"));
}

#[test]
fn profile_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.toml");
    let o = archlens(&["analyze", arg(&fixture("corpus")), "--profile-file", arg(&missing)]);
    assert_eq!(o.status.code(), Some(1));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "name = [").unwrap();
    let o = archlens(&["analyze", arg(&fixture("corpus")), "--profile-file", arg(&bad)]);
    assert_eq!(o.status.code(), Some(2));

    let good = dir.path().join("good.toml");
    std::fs::write(&good, archlens_core::LanguageProfile::spring_java().to_toml()).unwrap();
    let out = dir.path().join("out");
    let o = archlens(&[
        "analyze",
        arg(&fixture("corpus")),
        "--profile-file",
        arg(&good),
        "--out",
        arg(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn discover_only_prints_manifests() {
    let o = archlens(&["analyze", arg(&fixture("corpus")), "--discover-only"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let names: Vec<&str> = text.lines().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(names, ["catalog-svc", "inventory-svc", "order-svc", "shipping-svc"]);
    assert!(text.lines().all(|l| l.split('\t').count() == 3 && l.ends_with("\tBOTH")));
}

#[test]
fn report_unmatched_lists_unresolved_calls() {
    let out = tempfile::tempdir().unwrap();
    let o = archlens(&[
        "analyze",
        arg(&fixture("corpus")),
        "--out",
        arg(out.path()),
        "--report-unmatched",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("shipping-svc\tGET\t/api/v1/orders/*/history\n"));
}

#[test]
fn per_service_and_coupling_threshold() {
    let out = tempfile::tempdir().unwrap();
    let o = archlens(&[
        "analyze",
        arg(&fixture("demo")),
        "--out",
        arg(out.path()),
        "--per-service",
        "--coupling-threshold",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for ms in ["ms-1", "ms-2", "ms-3", "ms-4"] {
        let text = std::fs::read_to_string(out.path().join("services").join(format!("{ms}.mmd"))).unwrap();
        assert!(text.starts_with("classDiagram\n"));
    }
    let graph: Value = serde_json::from_str(&std::fs::read_to_string(out.path().join("graph.json")).unwrap()).unwrap();
    assert_eq!(graph["coupling_threshold"], 0);
    let alerted: Vec<&str> = graph["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|n| n["coupling_alert"] == true)
        .map(|n| n["id"].as_str().unwrap())
        .collect();
    assert_eq!(alerted, ["ms-1", "ms-3", "ms-4"]);
}

#[test]
fn strict_response_only_changes_d2() {
    let out = tempfile::tempdir().unwrap();
    let o = archlens(&[
        "analyze",
        arg(&fixture("corpus")),
        "--out",
        arg(out.path()),
        "--strict-response-only",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("D2. #TDEs             2\n"));
}

#[test]
fn label_overrides_the_version_label() {
    let out = tempfile::tempdir().unwrap();
    let o = archlens(&["analyze", arg(&fixture("corpus")), "--out", arg(out.path()), "--label", "r7"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(out.path().join("timeline.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("r7,"));
}

#[test]
fn evolve_three_versions() {
    let out = tempfile::tempdir().unwrap();
    let v1 = format!("v1={}", arg(&fixture("versions/v1")));
    let v2 = format!("v2={}", arg(&fixture("versions/v2")));
    let v3 = format!("v3={}", arg(&fixture("corpus")));
    let o = archlens(&["evolve", &v1, &v2, &v3, "--out", arg(out.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let csv = std::fs::read_to_string(out.path().join("timeline.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0], "version,s1,s2,d1,d2,d3,d4,d5");
    let s1: Vec<&str> = rows[1..].iter().map(|r| r.split(',').nth(1).unwrap()).collect();
    assert_eq!(s1, ["2", "3", "4"]);
    assert_eq!(rows[3], "v3,4,6,7,3,5,2,1");

    for label in ["v1", "v2", "v3"] {
        assert!(out.path().join(label).join("ir.json").is_file());
    }
    let text = stdout(&o);
    assert!(text.contains("Delta"));
    assert!(text.contains("v1 -> v2"));
    assert!(text.contains("v2 -> v3"));
}

#[test]
fn evolve_single_version() {
    let out = tempfile::tempdir().unwrap();
    let spec = format!("only={}", arg(&fixture("corpus")));
    let o = archlens(&["evolve", &spec, "--out", arg(out.path())]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(out.path().join("timeline.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(!stdout(&o).contains("Delta"));
}

#[test]
fn evolve_rejects_duplicate_labels() {
    let out = tempfile::tempdir().unwrap();
    let a = format!("x={}", arg(&fixture("corpus")));
    let b = format!("x={}", arg(&fixture("demo")));
    let o = archlens(&["evolve", &a, &b, "--out", arg(out.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("more than once"));
    assert!(!out.path().join("timeline.csv").exists());
}

#[test]
fn evolve_rejects_malformed_specs() {
    let o = archlens(&["evolve", "no-equals-sign"]);
    assert_eq!(o.status.code(), Some(2));
    let o = archlens(&["evolve"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn evolve_missing_version_dir_exits_1() {
    let out = tempfile::tempdir().unwrap();
    let o = archlens(&["evolve", "a=/nonexistent/archlens", "--out", arg(out.path())]);
    assert_eq!(o.status.code(), Some(1));
}

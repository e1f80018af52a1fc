use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use routeplan_core::data::demo_scenario;

fn demo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/missouri-illinois-demo")
}

fn routeplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_routeplan")).args(args).output().unwrap()
}

fn run_scenario(scenario: &Path, extra: &[&str]) -> Output {
    let root = demo_root();
    let mut args = vec!["--data-root", root.to_str().unwrap(), "--scenario", scenario.to_str().unwrap()];
    args.extend_from_slice(extra);
    routeplan(&args)
}

fn write_scenario(dir: &Path, scenario: &routeplan_core::model::Scenario) -> PathBuf {
    let path = dir.join("scenario.json");
    std::fs::write(&path, serde_json::to_string(scenario).unwrap()).unwrap();
    path
}

#[test]
fn demo_both_matches_golden() {
    let out = run_scenario(&demo_root().join("scenario.json"), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(out.stdout, include_bytes!("golden/demo_both.json"));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["report"]["spend"]["total"], "978.70");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run_scenario(&demo_root().join("scenario.json"), &["--model", "max_flow", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap();
    assert_eq!(v[0]["model"], "max_flow");
    assert_eq!(v[0]["report"]["total_transported"], 8);
}

#[test]
fn unknown_state_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = demo_scenario();
    s.destination_state = "ZZ".into();
    let out = run_scenario(&write_scenario(dir.path(), &s), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ZZ"));
}

#[test]
fn malformed_scenario_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{").unwrap();
    assert_eq!(run_scenario(&path, &[]).status.code(), Some(1));
    assert_eq!(run_scenario(&dir.path().join("missing.json"), &[]).status.code(), Some(1));
}

#[test]
fn zero_clinic_capacity_min_cost_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = demo_scenario();
    s.clinic_capacity_overrides = Some(s.open_clinic_ids.iter().map(|c| (c.clone(), 0)).collect());
    let out = run_scenario(&write_scenario(dir.path(), &s), &["--model", "min_cost"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["status"], "infeasible");
    assert_eq!(v[0]["diagnostic"]["max_flow"], 0);
    assert_eq!(v[0]["diagnostic"]["demand_total"], 8);
}

#[test]
fn both_skips_min_cost_when_demand_unmet() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = demo_scenario();
    s.clinic_capacity_overrides = Some(s.open_clinic_ids.iter().map(|c| (c.clone(), 1)).collect());
    let out = run_scenario(&write_scenario(dir.path(), &s), &[]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["report"]["total_transported"], 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipping min_cost"));
}

#[test]
fn table_format_lists_report_fields() {
    let out = run_scenario(&demo_root().join("scenario.json"), &["--model", "max_flow", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for needle in ["== max_flow (optimal)", "total_transported", "spend.total", "988.30", "excess.ga_seats_unused", "per_clinic[IL-CHI-01]"] {
        assert!(text.contains(needle), "missing {needle}");
    }
}

#[test]
fn fixture_and_dump_lp() {
    let dir = tempfile::tempdir().unwrap();
    let out = routeplan(&["fixture", "--out", dir.path().to_str().unwrap(), "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let root = dir.path().to_str().unwrap();
    let scenario = dir.path().join("scenario.json");
    let out = routeplan(&["dump-lp", "--data-root", root, "--scenario", scenario.to_str().unwrap(), "--model", "min_cost"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("\\ integer program\nMinimize\n"));
    assert!(text.contains("Subject To") && text.trim_end().ends_with("End"));

    let out = run_scenario(&scenario, &["--model", "max_flow"]);
    // The generated scenario refers to its own fixture, not the demo data.
    assert_eq!(out.status.code(), Some(1));
    let out = routeplan(&["--data-root", root, "--scenario", scenario.to_str().unwrap(), "--model", "max_flow"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn against_external_server() {
    let rt = tokio::runtime::Runtime::new().unwrap();
    let addr = rt.block_on(async {
        let state = routeplan_service::AppState::new(routeplan_core::data::demo_fixture(), Default::default());
        let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
        let addr = listener.local_addr().unwrap();
        tokio::spawn(routeplan_service::serve(listener, state, std::future::pending()));
        addr
    });
    let scenario = demo_root().join("scenario.json");
    let out = routeplan(&["--server", &format!("http://{addr}"), "--scenario", scenario.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(out.stdout, include_bytes!("golden/demo_both.json"));
}

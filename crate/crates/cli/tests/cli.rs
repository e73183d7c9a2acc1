//! End-to-end tests of the command-line interface: exit-code contract,
//! output schemas, config echo, and reproducibility of bare invocations.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multigossip"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json_result(out: &Output) -> serde_json::Value {
    let doc: serde_json::Value =
        serde_json::from_str(&stdout_str(out)).expect("stdout is a JSON document");
    doc
}

#[test]
fn gen_writes_loadable_edge_list() {
    let dir = std::env::temp_dir().join("multigossip-cli-test-gen");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k8.edges");
    let out = run(&[
        "gen",
        "--family",
        "complete",
        "--n",
        "8",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("n 8"));
    // K_8 has 28 edges plus header and config comments
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 29);
    // the config echo names the seed so the artifact is re-runnable
    assert!(text.lines().any(|l| l.starts_with("# config:") && l.contains("\"seed\"")));
}

fn write_k8(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("k8.edges");
    let out = run(&[
        "gen",
        "--family",
        "complete",
        "--n",
        "8",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    path
}

#[test]
fn expansion_reports_exact_clique_value() {
    let dir = std::env::temp_dir().join("multigossip-cli-test-exp");
    std::fs::create_dir_all(&dir).unwrap();
    let path = write_k8(&dir);
    let out = run(&[
        "expansion",
        "--graph",
        path.to_str().unwrap(),
        "--alpha",
        "1/4",
        "--mode",
        "exact",
    ]);
    assert!(out.status.success());
    let doc = json_result(&out);
    assert_eq!(doc["result"]["phi_min"], "3/1");
    assert_eq!(doc["result"]["method"], "exact");
    assert_eq!(doc["schema"], "multigossip/expansion/v1");

    // with a claim the verdict appears
    let out = run(&[
        "expansion",
        "--graph",
        path.to_str().unwrap(),
        "--alpha",
        "1/4",
        "--phi",
        "3",
        "--mode",
        "exact",
    ]);
    let doc = json_result(&out);
    assert_eq!(doc["result"]["verdict"], "CERTIFIED");
}

#[test]
fn expansion_warns_about_impossible_regime() {
    let dir = std::env::temp_dir().join("multigossip-cli-test-warn");
    std::fs::create_dir_all(&dir).unwrap();
    let path = write_k8(&dir);
    let out = run(&[
        "expansion",
        "--graph",
        path.to_str().unwrap(),
        "--alpha",
        "0.3",
        "--phi",
        "3",
    ]);
    assert!(out.status.success());
    let doc = json_result(&out);
    let warnings = doc["warnings"].as_array().unwrap();
    assert!(warnings
        .iter()
        .any(|w| w.as_str().unwrap().contains("IMPOSSIBLE regime")));
}

#[test]
fn missing_graph_is_domain_error_exit_1() {
    let out = run(&[
        "simulate",
        "--graph",
        "/tmp/definitely-missing.edges",
        "--mode",
        "push",
        "--k",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error:"));
    assert!(err.contains("definitely-missing.edges"));
}

#[test]
fn zero_k_is_usage_error_exit_2() {
    let dir = std::env::temp_dir().join("multigossip-cli-test-usage");
    std::fs::create_dir_all(&dir).unwrap();
    let path = write_k8(&dir);
    let out = run(&[
        "simulate",
        "--graph",
        path.to_str().unwrap(),
        "--mode",
        "push",
        "--k",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_usage_error_exit_2() {
    let out = run(&["diameter", "--graph", "x", "--definitely-not-a-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_exceeded_is_domain_error_exit_1() {
    let dir = std::env::temp_dir().join("multigossip-cli-test-budget");
    std::fs::create_dir_all(&dir).unwrap();
    let path = write_k8(&dir);
    let out = run(&[
        "expansion",
        "--graph",
        path.to_str().unwrap(),
        "--alpha",
        "1/2",
        "--mode",
        "exact",
        "--budget",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("budget"));
}

#[test]
fn simulate_trace_accounts_for_all_nodes() {
    let dir = std::env::temp_dir().join("multigossip-cli-test-sim");
    std::fs::create_dir_all(&dir).unwrap();
    let path = write_k8(&dir);
    let out = run(&[
        "simulate",
        "--graph",
        path.to_str().unwrap(),
        "--mode",
        "push-pull",
        "--k",
        "2",
    ]);
    let doc = json_result(&out);
    assert_eq!(doc["result"]["final_informed"], 8);
    assert_eq!(doc["result"]["n"], 8);
}

#[test]
fn bare_invocations_are_reproducible() {
    let dir = std::env::temp_dir().join("multigossip-cli-test-repro");
    std::fs::create_dir_all(&dir).unwrap();
    let path = write_k8(&dir);
    let args = [
        "simulate",
        "--graph",
        path.to_str().unwrap(),
        "--mode",
        "push-pull",
        "--k",
        "2",
        "--trials",
        "20",
    ];
    let a = stdout_str(&run(&args));
    let b = stdout_str(&run(&args));
    assert_eq!(a, b, "no wall-clock randomness allowed");
}

#[test]
fn experiment_plan_echo_round_trips() {
    let dir = std::env::temp_dir().join("multigossip-cli-test-exp-plan");
    std::fs::create_dir_all(&dir).unwrap();
    let plan_path = dir.join("plan.json");
    std::fs::write(
        &plan_path,
        r#"{"family":"complete","n":[16],"k":[1,2],"mode":"push_pull","trials":25,"master_seed":5}"#,
    )
    .unwrap();
    let out = run(&["experiment", "--plan", plan_path.to_str().unwrap()]);
    assert!(out.status.success());
    let doc = json_result(&out);
    // the echoed plan is itself a valid plan document: feed it back
    let echo_path = dir.join("plan-echo.json");
    std::fs::write(
        &echo_path,
        serde_json::to_string(&doc["result"]["plan"]).unwrap(),
    )
    .unwrap();
    let out2 = run(&["experiment", "--plan", echo_path.to_str().unwrap()]);
    assert!(out2.status.success());
    let doc2 = json_result(&out2);
    assert_eq!(doc["result"], doc2["result"]);
}

#[test]
fn audit_emits_bucket_table_csv() {
    let dir = std::env::temp_dir().join("multigossip-cli-test-audit");
    std::fs::create_dir_all(&dir).unwrap();
    let path = write_k8(&dir);
    let out = run(&[
        "audit",
        "--graph",
        path.to_str().unwrap(),
        "--k",
        "2",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let header = text
        .lines()
        .find(|l| !l.starts_with('#'))
        .expect("has header");
    assert_eq!(header, "t,i,d_i,bucket_size,volume,in_good_set,regime,s_t");
}

#[test]
fn symmetry_and_tailbound_smoke() {
    let dir = std::env::temp_dir().join("multigossip-cli-test-sym");
    std::fs::create_dir_all(&dir).unwrap();
    let path = write_k8(&dir);
    let out = run(&[
        "symmetry",
        "--graph",
        path.to_str().unwrap(),
        "--s",
        "0",
        "--t",
        "5",
        "--k",
        "2",
        "--trials",
        "300",
    ]);
    assert!(out.status.success());
    let doc = json_result(&out);
    assert_eq!(doc["result"]["consistent"], true);

    let out = run(&["tailbound", "--n", "10", "--p", "0.5", "--a", "0.8"]);
    let doc = json_result(&out);
    let bound = doc["result"]["bound"].as_f64().unwrap();
    assert!((bound - 0.145_519_152_283_668_5).abs() < 1e-12);

    // domain violation: a <= p
    let out = run(&["tailbound", "--n", "10", "--p", "0.5", "--a", "0.4"]);
    assert_eq!(out.status.code(), Some(1));
}

use std::path::PathBuf;
use std::process::{Command, Output};

fn suite_file(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/suite");
    dir.join(format!("{name}.fn")).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monoidlab")).args(args).env_remove("MONOIDLAB_MAXLEN").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn classify_identity() {
    let o = run(&["classify", &suite_file("identity")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("memberships: S L A B E F G_1"), "{out}");
    assert!(out.contains("  Const: false"));
    assert!(out.contains("  M_1: true"));
}

#[test]
fn classify_drop_odd_with_oracle() {
    let o = run(&["classify", &suite_file("drop_odd"), "--oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("  J: false"));
    assert!(out.contains("  M_omega: true"));
    assert!(!out.contains("MISMATCH"));
}

#[test]
fn classify_prefix_eraser_is_in_j() {
    let o = run(&["classify", "suite:prefix_eraser"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("  J: true"));
}

#[test]
fn malformed_file_exits_with_parse_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("malformed.fn");
    std::fs::write(&path, "transducer v1\ninitial 0\nstate 0 final\ntrans 0 2 0 0\n").unwrap();
    let o = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let missing = run(&["classify", "/nonexistent/file.fn"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn non_functional_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.fn");
    std::fs::write(&path, "transducer v1\ninitial 0\nstate 0 final\ntrans 0 0 0 0\ntrans 0 0 1 0\ntrans 0 1 - 0\n").unwrap();
    let o = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not functional"));
}

#[test]
fn json_report_is_versioned() {
    let o = run(&["classify", "suite:sep1", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["functions"][0]["memberships"]["G_1"], true);
    assert_eq!(v["functions"][0]["memberships"]["G_2"], false);
    let maximal: Vec<&str> = v["registry"]["maximal"].as_array().unwrap().iter().map(|t| t.as_str().unwrap()).collect();
    assert_eq!(maximal, ["A", "G_1", "G_omega", "M_1", "M_omega"]);
}

#[test]
fn witness_ji() {
    let o = run(&["witness", "ji", "--target", &suite_file("identity")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: verified"));
}

#[test]
fn witness_mlambda() {
    let o = run(&[
        "witness",
        "mlambda",
        "--lambda",
        "1",
        "--m",
        &suite_file("hilbert_shift"),
        "--target",
        &suite_file("parity_0_1"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("chain: f = g ∘ m ∘ i"));
}

#[test]
fn witness_universal_needs_fat_co_range() {
    let o = run(&["witness", "universal", "--u", &suite_file("hilbert_shift"), "--target", &suite_file("identity")]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("co-range not fat"));
}

#[test]
fn witness_preconditions() {
    let o = run(&["witness", "glambda", "--h", "suite:identity", "--lambda", "2"]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["witness", "conj", "--g", "suite:drop_odd"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("g ∈ A"));
}

#[test]
fn witness_glambda_reports_lambda0() {
    let o = run(&["witness", "glambda", "--h", "suite:squash", "--lambda", "omega", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["extra"]["lambda0"], "0");
    assert_eq!(v["chain"]["verification"]["ok"], true);
}

#[test]
fn saved_chains_verify_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.json");
    let o = run(&["witness", "conj", "--g", "suite:g_a", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let bindings = doc["bindings"].as_array_mut().unwrap();
    let g = bindings.iter().find(|b| b["name"] == "g").unwrap()["transducer"].clone();
    bindings.iter_mut().find(|b| b["name"] == "α").unwrap()["transducer"] = g;
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn compose_output_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.fn");
    let o = run(&["compose", "suite:drop_odd", "suite:prefix_eraser", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("  J: true"));
}

#[test]
fn max_len_is_bounded() {
    let o = Command::new(env!("CARGO_BIN_EXE_monoidlab"))
        .args(["classify", "suite:identity", "--oracle"])
        .env("MONOIDLAB_MAXLEN", "20")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn suite_passes() {
    let o = run(&["suite"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("[PASS]").count(), 13);
}

#[test]
fn sabotaged_suite_names_the_oracle_criterion() {
    let o = run(&["suite", "--sabotage-gn"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("gn-oracle-agreement"));
}

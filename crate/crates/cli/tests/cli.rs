//! End-to-end runs of the `exop` binary: outputs and the exit-code contract.

use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn exop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exop")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn lines(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is JSON"))
        .collect()
}

#[test]
fn generate_charlier_polynomials() {
    let o = exop(&["generate", "--family", "charlier", "--set", "1,2", "--a", "1", "--n", "0,3,4"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let polys = v["polynomials"].as_array().unwrap();
    assert_eq!(polys.len(), 3);
    assert_eq!(polys[1]["n"], 3);
    assert_eq!(polys[1]["poly"]["coeffs"].as_array().unwrap().len(), 4);
    assert_eq!(v["a"], "1");
}

#[test]
fn generate_hermite_omega() {
    let o = exop(&["generate", "--family", "hermite", "--set", "1,2", "--omega"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["omega"]["coeffs"], serde_json::json!(["4", "0", "8"]));
}

#[test]
fn generate_operator_and_christoffel() {
    let o = exop(&["generate", "--family", "charlier", "--set", "2,3", "--a", "1/2", "--operator", "--christoffel", "--n", "0-2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v["operator"].is_object());
    assert_eq!(v["christoffel"].as_array().unwrap().len(), 3);
}

#[test]
fn generate_grid_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let o = exop(&[
        "generate", "--family", "hermite", "--set", "1,2", "--n", "7", "--eval-grid", "-3:3:0.1", "--csv", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "x,p_7");
    assert_eq!(rows.len() - 1, 61);
    assert_eq!(rows[1], "-3,-3.9847680000000000000e7");
    assert!(rows[2].starts_with("-2.9,"));
    assert_eq!(rows[31], "0,0");
    assert!(rows[61].starts_with("3,"));
}

#[test]
fn verify_eigen_passes() {
    let o = exop(&["verify", "--suite", "eigen", "--family", "charlier", "--set", "2,3", "--a", "1", "--nmax", "12"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["reports"][0]["cases"], 13);
}

#[test]
fn verify_norms_table() {
    let o = exop(&["verify", "--suite", "norms", "--family", "charlier", "--set", "1,2", "--a", "1", "--tol", "1e-20"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let norms = v["norms"].as_array().unwrap();
    let diagonal: Vec<&Value> = norms.iter().filter(|c| c["n"] == c["m"]).collect();
    assert_eq!(diagonal.len(), 4);
    assert!(norms.iter().all(|c| c["pass"] == true));
    // ⟨c_5^F, c_5^F⟩ = e/10 for F = {1,2}, a = 1.
    let five = diagonal.iter().find(|c| c["n"] == 5).unwrap();
    let value = five["value"].as_str().unwrap();
    assert!(value.starts_with("2.71828182845904523536028747135") && value.ends_with("e-1"), "{value}");
    assert_eq!(five["precision_bits"], 256);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error bound"));
}

#[test]
fn verify_all_on_non_admissible_set() {
    let o = exop(&["verify", "--suite", "all", "--set", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let reports = v["reports"].as_array().unwrap();
    let positivity = reports
        .iter()
        .find(|r| r["check"] == "positivity" && r["inputs"]["family"] == "charlier")
        .unwrap();
    assert!(positivity["notes"][0].as_str().unwrap().contains("signed measure"));
    assert!(reports.iter().any(|r| r["kind"] == "evidence" && r["passed"] == false));
}

#[test]
fn scan_hermite_proved_direction() {
    let o = exop(&["scan", "--family", "hermite", "--max-fk", "8"]);
    assert_eq!(code(&o), 0);
    let records = lines(&o);
    assert_eq!(records.len(), 256);
    let (summary, records) = records.split_last().unwrap();
    assert!(records
        .iter()
        .filter(|r| r["admissible"] == true)
        .all(|r| r["real_zero_count"] == 0));
    assert_eq!(summary["summary"]["admissible"], 33);
    assert_eq!(summary["summary"]["admissible_zero_free"], 33);
    let sets: Vec<String> = records.iter().map(|r| r["set"].to_string()).collect();
    assert_eq!(sets[0], "[1]");
    assert_eq!(sets[1], "[1,2]");
}

#[test]
fn scan_family_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("custom.json");
    // Monic recurrence x p_n = p_{n+1} + n p_n + (n/2) p_{n−1}.
    let a: Vec<String> = (0..6).map(|_| "1".into()).collect();
    let b: Vec<String> = (0..6).map(|n| n.to_string()).collect();
    let c: Vec<String> = (0..6).map(|n| format!("{n}/2")).collect();
    fs::write(&path, serde_json::json!({"a": a, "b": b, "c": c}).to_string()).unwrap();
    let o = exop(&["scan", "--family-file", path.to_str().unwrap(), "--max-fk", "6", "--karlin-szego"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let records = lines(&o);
    assert_eq!(records.len(), 64);
    assert_eq!(records[63]["summary"]["positive_measure"], true);

    let short = exop(&["scan", "--family-file", path.to_str().unwrap(), "--max-fk", "8"]);
    assert_eq!(code(&short), 2);
}

#[test]
fn scan_evidence_tallies() {
    let o = exop(&["scan", "--evidence", "alt-forms", "--max-fk", "4", "--a", "1"]);
    assert_eq!(code(&o), 0);
    let records = lines(&o);
    let summary = &records.last().unwrap()["summary"];
    assert_eq!(summary["scope"], "alt-forms");
    assert_eq!(summary["reports"], 30);
    assert!(records[..records.len() - 1].iter().all(|r| r["kind"] == "evidence"));
}

#[test]
fn configuration_errors_exit_2() {
    for args in [
        &["generate", "--family", "hermite", "--set", "0,1"][..],
        &["generate", "--family", "charlier", "--a", "0"],
        &["generate", "--family", "hermite", "--eval-grid", "0:1"],
        &["verify", "--suite", "nonsense"],
        &["verify", "--tol", "-1"],
        &["scan", "--max-fk", "40"],
        &["scan", "--family-file", "/nonexistent/family.json"],
        &["scan", "--family", "charlier", "--a", "-1", "--karlin-szego"],
        &["frobnicate"],
    ] {
        let o = exop(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn unreachable_tolerance_exits_3() {
    let o = exop(&[
        "verify", "--suite", "norms", "--family", "hermite", "--set", "1,2", "--precision", "32", "--tol", "1e-60",
    ]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, jobs: &str, args: &[&str]| {
        let path = dir.path().join(name);
        let mut full = vec!["--jobs", jobs, "--out", path.to_str().unwrap()];
        full.extend_from_slice(args);
        assert_eq!(code(&exop(&full)), 0);
        fs::read(path).unwrap()
    };
    let scan = ["scan", "--family", "charlier", "--a", "2", "--max-fk", "6"];
    assert_eq!(run("s1", "1", &scan), run("s2", "4", &scan));
    let verify = ["verify", "--suite", "norms,darboux", "--set", "2,3", "--a", "2"];
    assert_eq!(run("v1", "1", &verify), run("v2", "3", &verify));
}

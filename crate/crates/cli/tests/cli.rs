//! End-to-end runs of the icx binary on a small saved table.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::OnceLock;

use num_bigint::BigUint;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_icx")
}

/// A saved 10^4 table shared by the tests.
fn table_path() -> &'static PathBuf {
    static PATH: OnceLock<PathBuf> = OnceLock::new();
    PATH.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap().keep();
        let path = dir.join("t10k.icx");
        let out = Command::new(bin())
            .args(["build", "--limit", "10_000", "--out"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(out.status.success(), "{out:?}");
        path
    })
}

fn icx(args: &[&str]) -> Output {
    Command::new(bin())
        .arg("--table")
        .arg(table_path())
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn query_known_value() {
    let out = icx(&["query", "1439"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "26\n");
}

#[test]
fn query_accepts_readable_numbers() {
    let out = icx(&["query", "1_439"]);
    assert_eq!(stdout(&out), "26\n");
    let out = icx(&["query", "1e3"]);
    assert_eq!(stdout(&out).trim(), "21");
}

#[test]
fn query_out_of_table_is_usage_error() {
    let out = icx(&["query", "20000"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn expr_renders_and_roundtrips() {
    let out = icx(&["expr", "6"]);
    assert_eq!(stdout(&out), "((1+1)*(1+1+1))\n");
    let out = icx(&["--format", "json", "expr", "1439"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["cost"], 26);
    let parsed = icx_core::expr::Expression::parse(v["expression"].as_str().unwrap()).unwrap();
    assert_eq!(parsed.value(), BigUint::from(1439u32));
    assert_eq!(parsed.ones(), 26);
}

#[test]
fn defect_json_fields() {
    let out = icx(&["--format", "json", "defect", "19"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["cost"], 9);
    assert_eq!(v["class_index"], 2);
    assert_eq!(v["leader"], true);
    let d = v["defect"].as_f64().unwrap();
    assert!((d - 0.959568).abs() < 1e-5);
}

#[test]
fn census_csv_rows() {
    let out = icx(&["census", "--kmax", "3", "--mmax", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,m,u_b,u_n"));
    // U_B(2,3) = 4: the class-2 leaders 10, 14, 19, 20
    assert!(text.lines().any(|l| l == "2,3,4,6"));
}

#[test]
fn drb_text_and_csv() {
    let out = icx(&["drb", "--base", "24"]);
    let text = stdout(&out);
    assert!(text.contains("sum 265"));
    assert!(text.contains("averaged_constant 3.4743"));

    let out = icx(&["--format", "csv", "drb", "--base", "12"]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("base,r,bound,witness"));
    assert_eq!(text.lines().count(), 13);
    assert!(text.lines().any(|l| l.starts_with("12,5,9,")));
}

#[test]
fn drb_requires_huge_for_large_bases() {
    let out = icx(&["drb", "--base", "1062882"]); // 2 * 3^12
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--huge"));
}

#[test]
fn verify_constants_suite() {
    let out = icx(&["verify", "--suite", "constants"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let sum = v["constants"]["six_term_sum"].as_f64().unwrap();
    assert!((sum - 0.798).abs() < 1e-3);
    assert_eq!(v["discard_thresholds"][0][1], 5);
    assert_eq!(v["discard_thresholds"][6][1], 48);
}

#[test]
fn verify_sets_suite_full_scan() {
    // builds its own 3^13 table in memory; a couple of seconds
    let out = Command::new(bin())
        .args(["verify", "--suite", "sets", "--limit", "1594323"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 12);
    for c in checks {
        let id = c["check_id"].as_str().unwrap();
        let status = c["status"].as_str().unwrap();
        if id == "f" {
            assert_eq!(status, "report-only");
        } else {
            assert_eq!(status, "pass", "check {id}");
        }
    }
}

#[test]
fn synth_json_shape() {
    let out = icx(&["synth", "123456789012", "--base", "24", "--kmax", "64"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n"], "123456789012");
    assert_eq!(v["base"], 24);
    let expr = icx_core::expr::Expression::parse(v["expression"].as_str().unwrap()).unwrap();
    assert_eq!(expr.value().to_string(), "123456789012");
    assert_eq!(expr.ones(), v["cost"].as_u64().unwrap());
    let ratio = v["ratio_cost_over_log_n"].as_f64().unwrap();
    assert!(ratio > 2.5 && ratio < 4.33);
}

#[test]
fn params_output() {
    let out = icx(&["params", "1e12"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["p"], 8);
    assert_eq!(v["K"], 0);
}

#[test]
fn stats_density_csv() {
    let out = icx(&["stats", "density", "--t", "3.06", "--grid", "1e4"]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("n_max,count,fraction"));
    assert!(text.lines().nth(1).unwrap().starts_with("10000,23,"));
}

#[test]
fn stats_growth_csv() {
    let out = icx(&["stats", "growth", "--r", "0.48", "--grid", "100,10000"]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("n_max,r,count"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn stats_ratio_csv() {
    let out = icx(&["stats", "ratio", "--max", "10000"]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("n,cost,ratio"));
    assert!(text.lines().nth(1).unwrap().starts_with("1439,26,3.575"));
}

#[test]
fn stats_discrepancy_csv() {
    let out = icx(&[
        "stats",
        "discrepancy",
        "--n",
        "1e12",
        "--base",
        "2",
        "--j",
        "20",
        "--k",
        "64",
    ]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("n,base,j,k,star,extreme"));
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("1000000000000,2,20,64,0.0844"), "{row}");
}

#[test]
fn stats_conjecture_text() {
    let out = icx(&["stats", "conjecture", "--max", "10000"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("0 violations"), "{text}");
}

#[test]
fn determinism_same_bytes() {
    let a = icx(&["--format", "json", "expr", "4096"]);
    let b = icx(&["--format", "json", "expr", "4096"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn corrupt_table_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.icx");
    std::fs::write(&path, b"XXXX a sixteen-byte header").unwrap();
    let out = Command::new(bin())
        .arg("--table")
        .arg(&path)
        .args(["query", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("magic"));
}

#[test]
fn usage_errors_exit_two() {
    let out = Command::new(bin()).args(["nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin()).args(["query"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin())
        .args(["verify", "--suite", "bogus"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn env_var_table_is_honored() {
    let out = Command::new(bin())
        .env("ICX_TABLE", table_path())
        .args(["query", "1439"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), "26\n");
    // and the note about building in memory must not appear
    assert!(!String::from_utf8_lossy(&out.stderr).contains("building"));
}

#[test]
fn threads_flag_accepted() {
    let out = icx(&["--threads", "2", "stats", "ratio", "--max", "2000"]);
    assert!(out.status.success());
}

//! End-to-end tests of the `pasvol` binary: exit codes, JSON payloads,
//! batch aggregation, determinism.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn pasvol() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pasvol"))
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("pasvol-test-{}-{name}", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    pasvol().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn decide_odd_sum_is_false() {
    let f = write_temp("odd.pas", "(exists m0 (= (+ m0 m0) 1))");
    let out = run(&["decide", "--formula-file", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "false");
}

#[test]
fn qe_reports_quantifier_free_json() {
    let f = write_temp("parity.pas", "(exists m1 (= (+ m1 m1) m0))");
    let out = run(&["qe", "--formula-file", f.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["quantifier_free"], serde_json::json!(true));
    assert_eq!(v["output"], serde_json::json!("(divides 2 m0)"));
}

#[test]
fn compare_passes_on_the_even_ord_fixture() {
    let f = fixtures().join("compare/f02_even_ord.pas");
    let out = run(&[
        "compare",
        "--formula-file",
        f.to_str().unwrap(),
        "--primes",
        "3,5",
        "--depth",
        "6",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    for r in results {
        assert_eq!(r["pass"], serde_json::json!(true));
    }
    assert_eq!(results[0]["symbolic"], serde_json::json!("3/4"));
    assert_eq!(results[1]["symbolic"], serde_json::json!("5/6"));
}

#[test]
fn composite_prime_is_a_usage_error() {
    let f = fixtures().join("compare/f02_even_ord.pas");
    let out = run(&[
        "volume",
        "--prime",
        "4",
        "--depth",
        "2",
        "--formula-file",
        f.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sort_error_is_a_domain_error() {
    let f = write_temp("cross.pas", "(= x0 m0)");
    let out = run(&["parse", "--formula-file", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sort"));
}

#[test]
fn parse_reads_stdin() {
    let mut child = pasvol()
        .args(["parse", "--formula-file", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(b"( exists   m0 (< m0 1 ))")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "(exists m0 (< m0 1))");
}

#[test]
fn batch_runs_the_shipped_manifest() {
    let manifest = fixtures().join("manifest.jsonl");
    let out = run(&["batch", manifest.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["failures"], serde_json::json!(0));
    assert!(v["jobs"].as_u64().unwrap() >= 14);
}

#[test]
fn batch_of_an_empty_manifest_is_a_pass() {
    let manifest = write_temp("empty.jsonl", "");
    let out = run(&["batch", manifest.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["jobs"], serde_json::json!(0));
}

#[test]
fn batch_names_a_failing_job_and_exits_nonzero() {
    let bad = write_temp("outside.pas", "(= x0 0)");
    let manifest = write_temp(
        "failing.jsonl",
        &format!(
            "{}\n{}\n",
            serde_json::json!({"cmd": "compare", "args": ["--formula-file", bad.to_str().unwrap(), "--primes", "3", "--depth", "2"]}),
            serde_json::json!({"cmd": "decide", "args": ["--formula-file", "presburger/even_two.pas"]}),
        ),
    );
    // relative paths resolve against the manifest directory, so point the
    // second job at the shipped fixtures by copying the manifest there
    let manifest_in_fixtures = fixtures().join("tmp-failing-manifest.jsonl");
    std::fs::copy(&manifest, &manifest_in_fixtures).unwrap();
    let out = run(&["batch", manifest_in_fixtures.to_str().unwrap(), "--json"]);
    std::fs::remove_file(&manifest_in_fixtures).unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["failures"], serde_json::json!(1));
    let records = v["records"].as_array().unwrap();
    assert_eq!(records[0]["ok"], serde_json::json!(false));
    assert!(records[0]["error"].as_str().unwrap().contains("fragment"));
    assert_eq!(records[1]["ok"], serde_json::json!(true));
}

#[test]
fn json_payloads_are_deterministic() {
    let f = fixtures().join("compare/f06_square_level2.pas");
    let args = [
        "compare",
        "--formula-file",
        f.to_str().unwrap(),
        "--primes",
        "3,5,7",
        "--depth",
        "3",
        "--json",
        "--seed",
        "7",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn strip_json_matches_the_fixture() {
    let out = run(&[
        "strip", "--ell", "1", "--h", "2", "--prime", "13", "--depth", "8", "--poly",
        "676,0,-65,0,1", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["member"], serde_json::json!(true));
    assert_eq!(v["R"], serde_json::json!([4, 8, 1]));
}

#[test]
fn eval_reports_three_valued_truth(){
    let f = write_temp("ord2.pas", "(= (ord x0) 2)");
    let out = run(&[
        "eval", "--prime", "3", "--depth", "2", "--assign", "x0=9", "--formula-file",
        f.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "unknown");
    // exact zero assignment decides ord atoms at infinity
    let out = run(&[
        "eval", "--prime", "3", "--depth", "2", "--assign", "x0=0", "--formula-file",
        f.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out).trim(), "false");
}

#[test]
fn integrate_brackets_the_closed_form() {
    let f = fixtures().join("compare/f01_full_ring.pas");
    let out = run(&[
        "integrate", "--prime", "3", "--depth", "6", "--exponent", "1", "--formula-file",
        f.to_str().unwrap(), "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // 3/4 = 398580.75/531441 lies between the reported bounds
    let lower = v["lower"].as_str().unwrap();
    let upper = v["upper"].as_str().unwrap();
    assert_eq!(lower, "132860/177147");
    assert_eq!(upper, "398581/531441");
}

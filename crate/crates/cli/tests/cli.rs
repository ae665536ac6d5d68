use std::path::PathBuf;
use std::process::Output;

use assert_cmd::Command;
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn descriptor(name: &str) -> String {
    root().join("docs/descriptors").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::cargo_bin("hsp").unwrap().args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn temp_file(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("hsp-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn validate(report: &Value) {
    let text = std::fs::read_to_string(root().join("docs/report.schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap_or_else(|e| panic!("schema: {e}"));
    let msgs: Vec<String> = match compiled.validate(report) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "report violates schema: {msgs:?}");
}

fn report(args: &[&str]) -> Value {
    let v: Value = serde_json::from_str(&stdout(args)).unwrap();
    validate(&v);
    v
}

#[test]
fn lattice_commands() {
    let id = temp_file("id.txt", "2 2\n1 0\n0 1\n");
    assert_eq!(stdout(&["lattice", "hnf", &id]), "2 2\n1 0\n0 1\n");
    assert_eq!(stdout(&["lattice", "lll", &id]), "2 2\n1 0\n0 1\n");
    let d = temp_file("d.txt", "2 2\n2 0\n0 3\n");
    assert_eq!(stdout(&["lattice", "snf", &d]), "2 2\n1 0\n0 6\n");
    assert_eq!(stdout(&["lattice", "reciprocal", &d]), "2 2\n1/2 0\n0 1/3\n");
    let v: Value = serde_json::from_str(&stdout(&["--json", "lattice", "saturate", &d])).unwrap();
    assert_eq!(v["matrix"], serde_json::json!([["1", "0"], ["0", "1"]]));
}

#[test]
fn malformed_matrix_fails() {
    let bad = temp_file("bad.txt", "2 2\n1 x\n0 1\n");
    let out = run(&["lattice", "hnf", &bad]);
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());
    assert!(!run(&["lattice", "hnf", "/nonexistent/matrix.txt"]).status.success());
}

#[test]
fn partial_fraction_forms() {
    assert_eq!(stdout(&["pf", "1/360"]).trim(), "-2 + 1/2 + 1/8 + 2/3 + 1/9 + 3/5");
    assert_eq!(stdout(&["pf", "1/360", "--abbrev"]).trim(), "-2 + 5/8 + 7/9 + 3/5");
    assert_eq!(stdout(&["pf", "7"]).trim(), "7");
    let v: Value = serde_json::from_str(&stdout(&["--json", "pf", "1/360"])).unwrap();
    assert_eq!(v["abbreviated"], "-2 + 5/8 + 7/9 + 3/5");
    assert!(!run(&["pf", "1/0"]).status.success());
}

#[test]
fn oracle_tokens() {
    let l = temp_file("l.txt", "2 2\n2 0\n1 3\n");
    let tok = stdout(&["oracle", "brick", "--lattice", &l, "5 7"]);
    let t: Vec<i64> = tok.split_whitespace().map(|x| x.parse().unwrap()).collect();
    assert_eq!(stdout(&["lattice", "hnf", &l]), "2 2\n6 2\n0 1\n");
    // Brute force: the unique point of (5, 7) + L in the HNF brick [0, 6) × [0, 1).
    let mut hits = Vec::new();
    for a in -10i64..=10 {
        for b in -10i64..=10 {
            let p = (5 - 2 * a, 7 - a - 3 * b);
            if (0..6).contains(&p.0) && (0..1).contains(&p.1) {
                hits.push(vec![p.0, p.1]);
            }
        }
    }
    assert_eq!(hits, vec![t]);
    assert_eq!(stdout(&["oracle", "rational", "--accept", "5", "1/5"]).trim(), "0");
    assert_eq!(stdout(&["oracle", "sparse-simon", "--accept", "even", "e2+e5"]).trim(), "e5");
    assert!(!run(&["oracle", "sparse-simon", "--accept", "even", "e2+"]).status.success());
}

#[test]
fn oracle_checks_pass() {
    let l = temp_file("lc.txt", "2 2\n2 0\n1 3\n");
    stdout(&["oracle", "brick", "--lattice", &l, "0 0", "--check"]);
    stdout(&["oracle", "shift", "--lattice", &l, "--shift", "1 -1", "--side", "1", "0 0", "--check"]);
    stdout(&["oracle", "rational", "--accept", "2,3", "1/6", "--check"]);
    stdout(&["oracle", "sparse-simon", "--accept", "odd", "e1", "--check"]);
}

#[test]
fn full_lattice_report() {
    let v = report(&["--json", "hsp-recover", &descriptor("hsp_full_z2.json")]);
    assert_eq!(v["success_rate"], 1.0);
    assert_eq!(v["trials"].as_array().unwrap().len(), 10);
}

#[test]
fn random_rank_one_secrets() {
    let v = report(&["--json", "hsp-recover", &descriptor("hsp_rank1_z3.json"), "--trials", "100"]);
    let rate = v["success_rate"].as_f64().unwrap();
    assert!((0.7..=1.0).contains(&rate), "success rate {rate}");
}

#[test]
fn reports_are_byte_identical() {
    let args = ["--json", "hsp-recover", &descriptor("hsp_rank1_z3.json"), "--trials", "12", "--seed", "99"];
    assert_eq!(stdout(&args), stdout(&args));
    let shift = ["--json", "shift-recover", &descriptor("shift_8z.json"), "--trials", "6"];
    assert_eq!(stdout(&shift), stdout(&shift));
}

#[test]
fn debug_trace_and_timing_validate() {
    let v = report(&["--json", "hsp-recover", &descriptor("hsp_rank1_z3.json"), "--trials", "2", "--debug-trace", "--timing"]);
    assert!(v["trials"][0]["detail"]["trace"]["e"].is_array());
    assert!(v["wall_ms"].is_number());
    let v = report(&["--json", "hsp-recover", &descriptor("hsp_rank1_z3.json"), "--trials", "3", "--noise", "exact"]);
    assert_eq!(v["parameters"]["noise"], "none");
}

#[test]
fn zero_shift_always_recovers() {
    let v = report(&["--json", "shift-recover", &descriptor("shift_zero.json")]);
    assert_eq!(v["success_rate"], 1.0);
}

#[test]
fn eight_z_shift_rate() {
    let v = report(&["--json", "shift-recover", &descriptor("shift_8z.json"), "--trials", "50", "--noise", "gaussian"]);
    assert!(v["success_rate"].as_f64().unwrap() >= 0.5);
    assert_eq!(v["parameters"]["noise"], "gaussian");
}

#[test]
fn qubit_counts_grow_with_m() {
    let mean = |m: &str| {
        let v = report(&["--json", "shift-recover", &descriptor("shift_8z.json"), "--m", m, "--trials", "10"]);
        v["summary"]["mean_qubits_created"].as_f64().unwrap()
    };
    let (q2, q3) = (mean("2"), mean("3"));
    assert!(q3 > q2, "m=2: {q2}, m=3: {q3}");
}

#[test]
fn bad_descriptor_is_rejected() {
    let d = temp_file("bad.json", r#"{"k": 2, "secret": {"kind": "fixed", "generators": [[1, 0]]}, "bogus": true}"#);
    assert!(!run(&["hsp-recover", &d]).status.success());
}

#[test]
fn human_table_output() {
    let out = stdout(&["hsp-recover", &descriptor("hsp_full_z2.json"), "--trials", "2"]);
    assert!(out.contains("success rate: 1.000"));
}

//! End-to-end tests of the `polybern` binary: exit codes, output formats and
//! agreement with the library.

use std::process::{Command, Output};

use polybern::{degen_multi_poly_bernoulli, FamilyQuery, IndexVector, Rational, SequenceResult};

fn polybern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polybern"))
        .args(args)
        .env_remove("POLYBERN_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn numbers_json_round_trips_to_library_result() {
    let out = polybern(&["numbers", "--ks", "2,-1", "--lambda", "1/4", "--x", "-2/3", "--order", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: SequenceResult = serde_json::from_str(&stdout(&out)).unwrap();
    let query = FamilyQuery::new(
        IndexVector::new(vec![2, -1]).unwrap(),
        Rational::new(1, 4).unwrap(),
        Rational::new(-2, 3).unwrap(),
        10,
    );
    assert_eq!(parsed, degen_multi_poly_bernoulli(&query).unwrap());
}

#[test]
fn format_env_var_selects_csv() {
    let out = Command::new(env!("CARGO_BIN_EXE_polybern"))
        .args(["numbers", "--family", "poly", "--k", "-1", "--order", "3"])
        .env("POLYBERN_FORMAT", "csv")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "n,value\n0,1/1\n1,1/1\n2,1/1\n3,1/1\n");
}

#[test]
fn format_flag_overrides_env_var() {
    let out = Command::new(env!("CARGO_BIN_EXE_polybern"))
        .args(["--format", "json", "stirling", "--kind", "second", "--max-n", "3"])
        .env("POLYBERN_FORMAT", "csv")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rows"][3][2], "3");
}

#[test]
fn passing_and_diagnostic_verifications_exit_0() {
    let pass = polybern(&["verify", "--identity", "prop1", "--ks", "3,-2", "--lambda", "1/2", "--order", "8"]);
    assert_eq!(pass.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&pass)).unwrap();
    assert_eq!(v["status"], "pass");

    let diag = polybern(&["verify", "--identity", "thm4", "--ks", "1,1", "--order", "2", "--truncate", "4"]);
    assert_eq!(diag.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&diag)).unwrap();
    assert_eq!(v["status"], "diagnostic");
    assert!(!v["residuals"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["numbers", "--ks", "1,x"],
        &["numbers", "--lambda", "1/0", "--ks", "1"],
        &["numbers", "--family", "poly", "--ks", "1,2"],
        &["verify", "--identity", "eq18", "--ks", "1"],
        &["verify", "--identity", "thm4", "--ks", "1,1", "--order", "0"],
        &["verify", "--identity", "nope"],
        &["--format", "csv", "verify", "--identity", "prop1", "--ks", "1"],
        &["bogus"],
    ];
    for args in cases {
        let out = polybern(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn verify_all_output_is_independent_of_jobs() {
    let one = polybern(&["verify", "--all", "--jobs", "1", "--truncate", "6"]);
    let four = polybern(&["verify", "--all", "--jobs", "4", "--truncate", "6"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("polybern-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.json");
    let out = polybern(&["--output", path.to_str().unwrap(), "series", "--name", "log1p", "--order", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["coeffs"], serde_json::json!(["0/1", "1/1", "-1/2", "1/3"]));
    std::fs::remove_dir_all(&dir).unwrap();
}

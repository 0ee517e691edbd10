use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_padic-closure"))
}

fn fixture(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn temp(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("padic-closure-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn torsion_only_problem_has_rank_zero() {
    let out = bin().args(["closure", &fixture("problems/torsion_only.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains(">= 0"));
}

#[test]
fn dbracket_report_records_witness_and_parameters() {
    let json = temp("split.json", "");
    let out = bin()
        .args(["dbracket", &fixture("problems/split_torus.json"), "--json"])
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["verdict"], "CERTIFIED");
    assert_eq!(v["dbracket"]["lo"], 2);
    assert_eq!(v["dbracket"]["witness"]["basis"], serde_json::json!([[1, 0]]));
    assert_eq!(v["parameters"], serde_json::json!({"box": 1, "precision": 20}));
    assert!(v.get("timing").is_none());
}

#[test]
fn flags_override_the_problem_file() {
    let json = temp("override.json", "");
    bin()
        .args(["dbracket", &fixture("problems/rank_one.json"), "--precision", "7", "--box", "3", "--timing", "--json"])
        .arg(&json)
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["parameters"], serde_json::json!({"box": 3, "precision": 7}));
    assert!(v["timing"]["elapsed_ms"].is_number());
}

#[test]
fn mixed_groups_are_flagged() {
    let out = bin().args(["dbracket", &fixture("problems/mixed.json")]).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("product-candidates-only"));
}

#[test]
fn exit_codes() {
    let bad_json = temp("bad.json", "{\"schema_version\": 1,\n  \"p\": ]");
    let out = bin().arg("closure").arg(&bad_json).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let bad_field = temp(
        "field.json",
        r#"{"schema_version": 1, "group": ["multiplicative"], "p": 5, "generators": [["2"], ["x"]]}"#,
    );
    let out = bin().arg("closure").arg(&bad_field).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("generators[1][0]"));

    let non_unit = temp(
        "nonunit.json",
        r#"{"schema_version": 1, "group": ["multiplicative"], "p": 5, "generators": [["5"]]}"#,
    );
    assert_eq!(bin().arg("closure").arg(&non_unit).output().unwrap().status.code(), Some(3));

    let ramified = temp(
        "ramified.json",
        r#"{"schema_version": 1, "field": [-2, 0, 1], "units": [[1, 1]], "primes": [2]}"#,
    );
    assert_eq!(bin().arg("leopoldt").arg(&ramified).output().unwrap().status.code(), Some(3));
}

#[test]
fn inconclusive_verdicts_exit_zero() {
    let torsion_unit = temp(
        "torsion_unit.json",
        r#"{"schema_version": 1, "field": [-2, 0, 1], "units": [[-1]], "primes": [3], "precision": 10}"#,
    );
    let out = bin().arg("leopoldt").arg(&torsion_unit).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("INCONCLUSIVE"));
}

#[test]
fn check_and_selftest_pass() {
    let out = bin().args(["check", &fixture("problems/block_product.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));
    assert_eq!(bin().arg("selftest").output().unwrap().status.code(), Some(0));
}

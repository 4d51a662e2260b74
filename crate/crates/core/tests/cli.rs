use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spec_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs")
}

fn rpq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rpq")).args(args).output().expect("binary runs")
}

fn temp_spec(name: &str, body: &str) -> String {
    let path = std::env::temp_dir().join(format!("rpq-cli-{}-{name}.json", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn flagship(name: &str) -> String {
    spec_dir().join(format!("{name}.json")).to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn numbers_reports_value() {
    let spec = temp_spec("p2q1", r#"{"kind": "jagannathan_srinivasa", "p": 2.0, "q": 1.0}"#);
    let out = rpq(&["numbers", "--spec", &spec, "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["command"], "numbers");
    assert_eq!(doc["records"][0]["n"], 3);
    assert_eq!(doc["records"][0]["value"], 7.0);
}

#[test]
fn verify_all_passes_on_flagships() {
    for name in ["js", "cj", "quesne", "hn"] {
        let out = rpq(&["verify-all", "--spec", &flagship(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stdout));
        let doc = json(&out);
        assert_eq!(doc["passed"], true);
        let records = doc["records"].as_array().unwrap();
        assert_eq!(records.len(), 14);
        assert!(records.iter().all(|r| r["status"] != "fail"));
    }
}

#[test]
fn malformed_spec_is_an_input_error() {
    let spec = temp_spec("missing-q", r#"{"kind": "quesne", "p": 1.1}"#);
    let out = rpq(&["numbers", "--spec", &spec, "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "config");
    assert!(err["error"]["message"].as_str().unwrap().contains("`q`"));
}

#[test]
fn missing_spec_and_unused_flags_are_rejected() {
    assert_eq!(rpq(&["numbers", "--n", "2"]).status.code(), Some(2));
    assert_eq!(rpq(&["exp", "--spec", &flagship("js"), "--theta", "0.1"]).status.code(), Some(2));
    assert_eq!(rpq(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn failing_check_exits_one() {
    let out = rpq(&["hopf-check", "--spec", &flagship("hn"), "--tau", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    let failed: Vec<&str> = doc["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["gamma_homomorphism"]);
    assert_eq!(rpq(&["hopf-check", "--spec", &flagship("hn")]).status.code(), Some(0));
}

#[test]
fn csv_output_has_header_and_one_row_per_point() {
    let out = rpq(&["hermite", "--spec", &flagship("js"), "--n", "2", "--output", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,theta,value,imag,asymmetry_warning");
    assert_eq!(lines.len(), 33);
}

#[test]
fn data_commands_run() {
    let js = flagship("js");
    for args in [
        vec!["phi", "--n", "4"],
        vec!["derive", "--coeffs", "1,2,3"],
        vec!["integrate", "--n", "2"],
        vec!["exp", "--z", "0.5,0.1"],
        vec!["trig", "--which", "sin", "--z", "0.3"],
        vec!["fock", "--dim", "16"],
        vec!["coherent", "--z", "0.2,0.1"],
        vec!["rs-poly", "--n", "5"],
    ] {
        let mut full = args.clone();
        full.extend(["--spec", &js]);
        let out = rpq(&full);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!json(&out)["records"].as_array().unwrap().is_empty());
    }
    let bessel = temp_spec("bessel", r#"{"kind": "heine_q", "p": 0.9, "q": 0.5}"#);
    let out = rpq(&["bessel", "--spec", &bessel, "--z", "0.3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn output_is_deterministic() {
    let a = rpq(&["verify-all", "--spec", &flagship("quesne"), "--output", "csv"]).stdout;
    let b = rpq(&["verify-all", "--spec", &flagship("quesne"), "--output", "csv"]).stdout;
    assert_eq!(a, b);
}

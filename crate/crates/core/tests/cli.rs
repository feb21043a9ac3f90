use std::path::PathBuf;
use std::process::{Command, Output};

use morass::suites::Subject;

fn morass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morass")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    morass(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    let out = morass(args);
    String::from_utf8(out.stdout).expect("utf-8")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("morass-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn build_round_trips_through_the_reader() {
    for f in ["m3", "two-step", "small"] {
        let text = stdout(&["build", "--fixture", f]);
        let subj = Subject::from_json(&text).unwrap();
        assert_eq!(subj.to_json().trim(), text.trim());
    }
    assert!(matches!(Subject::from_json(&stdout(&["build", "--fixture", "minimal"])).unwrap(), Subject::Gap2(_)));
    assert!(matches!(Subject::from_json(&stdout(&["build", "--fixture", "m4"])).unwrap(), Subject::Gap1(_)));
}

#[test]
fn validate_exit_codes() {
    let path = tmp("m3.json");
    assert_eq!(code(&["build", "--fixture", "m3", "--output", path.to_str().unwrap()]), 0);
    assert_eq!(code(&["validate", "--input", path.to_str().unwrap()]), 0);
    assert_eq!(code(&["validate", "--fixture", "two-step"]), 0);
    assert_eq!(code(&["validate", "--fixture", "m3", "--mutate", "drop-P2-map"]), 1);
    assert_eq!(code(&["validate", "--fixture", "minimal", "--mutate", "drop-gap2-family"]), 1);
    assert_eq!(code(&["validate", "--fixture", "no-such-fixture"]), 2);
    assert_eq!(code(&["validate", "--fixture", "m3", "--mutate", "no-such-mutation"]), 2);
    assert_eq!(code(&["validate"]), 2);
}

#[test]
fn malformed_input_is_a_configuration_error() {
    let path = tmp("bad.json");
    std::fs::write(&path, "{\"theta\": [1, 2]").unwrap();
    assert_eq!(code(&["validate", "--input", path.to_str().unwrap()]), 2);
    assert_eq!(code(&["validate", "--input", "/nonexistent/morass.json"]), 2);
}

#[test]
fn mutated_report_names_the_broken_axiom() {
    let out = stdout(&["verify", "--suite", "gap1-axioms", "--mutate", "drop-P2-map"]);
    let r: serde_json::Value = serde_json::from_str(&out).unwrap();
    let failing: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["verdict"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failing.contains(&"m3+drop-P2-map: P2"), "{failing:?}");
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&["verify", "--suite", "gap1-axioms"]), 0);
    assert_eq!(code(&["verify", "--suite", "gap2-axioms"]), 0);
    // D″ is not dense on the finite fixtures, so the chain suite reports a failure
    assert_eq!(code(&["verify", "--suite", "chain-5.x", "--fixture", "two-column"]), 1);
    assert_eq!(code(&["verify", "--suite", "no-such-suite"]), 2);
    assert_eq!(code(&["verify"]), 2);
    // a gap-2 mutation has no meaning for the gap-1 suite
    assert_eq!(code(&["verify", "--suite", "gap1-axioms", "--mutate", "drop-gap2-family"]), 2);
    assert_eq!(code(&["verify", "--suite", "gap1-axioms", "--fixture", "minimal-b1"]), 2);
    assert_eq!(code(&["verify", "--bogus-flag"]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn verify_list_names_every_suite() {
    let out = stdout(&["verify", "--list"]);
    for name in morass::suites::suite_names() {
        assert!(out.contains(name), "{name} missing from the listing");
    }
    for m in morass::mutate::MUTATIONS {
        assert!(out.contains(m.name));
    }
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "chain-5.x", "--fixture", "small"];
    let (a, b) = (stdout(&args), stdout(&args));
    assert_eq!(a, b);
    let r: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert!(r["elapsed_ms"].is_null());
}

#[test]
fn several_suites_print_an_array_sorted_by_name() {
    let out = stdout(&["verify", "--suite", "gap2-axioms", "--suite", "gap1-axioms", "--timing"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["suite"].as_str().unwrap()).collect();
    assert_eq!(names, ["gap1-axioms", "gap2-axioms"]);
    assert!(v[0]["elapsed_ms"].is_u64());
}

#[test]
fn extend_both_forcings() {
    let out = stdout(&["extend", "--forcing", "chain", "--fixture", "two-column"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["forcing"], "chain");
    assert_eq!(v["result"]["chain"]["1"], serde_json::json!([0]));
    assert_eq!(code(&["extend", "--forcing", "topology", "--fixture", "minimal-b1", "--seed", "3"]), 0);
    assert_eq!(code(&["extend", "--forcing", "chain", "--fixture", "minimal-b1"]), 2);
    assert_eq!(code(&["extend", "--forcing", "lattice", "--fixture", "small"]), 2);
}

#[test]
fn export_formats() {
    let dot = stdout(&["export", "--fixture", "m3"]);
    assert!(dot.starts_with("digraph"), "{dot}");
    assert!(dot.trim_end().ends_with('}'));
    let inner = stdout(&["export", "--fixture", "two-step", "--inner"]);
    let outer = stdout(&["export", "--fixture", "two-step"]);
    assert!(inner.starts_with("digraph") && outer.starts_with("digraph"));
    assert_ne!(inner, outer);
    let json = stdout(&["export", "--fixture", "m3", "--format", "json"]);
    assert_eq!(json, stdout(&["build", "--fixture", "m3"]));
}

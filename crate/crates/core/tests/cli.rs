use std::fs;
use std::process::{Command, Output};

use serde_json::Value;
use tau_loop::jobs::{Report, SCHEMA};

fn tau_loop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tau-loop")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

#[test]
fn verma_dims_hand_values() {
    let out = tau_loop(&["verma-dims", "--preset", "scalar", "--psi", "λ=1,c=1,d0=0", "--box", "4,4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["schema"], SCHEMA);
    let dims = v["body"]["dims"].as_array().unwrap();
    assert!(dims.contains(&serde_json::json!([0, 1, 3])));
    assert!(dims.contains(&serde_json::json!([1, 1, 4])));
}

#[test]
fn example_vectors_match_and_are_singular() {
    let out = tau_loop(&["example31", "--z", "1,2", "--lam", "2,3", "--c", "1,2", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json_of(&out);
    assert_eq!(v["body"]["P1"], "2 - t");
    for row in v["body"]["vectors"].as_array().unwrap() {
        assert_eq!(row["display_agrees"], true);
        assert_eq!(row["commutator_agrees"], true);
        assert_eq!(row["singular"], true);
    }
}

#[test]
fn radical_and_crt() {
    let out = tau_loop(&["radical", "--preset", "jet:2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["body"]["radical"], serde_json::json!(["t"]));

    let out = tau_loop(&["crt", "--preset", "points:1,2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let comps = json_of(&out)["body"]["components"].clone();
    assert_eq!(comps[0]["coordinates"], serde_json::json!(["2", "-1"]));
    assert_eq!(comps[1]["coordinates"], serde_json::json!(["-1", "1"]));

    let out = tau_loop(&["crt", "--preset", "jet:2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_algebra_is_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("alg.json");
    fs::write(
        &path,
        r#"{"dim": 2, "labels": ["1", "x"], "unit": ["1", "0"],
            "mult": [[0,0,["1","0"]], [0,1,["0","1"]], [1,0,["0","2"]], [1,1,["0","0"]]]}"#,
    )
    .unwrap();
    let out = tau_loop(&["validate-algebra", "--algebra", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["body"]["valid"], false);
    assert!(!v["body"]["commutativity"].as_array().unwrap().is_empty());
}

#[test]
fn input_errors_exit_two_with_location() {
    let out = tau_loop(&["verma-dims", "--preset", "points:1,1", "--psi", "λ=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("algebra.preset"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    fs::write(&path, "{\n  \"command\": \"verma-dims\",\n  \"bogus\": 1\n}").unwrap();
    let out = tau_loop(&["run", "--job", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("job.json:3:"), "{err}");

    let out = tau_loop(&["verma-dims", "--psi", "λ=1", "--box", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn truncation_is_reported() {
    let out = tau_loop(&["apply", "--psi", "λ=1,c=1", "--module", "verma", "--box", "1,1", "--element", "X(t^-2;a0)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("X(t^-2;a0)"));
}

#[test]
fn job_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    fs::write(
        &job,
        r#"{"command": "check-bracket", "algebra": {"preset": "jet", "N": 2},
            "psi": {"h": ["1", "1/2"], "K": ["1", "2"], "L0": ["0", "-1"]},
            "box": [2, 2], "params": {"module": "verma", "k": 1, "j": -1}, "output": "json"}"#,
    )
    .unwrap();
    let mut outputs = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let out = tau_loop(&["run", "--job", job.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        fs::write(&path, &out.stdout).unwrap();
        outputs.push(fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let report: Report = serde_json::from_slice(&outputs[0]).unwrap();
    assert_eq!(report.schema, SCHEMA);
    assert_eq!(report.command, "check-bracket");
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = tau_loop(&["selftest", "--criterion", "8", "--criterion", "11", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["body"]["passed"], 2);
}

#[test]
fn centrality_from_the_command_line() {
    let out = tau_loop(&[
        "check-central", "--preset", "jet:2", "--psi", "λ=1,c=1", "--module", "verma", "--box", "2,2", "--j", "-1",
        "--window", "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let out = tau_loop(&[
        "check-central", "--preset", "jet:2", "--psi", "λ=1,c=1", "--module", "verma", "--box", "2,2", "--window", "1",
        "--scope", "loop", "--a", "1,0", "--b", "1,0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;
use tlkp_cli::{run_suite_at, SuiteConfig};
use tlkp_core::{Rational, SchurCoeffMap};

fn tlkp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlkp")).args(args).output().expect("binary runs")
}

fn write_config(dir: &TempDir, name: &str, v: Value) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn diagram_counts_for_two_rows() {
    let config = SuiteConfig::from_value(&json!({
        "N": 3, "M": 2, "Q": "2", "checks": ["diagram-counts"], "lambda1_max": 5
    }))
    .unwrap();
    let report = run_suite_at(&config, 0);
    let row = report
        .records
        .iter()
        .find(|r| r.detail.as_ref().is_some_and(|d| d["lambda1_max"] == 5))
        .expect("row for λ1max = 5");
    let detail = row.detail.as_ref().unwrap();
    assert_eq!(detail["enumerated"], 6);
    assert_eq!(detail["closed_form"], 6);
    assert!(row.pass);
    assert!(report.success());
}

#[test]
fn empty_suite_succeeds_vacuously() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "empty.json", json!({"N": 3, "M": 2, "Q": "2", "checks": []}));
    let out = tlkp(&["verify", "--config", &cfg]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["summary"]["total"], 0);
    assert_eq!(report["records"], json!([]));
}

#[test]
fn repeated_parameters_are_recorded_as_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "repeat.json",
        json!({
            "N": 3, "M": 2, "Q": "2",
            "u": ["1/3", "2/5"], "v": ["3/7", "3/7"],
            "checks": ["theorem-quotient", "integral-rep", "diagram-counts"], "lambda1_max": 3
        }),
    );
    let out = tlkp(&["verify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    let records = report["records"].as_array().unwrap();
    for check in ["theorem-quotient", "integral-rep"] {
        let r = records.iter().find(|r| r["check"] == check).unwrap();
        assert_eq!(r["pass"], false);
        assert!(r["error"].as_str().unwrap().contains("coincide"), "{r}");
    }
    // Unrelated checks still run.
    assert!(records.iter().any(|r| r["check"] == "diagram-counts" && r["pass"] == true));
    assert!(report["summary"]["errors"].as_u64().unwrap() >= 2);
}

#[test]
fn identical_runs_are_identical_apart_from_the_timestamp() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "det.json",
        json!({"N": 3, "M": 2, "Q": "3/2", "instances": 3, "seed": 17,
               "checks": ["theorem-quotient", "pluecker", "andreev", "schur-expansion"], "schur_cutoff": 4}),
    );
    let outs: Vec<String> = (0..2)
        .map(|k| {
            let path = dir.path().join(format!("r{k}.json"));
            let out = tlkp(&["verify", "--config", &cfg, "--out", path.to_str().unwrap()]);
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
            std::fs::read_to_string(&path).unwrap()
        })
        .collect();
    let strip = |s: &str| s.lines().filter(|l| !l.contains("\"generated_at\"")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&outs[0]), strip(&outs[1]));
    let report: Value = serde_json::from_str(&outs[0]).unwrap();
    assert_eq!(report["config"]["seed"], 17);
    assert!(report["records"].as_array().unwrap().iter().all(|r| r["pass"] == true && r["seed"] == 17));
}

#[test]
fn invalid_config_lists_offending_keys() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "bad.json", json!({"N": "three", "Q": "2", "colour": 1, "checks": ["nope"]}));
    let out = tlkp(&["verify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for key in ["N:", "M:", "colour", "nope"] {
        assert!(err.contains(key), "{key} missing from {err}");
    }
}

#[test]
fn spin_one_runs_in_the_quadratic_field() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "s1.json", json!({"N": 3, "M": 2, "Q": "2", "spin_twice": 2, "instances": 3}));
    let out = tlkp(&["kernel-vs-tau", "--config", &cfg, "--field", "quadratic"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["config"]["field_mode"], "quadratic");
    assert_eq!(report["summary"]["passed"], 3);
    assert!(report["records"].as_array().unwrap().iter().all(|r| r["residual"] == "0"));
    // The same chain has no rational q.
    let out = tlkp(&["kernel-vs-tau", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn float_mode_meets_the_tolerance() {
    let out = tlkp(&["pluecker", "--field", "float", "--seed", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let out = tlkp(&["kernel-vs-tau", "--field", "float", "--text"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("5 of 5 passed"));
}

#[test]
fn schur_expand_emits_coefficient_maps() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "sx.json", json!({"N": 2, "M": 1, "Q": "2", "schur_cutoff": 3}));
    let out = tlkp(&["schur-expand", "--config", &cfg]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    for key in ["tau1", "tau2", "kernel"] {
        let map = SchurCoeffMap::<Rational>::from_json(&v[key], 1, 3).unwrap();
        assert!(map.entries().all(|(l, _)| l.len() <= 1 && l.size() <= 3));
    }
    let tau2 = SchurCoeffMap::<Rational>::from_json(&v["tau2"], 1, 3).unwrap();
    assert!(!tau2.is_empty());
}

#[test]
fn solve_bethe_from_explicit_guesses() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "b.json",
        json!({"N": 2, "M": 1, "Q": "-2", "guesses": [["(0.3,0.6)"], ["(0.5,0.5)"], ["(-0.2,0.7)"]]}),
    );
    let out = tlkp(&["solve-bethe", "--config", &cfg]);
    assert!(out.status.success());
    let items = stdout_json(&out);
    let solved: Vec<&Value> = items.as_array().unwrap().iter().filter(|s| s["solution"]["converged"] == true).collect();
    assert!(!solved.is_empty());
    for s in solved {
        assert!(s["solution"]["residual"].as_f64().unwrap() < 1e-12);
    }
    let colliding = write_config(&dir, "c.json", json!({"N": 3, "M": 2, "Q": "-2", "guesses": [["(0.3,0.6)", "(0.3,0.6)"]]}));
    let out = tlkp(&["solve-bethe", "--config", &colliding]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_json(&out)[0]["error"].is_string());
}

#[test]
fn count_diagrams_text_table() {
    let out = tlkp(&["count-diagrams", "--m", "2", "--lambda1-max", "7", "--text"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["7", "10", "10", "yes"]), "{text}");
}

#[test]
fn schemas_are_published() {
    for which in ["config", "report"] {
        let out = tlkp(&["schema", which]);
        assert!(out.status.success());
        let _: Value = stdout_json(&out);
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema");
    assert!(dir.join("config.schema.json").exists() && dir.join("report.schema.json").exists());
}

//! End-to-end runs of the `tecost` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tecost(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tecost"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = tecost(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).expect("valid json")
}

/// 0.5·I on C², a well-formed but incomplete channel.
const HALF_IDENTITY: &str = r#"{"n":2,"d":1,"kraus":[[[[0.5,0.0],[0.0,0.0]],[[0.0,0.0],[0.5,0.0]]]]}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn verify_passes_on_families() {
    for spec in [
        "depolarizing:n=3,q=0.2",
        "dephasing:n=2",
        "bitflip",
        "phase:theta=0.7",
        "random:n=2,d=3,seed=11",
    ] {
        let out = tecost(&["--restarts", "8", "verify", "--family", spec]);
        assert_eq!(code(&out), 0, "{spec}: {}", stdout(&out));
        assert!(stdout(&out).contains("PASS"));
    }
}

#[test]
fn verify_exits_one_when_the_gap_exceeds_tolerance() {
    let out = tecost(&[
        "--iters",
        "1",
        "--restarts",
        "1",
        "verify",
        "--family",
        "random:n=3,d=2,seed=5",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = write(dir.path(), "bad.json", "{not json");
    let incomplete = write(dir.path(), "half.json", HALF_IDENTITY);
    let cases: Vec<Vec<&str>> = vec![
        vec!["tecost", "--family", "nope:n=2"],
        vec!["tecost", "--family", "depolarizing:n=2,q=2"],
        vec!["fmin", "--file", "/nonexistent/channel.json"],
        vec!["fmin", "--file", &garbage],
        vec!["verify", "--file", &incomplete],
        vec!["tecost"],
        vec!["tecost", "--family", "bitflip", "--file", &garbage],
        vec!["--restarts", "0", "tecost", "--family", "bitflip"],
        vec!["teur", "orthogonalization", "--e-max", "1", "--e-min", "2"],
        vec!["teur", "chau", "--epsilon", "0"],
        vec!["teur", "check", "--energies", "0,1", "--state", "1", "--time", "1"],
        vec!["sweep-depolarizing", "--n", "1"],
        vec!["bogus-command"],
    ];
    for args in cases {
        let out = tecost(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn incomplete_channels_need_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let half = write(dir.path(), "half.json", HALF_IDENTITY);
    assert_eq!(code(&tecost(&["tecost", "--file", &half, "--allow-incomplete"])), 0);
    let out = tecost(&["validate", &half]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("false"));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&tecost(&["--help"])), 0);
    assert_eq!(code(&tecost(&["--version"])), 0);
    assert_eq!(code(&tecost(&["teur", "--help"])), 0);
}

#[test]
fn json_envelope_and_fields() {
    let v = json(&["verify", "--family", "depolarizing:n=2,q=0.5"]);
    assert_eq!(v["command"], "verify");
    assert_eq!(v["seed"], 0);
    assert_eq!(v["input"], "depolarizing:n=2,q=0.5");
    let r = &v["result"];
    for key in [
        "fmin_value",
        "cos_cost",
        "clamped_cos",
        "abs_gap",
        "tolerance",
        "pass",
        "one_sided_ok",
        "regime",
        "certificate_gap",
    ] {
        assert!(!r[key].is_null(), "missing {key}");
    }
    assert_eq!(r["pass"], true);
    assert_eq!(r["regime"], "Positive");
    assert!((r["fmin_value"].as_f64().unwrap() - 0.625f64.sqrt()).abs() < 1e-7);

    let t = json(&["tecost", "--family", "dephasing:n=2"]);
    let angle = t["result"]["angle"].as_f64().unwrap();
    assert!((angle - std::f64::consts::FRAC_PI_4).abs() < 1e-7);
    assert_eq!(t["result"]["optimal_v"].as_array().unwrap().len(), 2);

    let f = json(&["fmin", "--family", "dephasing:n=2"]);
    assert!((f["result"]["value"].as_f64().unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-7);
    assert_eq!(f["result"]["minimizer"]["amplitudes"].as_array().unwrap().len(), 4);
}

#[test]
fn bitflip_is_a_boundary_case() {
    let v = json(&["verify", "--family", "bitflip"]);
    assert_eq!(v["result"]["regime"], "Boundary");
    assert!(v["result"]["fmin_value"].as_f64().unwrap().abs() < 1e-6);
}

#[test]
fn written_channels_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dep.json").display().to_string();
    assert_eq!(
        code(&tecost(&[
            "--out",
            &path,
            "write-channel",
            "--family",
            "depolarizing:n=3,q=-0.1"
        ])),
        0
    );
    let val = tecost(&["validate", &path]);
    assert_eq!(code(&val), 0, "{}", stdout(&val));
    let from_file = json(&["tecost", "--file", &path]);
    let from_family = json(&["tecost", "--family", "depolarizing:n=3,q=-0.1"]);
    let a = from_file["result"]["angle"].as_f64().unwrap();
    let b = from_family["result"]["angle"].as_f64().unwrap();
    assert!((a - b).abs() < 1e-9, "{a} vs {b}");
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.cfg",
        "# defaults\nseed = 9\nformat = json\ngap-tol = 1e-9\n",
    );
    let out = tecost(&["--config", &cfg, "verify", "--family", "dephasing:n=2"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["seed"], 9);
    assert_eq!(v["result"]["tolerance"], 1e-9);
    let out = tecost(&["--config", &cfg, "--seed", "3", "verify", "--family", "dephasing:n=2"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["seed"], 3);
    let bad = write(dir.path(), "bad.cfg", "colour = blue\n");
    assert_eq!(code(&tecost(&["--config", &bad, "tecost", "--family", "bitflip"])), 2);
}

#[test]
fn random_suite_csv_is_reproducible() {
    let args = [
        "--format",
        "csv",
        "--seed",
        "42",
        "random-suite",
        "--n",
        "2,3",
        "--d",
        "1,2",
        "--trials",
        "2",
    ];
    let a = tecost(&args);
    let b = tecost(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    let mut reader = csv::Reader::from_reader(a.stdout.as_slice());
    assert_eq!(reader.records().count(), 8);
    let other = tecost(&[
        "--format",
        "csv",
        "--seed",
        "43",
        "random-suite",
        "--n",
        "2,3",
        "--d",
        "1,2",
        "--trials",
        "2",
    ]);
    assert_ne!(stdout(&a), stdout(&other));
}

#[test]
fn depolarizing_sweep_matches_closed_forms() {
    let v = json(&["sweep-depolarizing", "--n", "2", "--points", "5"]);
    let rows = v["result"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for r in rows {
        assert!(r["fmin_gap"].as_f64().unwrap() <= 1e-7);
        assert!(r["cost_gap"].as_f64().unwrap() <= 1e-7);
        assert!(r["no_entanglement_fidelity"].as_f64().unwrap() >= r["fmin_closed"].as_f64().unwrap() - 1e-12);
    }
    let explicit = json(&["sweep-depolarizing", "--n", "3", "--q", "-0.125,0,1"]);
    assert_eq!(explicit["result"].as_array().unwrap().len(), 3);
}

#[test]
fn teur_calculators() {
    let ortho = json(&["teur", "orthogonalization", "--spread", "2"]);
    assert!((ortho["result"]["time"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    let fast = json(&["teur", "fastest", "--fidelity", "0", "--e-max", "1", "--e-min", "-1"]);
    assert!((fast["result"]["time"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    let chau = json(&["teur", "chau", "--epsilon", "1"]);
    assert!((chau["result"]["chau_time"].as_f64().unwrap() - 1.380049).abs() < 1e-5);
    let product = json(&["--hbar", "2", "teur", "product", "--spread", "1", "--time", "4"]);
    assert!((product["result"]["cost"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let out = tecost(&[
        "teur",
        "check",
        "--energies",
        "0,1",
        "--state",
        "1,0:1",
        "--time",
        "3.14159",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("bound_satisfied  true"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv").display().to_string();
    let out = tecost(&["--format", "csv", "--out", &path, "tecost", "--family", "dephasing:n=2"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().count() == 2, "{text}");
}

use std::process::{Command, Output};

use serde_json::Value;

fn probe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_junta-probe")).args(args).env_remove("JUNTA_PROBE_THREADS").output().unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = probe(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn error_of(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stderr).expect("structured error on stderr");
    v["error"].clone()
}

const REPORT_KEYS: [&str; 17] = [
    "schema_version", "estimator", "alpha", "mass", "query_count", "k_prime", "best_set", "c_tilde",
    "candidates_examined", "branch_leaves", "phase_diagnostics", "failed_stage", "error", "seed", "config",
    "truth", "wall_time_ms",
];

#[test]
fn estimate_dist_report_has_schema_and_truth() {
    let r = json_ok(&["estimate-dist", "--n", "12", "--k", "2", "--plant", "--gamma", "0.05", "--eps", "0.15", "--seed", "7"]);
    let obj = r.as_object().unwrap();
    for key in REPORT_KEYS {
        assert!(obj.contains_key(key), "missing {key}");
    }
    assert_eq!(obj.len(), REPORT_KEYS.len());
    assert_eq!(r["schema_version"], 1);
    let phases: Vec<&str> = r["phase_diagnostics"].as_array().unwrap().iter().map(|p| p["phase"].as_str().unwrap()).collect();
    assert_eq!(phases, ["provider", "reduce", "branch", "phase_two"]);
    let per_phase: u64 = r["phase_diagnostics"].as_array().unwrap().iter().map(|p| p["queries"].as_u64().unwrap()).sum();
    assert_eq!(per_phase, r["query_count"].as_u64().unwrap());
    let err = r["truth"]["abs_error"].as_f64().unwrap();
    let alpha = r["alpha"].as_f64().unwrap();
    assert!((alpha - r["truth"]["distance"].as_f64().unwrap()).abs() - err < 1e-12);
    assert!(err <= 0.15);
    assert!(r["candidates_examined"].as_u64().unwrap() > 0);
}

#[test]
fn reports_are_deterministic_modulo_wall_time() {
    let args = ["relaxed-estimate", "--n", "10", "--k", "2", "--plant", "--gamma", "0.1", "--eps", "0.2", "--seed", "3"];
    let strip = |mut v: Value| {
        v["wall_time_ms"] = Value::Null;
        v
    };
    let a = strip(json_ok(&args));
    let b = strip(json_ok(&args));
    assert_eq!(a, b);
    let mut threaded = vec!["--threads", "2"];
    threaded.extend(args);
    assert_eq!(strip(json_ok(&threaded)), a);
}

#[test]
fn relaxed_on_constant_is_zero() {
    let r = json_ok(&["relaxed-estimate", "--n", "8", "--k", "2", "--kind", "constant", "--eps", "0.2"]);
    assert!(r["alpha"].as_f64().unwrap() < 0.05);
    assert_eq!(r["k_prime"], 0);
}

#[test]
fn mass_reports_mass_not_alpha() {
    let r = json_ok(&["mass", "--n", "8", "--k", "2", "--kind", "parity:2,5", "--eps", "0.2", "--seed", "1"]);
    assert!(r["alpha"].is_null());
    assert!((r["mass"].as_f64().unwrap() - 1.0).abs() <= 0.2);
    assert_eq!(r["truth"]["subset_mass"], 1.0);
}

#[test]
fn gen_fourier_truth_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.txt");
    let t = table.to_str().unwrap();
    assert!(probe(&["gen", "--n", "5", "--kind", "majority:3", "--out", t]).status.success());
    let text = std::fs::read_to_string(&table).unwrap();
    assert!(text.starts_with("n=5\n"));

    let csv = String::from_utf8(probe(&["fourier", "--in", t]).stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "mask,coefficient");
    assert_eq!(lines.len(), 1 + 32 + 1);
    assert_eq!(lines[2], "1,0.5");
    assert_eq!(*lines.last().unwrap(), "# sum_sq,1");

    let truth_path = dir.path().join("truth.json");
    assert!(probe(&["truth", "--in", t, "--k", "3", "--out", truth_path.to_str().unwrap()]).status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(truth_path).unwrap()).unwrap();
    assert_eq!(v["distance"], 0.0);
    assert_eq!(v["best_coords"], serde_json::json!([1, 2, 3]));
}

#[test]
fn prune_reports_lambdas_and_reduction() {
    let r = json_ok(&["prune", "--n", "8", "--k", "1", "--kind", "dictator:3", "--eps", "0.3", "--restrictions", "800"]);
    let est: Vec<f64> = r["lambda"]["estimates"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let exact: Vec<f64> = r["lambda"]["exact"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(est.len(), 8);
    assert!((est[2] - exact[2]).abs() < 0.1);
    assert_eq!(r["reduce"]["kept_coords"], serde_json::json!([3]));
}

#[test]
fn invalid_config_exits_2() {
    let out = probe(&["estimate-dist", "--n", "8", "--k", "2", "--eps", "0.7"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_of(&out)["kind"], "invalid_config");

    let out = probe(&["estimate-dist", "--n", "8", "--eps", "0.1", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_of(&out)["exit_code"], 2);

    let out = probe(&["gen", "--n", "4", "--kind", "dictator:9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_instances_exit_3() {
    let out = probe(&["truth", "--n", "18", "--k", "2", "--kind", "dictator:1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_of(&out)["kind"], "unsupported");
    let out = probe(&["estimate-dist", "--n", "80", "--k", "2", "--eps", "0.2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn probabilistic_failure_is_reported_not_raised() {
    // an absurdly small sampler budget makes the consistent sampler give up
    let out = probe(&["relaxed-estimate", "--n", "10", "--k", "3", "--kind", "majority:5", "--eps", "0.2", "--rounds", "4"]);
    assert!(out.status.success());
    let r = json_ok(&["relaxed-estimate", "--n", "10", "--k", "3", "--kind", "majority:5", "--eps", "0.2", "--sampler-constant", "1e-9"]);
    assert_eq!(r["failed_stage"], "reduce");
    assert!(r["alpha"].is_null());
    assert!(r["error"].as_str().unwrap().contains("exhausted"));
}

#[test]
fn threads_env_var_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_junta-probe"))
        .args(["relaxed-estimate", "--n", "8", "--k", "1", "--kind", "dictator:1", "--eps", "0.2"])
        .env("JUNTA_PROBE_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "zero threads is rejected, so the variable was read");
}

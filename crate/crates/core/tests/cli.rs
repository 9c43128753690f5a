use std::path::Path;
use std::process::{Command, Output};

use gauge_color::code::CheckMatrices;
use gauge_color::lattice::ColoredComplex;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gauge-color"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout))
    })
}

#[test]
fn build_writes_reloadable_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["build", "--family", "3d", "--n", "1", "--d", "1", "--e", "2", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["qubits"], 15);
    assert_eq!(v["stabilizer_rank"], 14);

    let k = ColoredComplex::load(&dir.path().join("lattice.json")).unwrap();
    assert_eq!(k.num_qubits(), 15);
    let m = CheckMatrices::read(dir.path()).unwrap();
    assert_eq!(m.n, 15);
    let s = gauge_color::pauli::GeneratorSet::new(m.n, m.stabilizer).unwrap();
    assert_eq!(s.rank(), v["stabilizer_rank"].as_u64().unwrap() as usize);
    assert!(Path::new(out).join("summary.json").exists());
}

#[test]
fn build_2d_weight_bound() {
    let v = json(&run(&["build", "--family", "2d", "--n", "2", "--d", "1", "--e", "1"]));
    assert_eq!(v["qubits"], 19);
    assert_eq!(v["max_weight"], 6);
}

#[test]
fn invalid_parameters_exit_two() {
    let o = run(&["build", "--family", "3d", "--n", "1", "--d", "2", "--e", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("d + e ≤ D"));

    let o = run(&["plan", "--family", "3d", "--d", "1", "--e", "1", "--gate-level", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("D ≥ n·ē"));

    assert_eq!(run(&["build", "--family", "4d"]).status.code(), Some(2));
    assert_eq!(run(&["demo-universal", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["schedule", "--d", "1", "--e", "2", "--dprime", "1"]).status.code(), Some(2));
}

#[test]
fn verify_passes_and_reports_hadamard() {
    let o = run(&["verify", "--family", "3d", "--d", "1", "--e", "1", "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let h = v["report"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["check_name"] == "clifford.hadamard_transversal")
        .unwrap();
    assert_eq!(h["pass"], true);
    assert_eq!(h["witness"], Value::Null);
}

#[test]
fn verify_corrupted_lattice_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["build", "--family", "2d", "--n", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let good = dir.path().join("lattice.json");
    assert_eq!(run(&["verify", "--family", "2d", "--lattice", good.to_str().unwrap()]).status.code(), Some(0));

    let text = std::fs::read_to_string(&good).unwrap();
    let mut lattice: Value = serde_json::from_str(&text).unwrap();
    lattice["vertices"][0]["color"] = lattice["vertices"][1]["color"].clone();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, lattice.to_string()).unwrap();
    let o = run(&["verify", "--lattice", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["pass"], false);
    assert!(v["report"][0]["witness"].as_str().unwrap().contains("proper_coloring"));
}

#[test]
fn plan_json_shape() {
    let o = run(&["plan", "--family", "3d", "--d", "1", "--e", "2", "--gate-level", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["plan"]["n"], 3);
    assert_eq!(v["plan"]["k"], 7);
    assert_eq!(v["plan"]["T"], serde_json::json!([]));
    assert_eq!(v["plan"]["exponents"].as_array().unwrap().len(), 15);
    assert!(v["explicit_plan"]["k"].is_u64());

    let v = json(&run(&["plan", "--family", "2d", "--gate-level", "2"]));
    assert_eq!(v["plan"]["k"], 3);
}

#[test]
fn gaugefix_and_schedule() {
    let o = run(&["gaugefix", "--d", "1", "--e", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let m = v["plan"]["measurements"].as_array().unwrap().len();
    assert_eq!(m, 6);
    assert_eq!(v["plan"]["corrections"].as_array().unwrap().len(), m);
    assert_eq!(v["plan"]["pairing_matrix"].as_array().unwrap().len(), m);
    for e in v["run"]["stabilizer_expectations"].as_array().unwrap() {
        assert!((e.as_f64().unwrap() - 1.0).abs() < 1e-10);
    }

    let v = json(&run(&["schedule", "--d", "1", "--e", "1", "--dprime", "2"]));
    let rounds = v["schedules"][0]["sectors"][0]["rounds"].as_array().unwrap();
    assert_eq!(rounds.len(), 2);
}

#[test]
fn demo_seeds_differ_only_in_record() {
    let a = json(&run(&["demo-universal", "--seed", "1"]));
    let b = json(&run(&["demo-universal", "--seed", "2"]));
    assert_eq!(a["pass"], true);
    assert_eq!(b["pass"], true);
    assert_eq!(a["logical_phase_over_pi"], b["logical_phase_over_pi"]);
    assert_ne!(a["record"], b["record"]);
    assert!(a["run"]["fidelity"].as_f64().unwrap() >= 1.0 - 1e-10);
    assert_eq!(a, json(&run(&["demo-universal", "--seed", "1"])));
}

#[test]
fn demo_without_correction_fails() {
    // Seed 1 has at least one −1 outcome.
    let o = run(&["demo-universal", "--seed", "1", "--skip-correction"]);
    let v = json(&o);
    assert!(v["record"]["outcomes"].as_array().unwrap().iter().any(|p| p[1] == -1));
    assert_eq!(v["all_stabilizers_plus_one"], false);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn text_format_and_export() {
    let o = run(&["verify", "--family", "2d", "--format", "text"]);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.lines().any(|l| l.starts_with("structure.centralizer_formula") && l.contains("PASS")));

    let dir = tempfile::tempdir().unwrap();
    let o = run(&["export", "--family", "3d", "--e", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for f in ["lattice.json", "stabilizer.txt", "gauge.txt", "logicals.txt", "tset.json", "gate_plan.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

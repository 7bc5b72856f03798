use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-cohom")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn klein_bottle_cohomology_as_json() {
    let out = run(&["--format", "json", "cohomology", &data("square.json"), &data("klein.lambda.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["coeff"], "Q");
    assert_eq!(v["complete"], true);
}

#[test]
fn torus_ring_over_rationals() {
    let out = run(&["ring", &data("square.json"), &data("torus.lambda.json"), "--coeff", "Q"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("dims [1, 2, 1]"));
}

#[test]
fn ring_over_integers_is_refused() {
    let out = run(&["ring", &data("square.json"), &data("torus.lambda.json"), "--coeff", "Z"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn singular_pair_is_reported() {
    let dir = std::env::temp_dir().join(format!("toric-cohom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let lambda = dir.join("singular.lambda.json");
    std::fs::write(&lambda, r#"{"rows": [[1, 1, 1, 1], [0, 0, 0, 0]]}"#).unwrap();
    let out = run(&["check", &data("square.json"), lambda.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn full_hunt_needs_confirmation() {
    let out = run(&["torsion-hunt", "3", "--mode", "full"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_arguments_exit_with_usage_code() {
    assert_eq!(run(&["torsion-hunt", "three"]).status.code(), Some(2));
}

#[test]
fn three_torsion_hunt_as_json() {
    let out = run(&["--format", "json", "torsion-hunt", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["torsion_present"], true);
    assert_eq!(v["mode"], "targeted");
}

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bezout-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn bezout(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bezout"))
        .args(args)
        .env("BEZOUT_THREADS", "2")
        .output()
        .unwrap()
}

fn report(path: &PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn decide_writes_verdict() {
    let out = scratch("decide.json");
    let run = bezout(&[
        "decide",
        "--input",
        fixture("no-common-zeros.json").to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let r = report(&out);
    assert_eq!(r["verdict"]["outcome"], "no_common_zeros");
    assert!(r["zero_sets"].is_null());
    assert_eq!(r["exit_code"], 0);
    assert!(String::from_utf8_lossy(&run.stdout).contains("NoCommonZeros"));
}

#[test]
fn verify_with_overrides() {
    let out = scratch("verify.json");
    let run = bezout(&[
        "verify",
        "--input",
        fixture("coincidence.json").to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--rect",
        "-13,13,-2,2",
        "--tol",
        "1e-11",
        "--grid",
        "16",
    ]);
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let r = report(&out);
    assert_eq!(r["verdict"]["outcome"], "zero_sets_coincide");
    assert_eq!(r["zero_sets"]["f1"]["rect"]["re_min"], -13.0);
    assert_eq!(r["zero_sets"]["f1"]["total_count"], 4);
    assert_eq!(r["operator"]["grid_sizes"], serde_json::json!([16, 32]));
    assert_eq!(r["provenance"]["spec_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn malformed_input_exits_one() {
    let out = scratch("bad.json");
    let run = bezout(&[
        "decide",
        "--input",
        fixture("malformed-rational.json").to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&run.stderr).contains("psi1[1]"));
    let missing = bezout(&[
        "decide",
        "--input",
        "/nonexistent/spec.json",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn zero_mass_exits_two() {
    let out = scratch("mass.json");
    let run = bezout(&[
        "decide",
        "--input",
        fixture("zero-mass.json").to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stdout).contains("zero"));
}

#[test]
fn emit_grid_rows() {
    let csv = scratch("grid.csv");
    let run = bezout(&[
        "emit-grid",
        "--input",
        fixture("no-common-zeros.json").to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,absF1,absF21"));
    assert_eq!(lines.count(), 32 * 32);
}

#[test]
fn bad_rect_is_rejected() {
    let out = scratch("rect.json");
    let run = bezout(&[
        "verify",
        "--input",
        fixture("coincidence.json").to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--rect",
        "1,2,3",
    ]);
    assert_ne!(run.status.code(), Some(0));
    let flipped = bezout(&[
        "verify",
        "--input",
        fixture("coincidence.json").to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--rect",
        "2,1,-1,1",
    ]);
    assert_eq!(flipped.status.code(), Some(1));
}

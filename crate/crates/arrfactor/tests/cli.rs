//! End-to-end tests of the binary: exit codes, verdict JSON, and the
//! fresh-process re-verification of every certificate kind.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn arrfactor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arrfactor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn scratch_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("arrfactor-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn info_reports_the_lattice_profile() {
    let out = arrfactor(&["info", "--catalog", "G(3,3,3)"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["hyperplanes"], 9);
    assert_eq!(v["rank"], 3);
    assert_eq!(v["integer_roots"], serde_json::json!([1, 4, 4]));
}

#[test]
fn check_is_deterministic_and_finds_the_quoted_partition() {
    let first = arrfactor(&["check", "nice", "--catalog", "G(3,3,3)"]);
    let second = arrfactor(&["check", "nice", "--catalog", "G(3,3,3)"]);
    assert_eq!(first.status.code(), Some(0));
    let mut v = stdout_json(&first);
    let mut w = stdout_json(&second);
    v["elapsed_ms"] = Value::Null;
    w["elapsed_ms"] = Value::Null;
    assert_eq!(v, w, "identical verdicts up to timing");
    assert_eq!(v["answer"], "yes");
    assert_eq!(
        v["certificate"]["blocks"],
        serde_json::json!([[0], [1, 2, 3, 6], [4, 5, 7, 8]])
    );
}

#[test]
fn exit_codes_cover_no_usage_and_undecided() {
    assert_eq!(
        arrfactor(&["check", "nice", "--catalog", "H3"]).status.code(),
        Some(1)
    );
    assert_eq!(
        arrfactor(&["check", "nice", "--catalog", "G(9"]).status.code(),
        Some(2)
    );
    assert_eq!(arrfactor(&["check", "nice"]).status.code(), Some(2));
    assert_eq!(
        arrfactor(&["check", "indfactored", "--catalog", "B:3", "--budget", "1"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn thread_cap_is_validated() {
    let bad = Command::new(env!("CARGO_BIN_EXE_arrfactor"))
        .args(["info", "--catalog", "H3"])
        .env("ARRFACTOR_THREADS", "0")
        .output()
        .expect("binary runs");
    assert_eq!(bad.status.code(), Some(2));
    let good = Command::new(env!("CARGO_BIN_EXE_arrfactor"))
        .args(["info", "--catalog", "H3"])
        .env("ARRFACTOR_THREADS", "8")
        .output()
        .expect("binary runs");
    assert_eq!(good.status.code(), Some(0));
}

#[test]
fn partition_flag_verifies_instead_of_searching() {
    let good = scratch_path("good-partition.json");
    std::fs::write(&good, r#"{"blocks": [[0], [1,2,3,6], [4,5,7,8]]}"#).unwrap();
    let out = arrfactor(&[
        "check",
        "nice",
        "--catalog",
        "G(3,3,3)",
        "--partition",
        good.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let bad = scratch_path("bad-partition.json");
    std::fs::write(&bad, r#"[[0,1,2],[3,4,5],[6,7,8]]"#).unwrap();
    let out = arrfactor(&[
        "check",
        "nice",
        "--catalog",
        "G(3,3,3)",
        "--partition",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["answer"], "no");
    assert!(v["detail"].as_str().unwrap().contains("singleton"));
}

fn roundtrip(property: &str, catalog: &str, scratch: &str) {
    let search = arrfactor(&["check", property, "--catalog", catalog]);
    assert_eq!(search.status.code(), Some(0), "{property} on {catalog}");
    let verdict = stdout_json(&search);
    let path = scratch_path(scratch);
    std::fs::write(&path, verdict["certificate"].to_string()).unwrap();
    let verify = arrfactor(&[
        "check",
        property,
        "--catalog",
        catalog,
        "--certificate",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        verify.status.code(),
        Some(0),
        "{property} certificate for {catalog} re-verifies"
    );
}

#[test]
fn certificates_reverify_in_fresh_processes() {
    roundtrip("nice", "G(4,4,3)", "nice-cert.json");
    roundtrip("supersolvable", "braid:4", "ss-cert.json");
    roundtrip("indfactored", "B:3", "ifac-cert.json");
    roundtrip("indfree", "braid:4", "ifree-cert.json");
    roundtrip("hereditary-nice", "G(3,3,3)", "hered-cert.json");
}

#[test]
fn tampered_certificates_are_rejected() {
    let search = arrfactor(&["check", "indfree", "--catalog", "braid:4"]);
    let verdict = stdout_json(&search);
    let mut cert = verdict["certificate"].clone();
    cert["exponents"] = serde_json::json!([0, 1, 2, 4]);
    let path = scratch_path("tampered-cert.json");
    std::fs::write(&path, cert.to_string()).unwrap();
    let verify = arrfactor(&[
        "check",
        "indfree",
        "--catalog",
        "braid:4",
        "--certificate",
        path.to_str().unwrap(),
    ]);
    assert_eq!(verify.status.code(), Some(1));
}

#[test]
fn export_round_trips_through_a_file() {
    let exported = arrfactor(&["export", "--catalog", "G(3,3,3)"]);
    assert_eq!(exported.status.code(), Some(0));
    let path = scratch_path("exported.arr");
    std::fs::write(&path, &exported.stdout).unwrap();

    let from_file = arrfactor(&["check", "nice", "--file", path.to_str().unwrap()]);
    assert_eq!(from_file.status.code(), Some(0));
    let from_catalog = arrfactor(&["check", "nice", "--catalog", "G(3,3,3)"]);
    assert_eq!(
        stdout_json(&from_file)["fingerprint"],
        stdout_json(&from_catalog)["fingerprint"],
        "file and catalog runs agree on the fingerprint"
    );
}

#[test]
fn verify_runs_a_single_suite_id() {
    let out = arrfactor(&["verify", "--only", "grr3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS grr3"), "got: {text}");

    assert_eq!(
        arrfactor(&["verify", "--only", "bogus"]).status.code(),
        Some(2)
    );
}

#[test]
fn indfactored_no_is_reported_for_g333() {
    let out = arrfactor(&["check", "indfactored", "--catalog", "G(3,3,3)"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["answer"], "no");
    assert_eq!(v["certificate"], Value::Null);
}

//! End-to-end tests of the `iwahori` binary: exit codes, JSON shape, DOT
//! output, and byte-identical determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_iwahori"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn temp_datum(args: &[&str]) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("iwahori-test-{}-{}.json", std::process::id(), args.join("_")));
    let mut full = vec!["datum"];
    full.extend_from_slice(args);
    full.push("--out");
    let s = path.to_str().unwrap().to_string();
    let out = bin().args(&full).arg(&s).output().expect("datum runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    path
}

#[test]
fn adm_counts_match_known_values() {
    let gl2 = temp_datum(&["--kind", "gl2"]);
    let out = run(&["adm", "--datum", gl2.to_str().unwrap(), "--mu", "1,0"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["count"], 3);

    let gl3 = temp_datum(&["--kind", "gl3"]);
    let out = run(&["adm", "--datum", gl3.to_str().unwrap(), "--mu", "1,0,0"]);
    assert_eq!(stdout_json(&out)["count"], 7);

    // Very special projection of μ = (2,0) has two cosets.
    let out = run(&[
        "adm",
        "--datum",
        gl2.to_str().unwrap(),
        "--mu",
        "2,0",
        "--parahoric",
        "very-special",
    ]);
    assert_eq!(stdout_json(&out)["count"], 2);
    let out = run(&[
        "adm",
        "--datum",
        gl2.to_str().unwrap(),
        "--mu",
        "2,0",
        "--parahoric",
        "s1",
    ]);
    assert_eq!(stdout_json(&out)["count"], 2);
}

#[test]
fn verify_loop_case3_q3() {
    let out = run(&["verify-loop", "--case", "3", "--q", "3"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["checked"], 2);
    assert!(v["first_failure"].is_null());
}

#[test]
fn verify_loop_parallel_matches_serial() {
    let serial = run(&["verify-loop", "--case", "2", "--q", "7"]);
    let parallel = run(&["--jobs", "3", "verify-loop", "--case", "2", "--q", "7"]);
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn deterministic_byte_identical_output() {
    let gl3 = temp_datum(&["--kind", "gl3", "--unitary"]);
    for sub in [
        vec!["adm", "--datum", gl3.to_str().unwrap(), "--mu", "1,1,0"],
        vec!["bg", "--datum", gl3.to_str().unwrap(), "--mu", "1,0,0"],
        vec!["straight", "--datum", gl3.to_str().unwrap(), "--mu", "1,0,0"],
        vec!["kr-poset", "--datum", gl3.to_str().unwrap(), "--mu", "2,1,0"],
    ] {
        let a = run(&sub);
        let b = run(&sub);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "output of {sub:?} is not deterministic");
    }
}

#[test]
fn mu_ordinary_unitary_gl3() {
    let gl3u = temp_datum(&["--kind", "gl3", "--unitary"]);
    let out = run(&["mu-ordinary", "--datum", gl3u.to_str().unwrap(), "--mu", "1,0,0"]);
    let v = stdout_json(&out);
    assert_eq!(v["present"], true);
    assert_eq!(v["point"]["newton"][0], "1/2");
    assert_eq!(v["point"]["newton"][2], "-1/2");
}

#[test]
fn kr_poset_dot_output() {
    let gl2 = temp_datum(&["--kind", "gl2"]);
    let out = run(&["kr-poset", "--datum", gl2.to_str().unwrap(), "--mu", "2,0", "--dot"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("digraph"));
    assert!(text.contains("\"1,1\" -> \"2,0\";"));
}

#[test]
fn chain_output() {
    let gl3 = temp_datum(&["--kind", "gl3"]);
    let out = run(&[
        "chain",
        "--datum",
        gl3.to_str().unwrap(),
        "--mu",
        "2,1,0",
        "--from",
        "1,1,1",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["steps"], 1);
    assert_eq!(v["chain"][1], serde_json::json!([2, 1, 0]));
}

#[test]
fn usage_error_is_machine_parsable_exit_2() {
    let out = run(&["adm", "--mu", "1,0"]); // missing --datum
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert!(v["error"].is_string());

    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_json(&out)["error"].is_string());
}

#[test]
fn domain_error_is_machine_parsable_exit_1() {
    let gl2 = temp_datum(&["--kind", "gl2"]);
    // Non-dominant μ is a domain error.
    let out = run(&["adm", "--datum", gl2.to_str().unwrap(), "--mu", "0,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_json(&out)["error"].is_string());
    // Case 3 over the unramified extension is rejected.
    let out = run(&["verify-loop", "--case", "3", "--q", "3", "--unramified"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn restricted_unitary_datum_roundtrips() {
    let path = temp_datum(&["--kind", "gl3", "--unitary", "--res", "2"]);
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["lattice_rank"], 6);
    assert!(v["sigma"]["linear_part"].is_array());
    // The file loads back and the twist has order 4 on the lattice.
    let out = run(&["newton", "--datum", path.to_str().unwrap(), "--translation", "1,0,0,0,0,0"]);
    let parsed = stdout_json(&out);
    assert_eq!(parsed["nu_bar"][0], "1/4");
}
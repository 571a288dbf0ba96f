//! End-to-end tests of the `valset` binary: exit codes, config precedence,
//! artifact schemas, and byte-level determinism across worker counts.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn valset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valset"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let out_dir = dir.to_str().expect("utf-8 temp path");
    let mut full = args.to_vec();
    full.extend_from_slice(&["--out", out_dir]);
    valset(&full)
}

fn summary(dir: &Path) -> Value {
    let text = std::fs::read_to_string(dir.join("summary.json")).expect("summary exists");
    serde_json::from_str(&text).expect("summary is JSON")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn usage_problems_exit_2_and_help_exits_0() {
    assert_eq!(exit_code(&valset(&["--help"])), 0);
    assert_eq!(exit_code(&valset(&["stats", "--nope"])), 2);
    assert_eq!(exit_code(&valset(&["stats", "--qmax", "100"])), 2);
    assert_eq!(
        exit_code(&valset(&["avg", "--poly", "x^2", "--qmax", "100", "--check", "thm"])),
        2
    );
    assert_eq!(
        exit_code(&valset(&["stats", "--poly", "x^^2", "--qmax", "100"])),
        2
    );
    assert_eq!(
        exit_code(&valset(&[
            "sieve", "--set", "powers:2", "--N", "100", "--Q", "10", "--q-grid", "10,20"
        ])),
        2
    );
    assert_eq!(
        exit_code(&valset(&[
            "stats", "--poly", "x^2", "--qmax", "100", "--tolerance", "lots"
        ])),
        2
    );
}

#[test]
fn a_failing_check_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["avg", "--poly", "x^2", "--check", "pair-mean", "--factors", "3", "--qmax", "1000"],
    );
    assert_eq!(exit_code(&out), 1);
    let s = summary(dir.path());
    assert_eq!(s["passed"], Value::Bool(false));
    assert_eq!(s["checks"][0]["passed"], Value::Bool(false));
}

#[test]
fn exhausted_budgets_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["family", "--n", "33"]);
    assert_eq!(exit_code(&out), 3);
    let out = run_in(
        dir.path(),
        &["sieve", "--set", "powers:1", "--N", "200000000", "--Q", "100"],
    );
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn artifacts_are_byte_identical_across_worker_counts() {
    let base = tempfile::tempdir().unwrap();
    let mut runs: Vec<(Vec<u8>, Vec<u8>)> = Vec::new();
    for threads in ["1", "4"] {
        let dir = base.path().join(format!("stats-{threads}"));
        let out = run_in(
            &dir,
            &["stats", "--poly", "x^4 + 2x^2 + 1", "--qmax", "2000", "--threads", threads],
        );
        assert_eq!(exit_code(&out), 0);
        runs.push((
            std::fs::read(dir.join("summary.json")).unwrap(),
            std::fs::read(dir.join("per_prime.csv")).unwrap(),
        ));
    }
    assert_eq!(runs[0], runs[1]);

    let mut smooth_runs: Vec<Vec<u8>> = Vec::new();
    for threads in ["1", "4"] {
        let dir = base.path().join(format!("smooth-{threads}"));
        let out = run_in(
            &dir,
            &[
                "smooth", "--set", "powers:2", "--N", "100000", "--Q", "100",
                "--sample-cap", "500", "--seed", "11", "--threads", threads,
            ],
        );
        assert_eq!(exit_code(&out), 0);
        smooth_runs.push(std::fs::read(dir.join("summary.json")).unwrap());
    }
    assert_eq!(smooth_runs[0], smooth_runs[1]);
}

#[test]
fn config_files_yield_to_explicit_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(&config, r#"{"poly": "x^2", "qmax": 500}"#).unwrap();
    let cfg = config.to_str().unwrap();

    let flagged = dir.path().join("flagged");
    let out = run_in(&flagged, &["stats", "--config", cfg, "--qmax", "1000"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(summary(&flagged)["params"]["qmax"], Value::from(1000));

    let from_file = dir.path().join("from-file");
    let out = run_in(&from_file, &["stats", "--config", cfg]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(summary(&from_file)["params"]["qmax"], Value::from(500));

    let bad = dir.path().join("bad");
    std::fs::write(&config, r#"{"qqmax": 500}"#).unwrap();
    let out = run_in(&bad, &["stats", "--config", cfg, "--poly", "x^2", "--qmax", "10"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn summaries_echo_the_canonical_polynomial() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["stats", "--poly", "(x^2+1)^2", "--qmax", "100"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(summary(dir.path())["params"]["poly"], Value::from("x^4 + 2*x^2 + 1"));
}

#[test]
fn the_sieve_bounds_the_squares() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["sieve", "--set", "powers:2", "--N", "1000000", "--Q", "10000"],
    );
    assert_eq!(exit_code(&out), 0);
    let s = summary(dir.path());
    let bound = s["report"]["sieve"]["bound_approx"].as_f64().expect("bound present");
    assert_eq!(s["report"]["sieve"]["actual_size"], Value::from(1000));
    assert!(bound >= 1000.0);
    assert_eq!(s["checks"][0]["name"], Value::from("sieve-validity"));
    assert_eq!(s["passed"], Value::Bool(true));
    let residues = std::fs::read_to_string(dir.path().join("residues.csv")).unwrap();
    assert!(residues.starts_with("p,residue_count\n2,"));
}

#[test]
fn exported_sets_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let set_file = dir.path().join("squares.txt");
    let first = dir.path().join("first");
    let out = run_in(
        &first,
        &[
            "sieve", "--set", "powers:2", "--N", "10000", "--Q", "200",
            "--export", set_file.to_str().unwrap(),
        ],
    );
    assert_eq!(exit_code(&out), 0);

    let second = dir.path().join("second");
    let out = run_in(&second, &["sieve", "--set", set_file.to_str().unwrap(), "--Q", "200"]);
    assert_eq!(exit_code(&out), 0);
    let a = std::fs::read(first.join("residues.csv")).unwrap();
    let b = std::fs::read(second.join("residues.csv")).unwrap();
    assert_eq!(a, b);

    let clash = dir.path().join("clash");
    let out = run_in(
        &clash,
        &["sieve", "--set", set_file.to_str().unwrap(), "--N", "99", "--Q", "200"],
    );
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn sampled_group_runs_follow_the_seed() {
    let base = tempfile::tempdir().unwrap();
    let mut by_seed: Vec<Vec<u8>> = Vec::new();
    for (label, seed) in [("a", "5"), ("b", "5"), ("c", "6")] {
        let dir = base.path().join(label);
        let out = run_in(
            &dir,
            &[
                "group", "--wreath-n", "5", "--samples", "4000", "--seed", seed,
                "--tolerance", "0.05",
            ],
        );
        assert_eq!(exit_code(&out), 0);
        by_seed.push(std::fs::read(dir.join("summary.json")).unwrap());
    }
    assert_eq!(by_seed[0], by_seed[1]);
    assert_ne!(by_seed[0], by_seed[2]);
}

#[test]
fn the_intersection_example_counts_ten_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["intersect", "--poly", "x^2+1", "--N", "100"]);
    assert_eq!(exit_code(&out), 0);
    let s = summary(dir.path());
    assert_eq!(s["report"]["count"], Value::from(10));
    assert_eq!(s["report"]["degree"], Value::from(2));
}

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schottky"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn temp_file(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("schottky-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn count_reports_small_ranks() {
    let rows = json(&["count", "0..2"]);
    let counts: Vec<&str> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["m_g"].as_str().unwrap())
        .collect();
    assert_eq!(counts, ["2", "6", "17"]);
}

#[test]
fn count_with_oracle_matches() {
    let out = run(&["count", "3..5", "--oracle", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("g,m_g,g0,real_part,oracle,match"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    assert!(rows[0].starts_with("3,75,"));
}

#[test]
fn types_of_rank_zero() {
    let v = json(&["types", "0"]);
    assert_eq!(v["count"], 2);
    let sigs: Vec<&str> = v["types"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["signature"].as_str().unwrap())
        .collect();
    assert_eq!(sigs, ["(0,1,0,0,0;)", "(1,0,0,0,0;)"]);
}

#[test]
fn rho_of_two_glides() {
    let v = json(&["rho", "(0,0,0,2,0;)"]);
    assert_eq!(
        v["images"],
        serde_json::json!(["x1", "x1 x3^-1", "x1 x2^-1"])
    );
    assert_eq!(v["diagnostics"]["disagreements"], 0);
}

#[test]
fn genus_two_table() {
    let v = json(&["g2"]);
    assert_eq!(v["class_count"], 4);
    assert_eq!(v["empty_real_part"], 1);
    let rows = v["signatures"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r["agrees_with_table"] == true));
    let tally = |c: &str| rows.iter().filter(|r| r["class"] == c).count();
    assert_eq!((tally("J2"), tally("rho1"), tally("rho2")), (5, 3, 2));
}

#[test]
fn conjugacy_groups_rank_two_into_three_classes() {
    let v = json(&["conjugacy", "2"]);
    assert_eq!(v["classes"].as_array().unwrap().len(), 3);
}

#[test]
fn sample_zeta_and_limitset_pipeline() {
    let path = temp_file("marked.json");
    let out = run(&[
        "sample",
        "3",
        "--seed",
        "9",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let z = json(&["zeta", path.to_str().unwrap()]);
    assert_eq!(z["rank"], 3);
    assert_eq!(z["zeta"].as_array().unwrap().len(), 6);
    let out = run(&[
        "limitset",
        path.to_str().unwrap(),
        "--depth",
        "2",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // 6 + 6·5 words, one header line; duplicates would only shrink this.
    assert!(text.lines().count() <= 37 && text.lines().count() > 30);
    let svg = run(&[
        "limitset",
        path.to_str().unwrap(),
        "--depth",
        "2",
        "--format",
        "svg",
    ]);
    assert!(String::from_utf8(svg.stdout).unwrap().starts_with("<svg"));
}

#[test]
fn usage_and_domain_errors_exit_with_one() {
    for args in [
        vec!["rho", "(1,2"],
        vec!["bogus"],
        vec!["count", "0..2", "--format", "svg"],
        vec!["zeta", "/definitely/not/here.json"],
        vec!["count", "0..2", "--tol", "0.5"],
    ] {
        assert_eq!(run(&args).status.code(), Some(1), "{args:?}");
    }
    let out = run(&["count", "20"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(err["error"], "BoundExceeded");
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["count", "0..6"],
        vec!["g2"],
        vec!["sample", "4", "--seed", "17"],
        vec!["verify", "--format", "csv"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(a.status.success(), "{args:?}");
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let a = run(&["count", "0..7", "--oracle"]);
    let b = run(&["count", "0..7", "--oracle", "--sequential"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_passes_every_check() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 12);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

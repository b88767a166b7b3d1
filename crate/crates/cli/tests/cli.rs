use std::path::Path;
use std::process::{Command, Output};

use eightblocks::experiments::{infeasible_23, universal_12};
use eightblocks::table::ConwayTable;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eightblocks")).args(args).env_remove("EIGHTBLOCKS_JOBS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn table_lists_thirty_varieties() {
    let o = run(&["table"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 30);
}

#[test]
fn machine_table_round_trips() {
    let o = run(&["table", "--format", "machine"]);
    assert!(o.status.success());
    let parsed: ConwayTable = stdout(&o).parse().unwrap();
    assert_eq!(parsed, ConwayTable::build());
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(run(&["table", "--format", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["search", "max-infeasible"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["search", "existence", "--solutions", "(1,1)"]).status.code(), Some(2));
}

#[test]
fn check_classifies_reference_instances() {
    let dir = tempfile::tempdir().unwrap();
    let n = write(dir.path(), "n.txt", &infeasible_23().to_string());
    let o = run(&["check", &n]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("infeasible, size 23\n"));

    let u = write(dir.path(), "u.txt", &universal_12().to_sparse_string());
    let o = run(&["check", &u, "--certificates"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("universal, size 12\n"));
    assert_eq!(text.matches("solid (").count(), 30);

    let o = run(&["check", &n, "--witnesses", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classification"], "infeasible");
    let o = run(&["check", &n, "--witnesses"]);
    assert_eq!(stdout(&o).matches("no (").count(), 30);
}

#[test]
fn malformed_instances_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let diag =
        write(dir.path(), "d.txt", "1 0 0 0 0 0\n0 0 0 0 0 0\n0 0 0 0 0 0\n0 0 0 0 0 0\n0 0 0 0 0 0\n0 0 0 0 0 0\n");
    assert_eq!(run(&["check", &diag]).status.code(), Some(3));
    let neg = write(dir.path(), "neg.txt", "1 2 -1\n");
    assert_eq!(run(&["check", &neg]).status.code(), Some(3));
    let shape = write(dir.path(), "shape.txt", "0 1 2 3\n");
    assert_eq!(run(&["check", &shape]).status.code(), Some(3));
    assert_eq!(run(&["check", "/definitely/not/here"]).status.code(), Some(3));
}

#[test]
fn row_scan_reports_23() {
    let o = run(&["scan", "row-infeasible"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("max infeasible size 23 (10 maximizers)"));
}

#[test]
fn lp_export_has_thirty_integer_variables() {
    let o = run(&["export", "min-universal", "--format", "lp"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let general = text.split("General").nth(1).unwrap().split("End").next().unwrap();
    assert_eq!(general.split_whitespace().count(), 30);
    assert!(text.starts_with("\\ min-universal\nMinimize\n"));
}

#[test]
fn export_to_file_and_decode_lp_solution() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.txt");
    let o = run(&["export", "min-universal", "--format", "neutral", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("# eightblocks model min-universal"));

    let u = universal_12();
    let values: String = eightblocks::Variety::all()
        .map(|v| {
            let (i, j) = v.coords();
            format!("x_{i}_{j} {}\n", u.get(v))
        })
        .collect();
    let sol = write(dir.path(), "sol.txt", &values);
    let o = run(&["decode", "min-universal", "--format", "lp", "--solution", &sol]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("satisfies model min-universal"));

    let unsat = write(dir.path(), "unsat.txt", "s UNSATISFIABLE\n");
    let o = run(&["decode", "max-infeasible", "--size", "24", "--solution", &unsat]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "UNSAT\n");
}

#[test]
fn min_universal_search() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    let o = run(&["search", "min-universal", "--witness-out", w.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("verdict OPTIMAL objective 12\n"));
    let witness: eightblocks::Instance = std::fs::read_to_string(&w).unwrap().parse().unwrap();
    assert_eq!(eightblocks::composability::solution_set(&witness).len(), 30);
}

#[test]
fn deterministic_reports_are_byte_identical() {
    let args = ["search", "max-infeasible", "--size", "13", "--jobs", "1", "--seedless-deterministic"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("verdict SAT\n"));
    let json = ["search", "max-infeasible", "--size", "13", "--seedless-deterministic", "--format", "json"];
    assert_eq!(run(&json).stdout, run(&json).stdout);
}

#[test]
fn budget_exhaustion_exits_4() {
    let o = run(&["search", "max-infeasible", "--size", "24", "--mode", "rigorous", "--node-budget", "20"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).starts_with("verdict TIMEOUT\n"));
}

#[test]
fn jobs_do_not_change_verdicts() {
    for jobs in ["1", "2"] {
        let o = run(&["search", "max-infeasible", "--size", "14", "--jobs", jobs, "--seedless-deterministic"]);
        assert!(stdout(&o).starts_with("verdict UNSAT\n"));
    }
    let o = Command::new(env!("CARGO_BIN_EXE_eightblocks"))
        .args(["search", "max-infeasible", "--size", "12"])
        .env("EIGHTBLOCKS_JOBS", "2")
        .output()
        .unwrap();
    assert!(String::from_utf8(o.stdout).unwrap().contains("units "));
}

#[test]
fn explore_rows() {
    let o = run(&["explore", "--family", "none;all"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("SAT 2 UNSAT 0 TIMEOUT 0\n"));
}

#[test]
fn verify_passes() {
    let o = run(&["verify"]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("FAIL"));
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const TWO_ROUTES: &str = "model temporal
vertices s v0 v1 v2 t
source s
target t
k 2
edge s v0 0 1 3
edge v0 v1 1 1 3
edge v0 v2 2 1 1
edge v1 t 2 1 2
edge v2 t 3 1 3
";

fn tctp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tctp")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    tctp(args).status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn two_routes_verdicts() {
    let dir = TempDir::new().unwrap();
    let inst_path = write(&dir, "two_routes.inst", TWO_ROUTES);
    assert_eq!(code(&["solve-u", s(&inst_path)]), 3);
    assert_eq!(code(&["solve-li", "--exact", s(&inst_path)]), 0);
    assert_eq!(code(&["solve-li", "--exact", "--deadline", "3", s(&inst_path)]), 3);
    assert_eq!(code(&["solve-u", "--objective", "earliest", s(&inst_path)]), 3);
    // budget 2 needs the exhaustive solver
    assert_eq!(code(&["solve-li", s(&inst_path)]), 2);
}

#[test]
fn output_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let inst_path = write(&dir, "two_routes.inst", TWO_ROUTES);
    let args = ["play", s(&inst_path), "--model", "li", "--traveller", "greedy", "--blocker", "random", "--seed", "9"];
    let a = tctp(&args);
    let b = tctp(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
    let json: serde_json::Value = serde_json::from_slice(&tctp(&["solve-u", s(&inst_path)]).stdout).unwrap();
    assert_eq!(json["wins"], false);
}

#[test]
fn qbf_generation_end_to_end() {
    let dir = TempDir::new().unwrap();
    for (body, truth) in [
        ("q e a\np cnf 2 2\n1 2 2 0\n1 -2 -2 0\n", 0),
        ("q e a\np cnf 2 2\n1 1 1 0\n-1 2 2 0\n", 3),
    ] {
        let f = write(&dir, "f.qdimacs", body);
        let g = dir.path().join("g.inst");
        assert_eq!(code(&["gen", "qbf", s(&f), "-o", s(&g)]), 0);
        assert_eq!(code(&["solve-li", "--exact", s(&g)]), truth);
    }
}

#[test]
fn sat_generators() {
    let dir = TempDir::new().unwrap();
    let sat = write(&dir, "sat.cnf", "p cnf 1 1\n1 1 1 0\n");
    let unsat = write(&dir, "unsat.cnf", "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n");
    for (f, expected) in [(&sat, 0), (&unsat, 3)] {
        let four = dir.path().join("four.inst");
        let two = dir.path().join("two.json");
        assert_eq!(code(&["gen", "sat4", s(f), "-o", s(&four), "--format", "text"]), 0);
        assert_eq!(code(&["solve-static", s(&four)]), expected);
        assert_eq!(code(&["gen", "sat2", s(f), "-o", s(&two)]), 0);
        assert_eq!(code(&["solve-li", "--exact", s(&two)]), expected);
    }
}

#[test]
fn dag_table_and_verification() {
    let dir = TempDir::new().unwrap();
    let fan = write(&dir, "fan.inst", "model dag\nvertices s t\nsource s\ntarget t\nk 2\nedge s t 1 1\nedge s t 2 1\nedge s t 5 1\n");
    let out = tctp(&["dag-solve", "--table", "--format", "text", s(&fan)]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("vertex\tpi_0\tpi_1\tpi_2\n"));
    assert!(text.contains("s\t1\t2\t5\n"));
    assert_eq!(code(&["dag-solve", "--deadline", "4", s(&fan)]), 3);
    assert_eq!(code(&["verify", s(&fan), "--model", "static", "--traveller", "dag", "--deadline", "5"]), 0);
    assert_eq!(code(&["play", s(&fan), "--model", "static", "--traveller", "dag", "--blocker", "exhaustive", "--deadline", "4"]), 3);
}

#[test]
fn transcripts_replay_from_files() {
    let dir = TempDir::new().unwrap();
    let inst_path = write(&dir, "two_routes.inst", TWO_ROUTES);
    let first = tctp(&["play", s(&inst_path), "--model", "u", "--traveller", "greedy", "--blocker", "optimal"]);
    assert_eq!(first.status.code(), Some(3));
    let log = write(&dir, "game.jsonl", std::str::from_utf8(&first.stdout).unwrap());
    let again = tctp(&["play", s(&inst_path), "--model", "u", "--traveller", s(&log), "--blocker", s(&log)]);
    assert_eq!(again.stdout, first.stdout);
}

#[test]
fn errors_map_to_exit_codes() {
    let dir = TempDir::new().unwrap();
    let inst_path = write(&dir, "two_routes.inst", TWO_ROUTES);
    assert_eq!(code(&["solve-u"]), 2);
    assert_eq!(code(&["solve-u", "/no/such/file"]), 1);
    let bad = write(&dir, "bad.inst", "model temporal\nvertices s t\nsource s\ntarget x\nk 1\n");
    assert_eq!(code(&["solve-u", s(&bad)]), 1);
    assert_eq!(code(&["solve-li", "--exact", "--limit", "1", s(&inst_path)]), 4);
    assert_eq!(code(&["solve-static", s(&inst_path)]), 2);
}

#[test]
fn expansion_is_a_dag_instance() {
    let dir = TempDir::new().unwrap();
    let inst_path = write(&dir, "two_routes.inst", TWO_ROUTES);
    let out = tctp(&["expand", "--format", "text", s(&inst_path)]);
    let dag = write(&dir, "x.inst", std::str::from_utf8(&out.stdout).unwrap());
    // the expansion loses just like the uninformed game
    assert_eq!(code(&["dag-solve", s(&dag)]), 3);
    let quiet = tctp(&["--quiet", "dag-solve", s(&dag)]);
    assert!(quiet.stdout.is_empty());
}

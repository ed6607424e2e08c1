use std::path::Path;
use std::process::{Command, Output};

use bisect_core::io::parse_graph;
use bisect_core::rational::{int, parse_rational};
use bisect_harness::generate::{generate, GraphClass, WeightModel};
use bisect_harness::report::SolverReport;
use serde_json::Value;

fn bisect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bisect")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen_to(dir: &Path, name: &str, class: &str) -> String {
    let path = dir.join(name);
    let out = bisect(&["gen", "--class", class, "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_reports_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_to(dir.path(), "petersen.txt", "petersen");
    let out = bisect(&["solve", "--input", &path, "--json"]);
    assert!(out.status.success());
    let report: SolverReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(parse_rational(&report.achieved).unwrap() >= int(11));
    let g = parse_graph(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(report.verify(&g).unwrap().passed());

    let tf = bisect(&["solve", "--method", "tf", "--input", &path, "--json"]);
    let report: SolverReport = serde_json::from_str(&stdout(&tf)).unwrap();
    assert_eq!(report.method, "tf");
    assert_eq!(report.guaranteed_bound, "613/57");
}

#[test]
fn oracle_on_the_claw() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_to(dir.path(), "claw.txt", "claw");
    let out = bisect(&["oracle", "--input", &path]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().next(), Some("2"));
    let cut = bisect(&["oracle", "--input", &path, "--cut"]);
    assert_eq!(stdout(&cut).lines().next(), Some("3"));
}

#[test]
fn audits_succeed() {
    let out = bisect(&["audit", "--family", "cycles", "--max-len", "32"]);
    assert!(out.status.success());
    assert!(!stdout(&out).contains("FAIL"));
    let out = bisect(&["audit", "--family", "paths", "--max-len", "13"]);
    assert!(out.status.success());
}

#[test]
fn bad_input_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "p bisect 2 1\ne 1 3 1\n").unwrap();
    assert_eq!(bisect(&["solve", "--input", bad.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(bisect(&["solve", "--input", "/nonexistent/graph.txt"]).status.code(), Some(3));
    assert_eq!(bisect(&["solve"]).status.code(), Some(3));
    assert_eq!(bisect(&["gen", "--class", "nonsense"]).status.code(), Some(3));

    let k5 = gen_to(dir.path(), "k5.txt", "complete(5)");
    assert_eq!(bisect(&["solve", "--method", "tf", "--input", &k5]).status.code(), Some(3));
    let claw = gen_to(dir.path(), "claw.txt", "claw");
    assert_eq!(bisect(&["solve", "--method", "tf", "--input", &claw]).status.code(), Some(3));
}

#[test]
fn generated_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let out = bisect(&[
        "gen", "--class", "tf-subcubic-2ecc", "--n", "12", "--weights", "uniform", "--seed", "4", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let parsed = parse_graph(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let direct = generate(GraphClass::TfSubcubic2ecc, 12, 4, WeightModel::Uniform).unwrap();
    assert_eq!((parsed.n(), parsed.m()), (direct.n(), direct.m()));
    for (a, b) in parsed.edges().iter().zip(direct.edges()) {
        assert_eq!((a.id, a.u, a.v, &a.weight), (b.id, b.u, b.v, &b.weight));
    }
}

#[test]
fn sweeps_are_reproducible() {
    let args =
        ["sweep", "--class", "subcubic", "--n-min", "4", "--n-max", "9", "--samples", "3", "--bound", "two-thirds", "--seed", "8"];
    let strip = |o: Output| {
        let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let a = strip(bisect(&args));
    let b = strip(bisect(&args));
    assert_eq!(a, b);
    assert_eq!(a["instances"], 18);
    assert_eq!(a["violations"], 0);
}

use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use subqubo::io::{load_problem_file, load_report, parse_problem};
use subqubo::{
    save_problem, save_report, sweep, BinaryEncoding, LinearSystem, ProblemFile, Solver,
    SubrangeField, SweepOptions,
};

const PAPER: &str = r#"{
  "schema_version": 1,
  "n": 2,
  "A": [3, 1, -1, 2],
  "b": [46, -55],
  "encoding": { "lo": 0, "hi": 3 },
  "subrange": { "s": 4 }
}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subqubo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn sweep_finds_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write(dir.path(), "p.json", PAPER);
    let report = dir.path().join("r.json");
    let out = run(&[
        "sweep",
        &problem,
        "--json",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let hits = value["hits"].as_array().unwrap();
    assert_eq!(hits.len(), 1);
    let hit = &value["per_subrange"][hits[0].as_u64().unwrap() as usize];
    assert_eq!(hit["T"], serde_json::json!([16, -32]));
    assert_eq!(hit["best_energy"], serde_json::json!(-1525.0));
    assert_eq!(hit["solutions"], serde_json::json!([[21.0, -17.0]]));

    let saved = load_report(&report).unwrap();
    assert_eq!(saved.hits.len(), 1);
    assert_eq!(saved.per_subrange.len(), 64);
}

#[test]
fn sweep_with_annealer_and_stop_on_hit() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write(dir.path(), "p.json", PAPER);
    let out = run(&[
        "sweep",
        &problem,
        "--solver",
        "sa",
        "--reads",
        "200",
        "--seed",
        "4",
        "--stop-on-hit",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("43 of 64 windows"), "{text}");
    assert!(text.contains("T = [16, -32]"), "{text}");
}

#[test]
fn no_hit_exits_one_and_reports_gap() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write(dir.path(), "p.json", PAPER);
    // With s = 1 the range is [-16, 15]; x1 = 21 is outside.
    let out = run(&["sweep", &problem, "--subrange-bound", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("no hit; closest window"));
}

#[test]
fn solve_explicit_window() {
    let dir = tempfile::tempdir().unwrap();
    let text = PAPER.replace(
        r#""subrange": { "s": 4 }"#,
        r#""subrange": { "T": [16, -32] }"#,
    );
    let problem = write(dir.path(), "p.json", &text);
    let out = run(&["solve", &problem, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["target_energy"], serde_json::json!(-1525.0));
    assert_eq!(v["x"], serde_json::json!([[21.0, -17.0]]));

    let sa = run(&["solve", &problem, "--solver", "sa", "--seed", "1"]);
    assert_eq!(sa.status.code(), Some(0));
    assert!(stdout(&sa).contains("best energy:   -1525.0"));

    // Untranslated window of the same system holds no exact solution.
    let plain = write(
        dir.path(),
        "plain.json",
        &PAPER.replace(r#""subrange": { "s": 4 }"#, r#""subrange": { "s": 1 }"#),
    );
    assert_eq!(run(&["solve", &plain]).status.code(), Some(1));
}

#[test]
fn build_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let text = PAPER.replace(
        r#""subrange": { "s": 4 }"#,
        r#""subrange": { "T": [16, -32] }"#,
    );
    let problem = write(dir.path(), "p.json", &text);
    let out = run(&["build", &problem]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["qubo"]["rows"][0][0], serde_json::json!(-120.0));
    assert_eq!(v["c"], serde_json::json!([30.0, 25.0]));

    let script = run(&["export", &problem, "--reads", "1000"]);
    assert_eq!(script.status.code(), Some(0));
    let s = stdout(&script);
    assert!(s.contains("('q1','q1'): -120.0"));
    assert!(s.contains("sample_qubo(Q, num_reads=1000)"));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write(dir.path(), "p.json", PAPER);
    let ok = run(&["verify", &problem, "--x", "21,-17"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("residual: 0.0"));
    let bad = run(&["verify", &problem, "--x", "0,0", "--json"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("5141"));
    assert_eq!(
        run(&["verify", &problem, "--x", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing_b = write(
        dir.path(),
        "p.json",
        r#"{"schema_version":1,"n":1,"A":[1],"encoding":{"lo":0,"hi":1}}"#,
    );
    let out = run(&["build", &missing_b]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`b`"));

    let non_square = write(
        dir.path(),
        "q.json",
        r#"{"schema_version":1,"n":2,"A":[1,2,3],"b":[1,2],"encoding":{"lo":0,"hi":1}}"#,
    );
    assert_eq!(run(&["build", &non_square]).status.code(), Some(2));
    assert_eq!(run(&["sweep"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn gen_then_sweep_recovers_truth() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let out = run(&[
        "gen",
        "-n",
        "2",
        "--seed",
        "3",
        "--x-min",
        "-8",
        "--x-max",
        "7",
        "--qubits-per-var",
        "2",
        "--subrange-bound",
        "2",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let truth: Vec<f64> = v["x"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();

    let file = load_problem_file(&path).unwrap();
    let a = &file.a;
    let det = a[0] * a[3] - a[1] * a[2];
    let sweep = run(&["sweep", path.to_str().unwrap(), "--json"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&sweep)).unwrap();
    let found: Vec<Vec<f64>> = report["hits"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|h| {
            report["per_subrange"][h.as_u64().unwrap() as usize]["solutions"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| {
                    x.as_array()
                        .unwrap()
                        .iter()
                        .map(|v| v.as_f64().unwrap())
                        .collect()
                })
                .collect::<Vec<Vec<f64>>>()
        })
        .collect();
    assert!(found.contains(&truth));
    if det != 0.0 {
        assert_eq!(found, vec![truth]);
    }
}

#[test]
fn gen_solution_window_is_explicit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let out = run(&[
        "gen",
        "-n",
        "3",
        "--seed",
        "9",
        "--solution-window",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let file = load_problem_file(&path).unwrap();
    assert!(matches!(
        file.subrange,
        Some(SubrangeField::Explicit { .. })
    ));
    let solved = run(&["solve", path.to_str().unwrap()]);
    assert_eq!(solved.status.code(), Some(0), "{}", stdout(&solved));
}

#[test]
fn report_round_trip() {
    let sys =
        LinearSystem::from_rows(&[vec![3.0, 1.0], vec![-1.0, 2.0]], vec![46.0, -55.0]).unwrap();
    let enc = BinaryEncoding::integer(3).unwrap();
    let report = sweep(
        &sys,
        &enc,
        2,
        &Solver::brute_force(),
        SweepOptions::default(),
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    save_report(&path, &report).unwrap();
    assert_eq!(load_report(&path).unwrap(), report);
}

fn problem_file() -> impl Strategy<Value = ProblemFile> {
    (1usize..=4, 0i32..=5, 1u64..=6, any::<bool>()).prop_flat_map(|(n, hi, s, explicit)| {
        (
            prop::collection::vec(-1e6f64..1e6, n * n),
            prop::collection::vec(-1e6f64..1e6, n),
            prop::collection::vec(-(s as i64)..s as i64, n),
        )
            .prop_map(move |(a, b, coeffs)| {
                let width = 1i64 << (hi + 1);
                let subrange = if explicit {
                    SubrangeField::Explicit {
                        translations: coeffs.iter().map(|c| c * width).collect(),
                        s: Some(s),
                    }
                } else {
                    SubrangeField::Bound { s }
                };
                ProblemFile {
                    schema_version: 1,
                    n,
                    a,
                    b,
                    encoding: BinaryEncoding::new(0, hi).unwrap(),
                    subrange: Some(subrange),
                }
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn problem_files_round_trip(file in problem_file()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        save_problem(&path, &file).unwrap();
        let back = load_problem_file(&path).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert!(back.validate().is_ok());
        let text = std::fs::read_to_string(&path).unwrap();
        prop_assert_eq!(parse_problem(&text).unwrap(), file);
    }
}

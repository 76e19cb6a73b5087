//! End-to-end behaviour of the command-line tool.

use std::fs;
use std::process::Command;

use conformal_cli::dataset::{emit, parse, Dataset, Grid, Kind, Schema, Sidecar};
use conformal_cli::run_args;
use conformal_core::{Example, Label};
use proptest::prelude::*;

fn run(args: &[&str]) -> String {
    let mut argv = vec!["conformal"];
    argv.extend_from_slice(args);
    run_args(argv).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_conformal"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn fisher_on_bundled_czuber() {
    let out = run(&["fisher", "--data", "czuber.csv", "--epsilon", "0.05", "--grid", "1"]);
    assert!(out.contains("region [9.40, 23.65]  grid [10, 23]"), "{out}");
}

#[test]
fn predict_old_on_bundled_czuber() {
    let out = run(&["predict-old", "--data", "czuber.csv", "--epsilon", "0.05"]);
    assert!(out.contains("region [10.00, 23.78]  grid [10, 23]"), "{out}");
}

#[test]
fn replicate_iris_class_prints_every_pvalue() {
    let out = run(&["replicate", "iris-class"]);
    for line in [
        "knn-ratio  p(s) = 2/25 (0.08)",
        "knn-ratio  p(v) = 8/25 (0.32)",
        "label-mean  p(s) = 1/25 (0.04)",
        "label-mean  p(v) = 2/25 (0.08)",
        "band  p(s) = 2/25 (0.08)",
        "band  p(v) = 25/25 (1.00)",
        "knn-ratio  confidence 0.92  credibility 0.32",
        "label-mean  confidence 0.96  credibility 0.08",
        "band  confidence 0.92  credibility 1.00",
        "knn-ratio  ε = 0.08  region {v}",
        "knn-ratio  ε = 0.05  region {s, v}",
        "knn-ratio  ε = 0.333333  region {}",
    ] {
        assert!(out.contains(line), "missing `{line}` in\n{out}");
    }
}

#[test]
fn replicate_iris_reg_prints_six_intervals() {
    let out = run(&["replicate", "iris-reg"]);
    assert_eq!(out.lines().filter(|l| l.contains("region")).count(), 6, "{out}");
    assert!(out.contains("gaussian  ε = 0.04  region [0.99, 2.34]  grid [1.0, 2.3]"), "{out}");
}

#[test]
fn reports_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.csv");
    let curve = curve.to_str().unwrap();
    let args = [
        "permute", "--data", "iris25.csv", "--label-column", "species", "--features", "sepal_length",
        "--epsilon", "0.1", "--trials", "8", "--seed", "3", "--format", "json-lines", "--curve", curve,
    ];
    let a = run(&args);
    let ca = fs::read(curve).unwrap();
    let b = run(&args);
    assert_eq!(a, b);
    assert_eq!(ca, fs::read(curve).unwrap());
    assert_eq!(a.lines().filter(|l| l.contains("\"record\":\"trial\"")).count(), 8);
}

#[test]
fn evaluate_emits_one_record_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("c.csv");
    let out = run(&[
        "evaluate", "--data", "iris25.csv", "--label-column", "species", "--features", "sepal_length",
        "--epsilon", "0.05", "--format", "json-lines", "--curve", curve.to_str().unwrap(),
    ]);
    assert_eq!(out.lines().filter(|l| l.contains("\"record\":\"step\"")).count(), 25);
    let csv = fs::read_to_string(&curve).unwrap();
    assert_eq!(csv.lines().count(), 26);
    assert!(csv.starts_with("step,errors,empty,uncertain,singleton,expected_errors\n"));
    let table = run(&[
        "evaluate", "--data", "iris25.csv", "--label-column", "species", "--features", "sepal_length",
    ]);
    assert!(table.contains("note: warm-up steps"), "{table}");
}

#[test]
fn bet_audit_from_error_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.txt");
    fs::write(&path, "1 1 1 1 1\n1,1,1,1,1\n").unwrap();
    let out = run(&["bet-audit", "--errors", path.to_str().unwrap(), "--epsilon", "0.1", "--delta", "0.5"]);
    assert!(out.contains("audit  capital bound holds = true"), "{out}");
    assert!(out.contains("audit  N = 10"), "{out}");
    assert!(out.contains("capital ≥ Nδ² at δ = 0.5 = true"), "{out}");
}

#[test]
fn unknown_names_are_enumerated() {
    let e = run_args(["conformal", "predict-class", "--data", "iris25.csv", "--label-column", "species", "--measure", "svm"])
        .unwrap_err();
    assert!(e.to_string().contains("knn-ratio, label-mean, band"), "{e}");
    let e = run_args(["conformal", "predict-reg", "--data", "czuber.csv", "--model", "bayes"]).unwrap_err();
    assert!(e.to_string().contains("exchangeable, within-label, gaussian"), "{e}");
}

#[test]
fn exit_codes() {
    assert_eq!(binary(&["replicate", "czuber"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    let out = binary(&["fisher", "--data", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty file"));
    assert_eq!(binary(&["fisher", "--data", "/nonexistent/x.csv"]).status.code(), Some(1));
    assert_eq!(binary(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(binary(&["--help"]).status.code(), Some(0));
}

#[test]
fn ingest_reports_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    fs::write(&path, "x,y\n1,2\n3,x4\n").unwrap();
    let out = binary(&["predict-reg", "--data", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 3, column 2"), "{out:?}");
}

fn dataset_strategy() -> impl Strategy<Value = Dataset> {
    let real = (1usize..4, 1usize..12).prop_flat_map(|(arity, n)| {
        prop::collection::vec((prop::collection::vec(-1e6f64..1e6, arity), -1e3f64..1e3), n).prop_map(
            move |rows| Dataset {
                features: (0..arity).map(|j| format!("x{j}")).collect(),
                label: "y".into(),
                kind: Kind::Real,
                grid: Some(Grid { step: 0.25, origin: -1.0 }),
                examples: rows.into_iter().map(|(x, y)| Example::regression(&x, y)).collect(),
            },
        )
    });
    let class = prop::collection::vec((-50.0f64..50.0, "[a-z]{1,3}"), 1..12).prop_map(|rows| Dataset {
        features: vec!["x".into()],
        label: "species".into(),
        kind: Kind::Class,
        grid: None,
        examples: rows
            .into_iter()
            .map(|(x, y)| Example::new(vec![x], Label::class(&y)))
            .collect(),
    });
    prop_oneof![real, class]
}

proptest! {
    #[test]
    fn ingest_inverts_emit(d in dataset_strategy()) {
        let (csv, side) = emit(&d).unwrap();
        let sidecar: Sidecar = toml::from_str(&side).unwrap();
        let back = parse(&csv, &Schema::default(), &sidecar).unwrap();
        prop_assert_eq!(back, d);
    }
}

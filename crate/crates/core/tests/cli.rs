//! Drives the `hatprove` binary end to end.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(rel)
}

fn hatprove(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hatprove")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn single_problem_prints_szs_status() {
    let path = corpus("showcase/SYN416+1.p");
    let out = hatprove(&["--timeout", "5", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("% SZS status Theorem for SYN416+1"), "{text}");
    assert!(text.contains("rounds="));

    let path = corpus("showcase/SYN387+1.p");
    let text = stdout(&hatprove(&["--timeout", "5", path.to_str().unwrap()]));
    assert!(text.contains("% SZS status Non-Theorem for SYN387+1"), "{text}");
}

#[test]
fn native_input_and_backend_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wlem.txt");
    std::fs::write(&path, "~ p ; ~ ~ p\n").unwrap();
    for (backend, status) in [("lht", "Theorem"), ("lj-ht", "Theorem"), ("conn-ht", "Theorem")] {
        let out = hatprove(&["--backend", backend, "--format", "native", "--timeout", "5", path.to_str().unwrap()]);
        assert!(out.status.success());
        let text = stdout(&out);
        assert!(text.contains(&format!("% SZS status {status} for wlem")), "{backend}: {text}");
    }
}

#[test]
fn empty_directory_is_a_harness_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = hatprove(&[dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_arguments_are_rejected() {
    let path = corpus("showcase/SYN416+1.p");
    assert_eq!(hatprove(&["--timeout", "-1", path.to_str().unwrap()]).status.code(), Some(2));
    assert!(!hatprove(&["--backend", "leancop", path.to_str().unwrap()]).status.success());
}

#[test]
fn directory_run_writes_table_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("out.csv");
    let out = hatprove(&[
        "--timeout",
        "3",
        "--jobs",
        "4",
        "--csv",
        csv_path.to_str().unwrap(),
        corpus("showcase").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.matches("% SZS status").count(), 8);
    let table_row = text.lines().find(|l| l.starts_with("lht")).expect("summary row");
    let fields: Vec<&str> = table_row.split_whitespace().collect();
    assert_eq!(&fields[1..3], ["8", "5"]);

    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(headers.iter().take(3).collect::<Vec<_>>(), ["problem", "backend", "status"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 8);
    let names: Vec<&str> = rows.iter().map(|r| &r[0]).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn diagnostics() {
    let f1 = corpus("showcase/SYN416+1.p");
    let text = stdout(&hatprove(&["--emit-axioms", "--oracle", f1.to_str().unwrap()]));
    assert!(text.contains("% 6 HT axiom instances for SYN416+1"), "{text}");
    assert!(text.contains("HT valid; classical valid"));

    let f2 = corpus("showcase/SYN048+1.p");
    let text = stdout(&hatprove(&["--emit-axioms", f2.to_str().unwrap()]));
    assert!(text.contains("% 3 HT axiom instances for SYN048+1"), "{text}");

    let lem = corpus("showcase/SYN387+1.p");
    let text = stdout(&hatprove(&["--oracle", lem.to_str().unwrap()]));
    assert!(text.contains("HT invalid, countermodel"), "{text}");

    let identity = corpus("syn/identity.p");
    let text = stdout(&hatprove(&["--emit-matrix", "--backend", "conn", identity.to_str().unwrap()]));
    assert!(text.contains("% Matrix for identity"));
    assert!(text.contains("p^1:") && text.contains("p^0:"), "{text}");
}

#[test]
fn include_is_resolved_relative_to_the_problem() {
    let path = corpus("syn/group_include.p");
    let text = stdout(&hatprove(&["--timeout", "5", path.to_str().unwrap()]));
    assert!(text.contains("% SZS status Theorem for group_include"), "{text}");
}

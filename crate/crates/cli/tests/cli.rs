use std::path::{Path, PathBuf};

use assert_cmd::Command;
use predicates::prelude::*;
use serde_json::Value;

use wrw_core::generate;

fn wrw() -> Command {
    Command::cargo_bin("wrw").unwrap()
}

fn fixture(dir: &Path) -> PathBuf {
    let path = dir.join("hk.txt");
    let mut f = std::fs::File::create(&path).unwrap();
    generate::holme_kim(120, 3, 0.5, 2)
        .write_edge_list(&mut f)
        .unwrap();
    path
}

fn json(cmd: &mut Command) -> Value {
    let out = cmd.assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).unwrap()
}

#[test]
fn estimate_json_schema() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture(dir.path());
    let v = json(wrw().args(["estimate", "--graph"]).arg(&g).args([
        "-k",
        "4",
        "--queries",
        "60",
        "--runs",
        "5",
    ]));
    for key in [
        "graph", "k", "method", "Q", "runs", "burn_in", "seed", "motifs",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["Q"], 60);
    assert_eq!(v["burn_in"], 1000);
    let motifs = v["motifs"].as_array().unwrap();
    assert_eq!(motifs.len(), 6);
    let total: f64 = motifs
        .iter()
        .map(|m| m["concentration"].as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);
    for m in motifs {
        for key in [
            "k",
            "m",
            "canonical_code",
            "concentration",
            "count_estimate",
            "stderr",
            "ci95_lo",
            "ci95_hi",
        ] {
            assert!(m.get(key).is_some(), "missing motif field {key}");
        }
    }
}

#[test]
fn estimate_csv_columns_and_motif_filter() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture(dir.path());
    let out = dir.path().join("r.csv");
    wrw()
        .args(["estimate", "--graph"])
        .arg(&g)
        .args([
            "-k", "5", "--steps", "500", "--runs", "2", "--motif", "5,3", "--motif", "M(5,21)",
            "--format", "csv", "--out",
        ])
        .arg(&out)
        .assert()
        .success()
        .stdout("");
    let text = std::fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "graph,k,m,canonical_code,method,Q,runs,concentration,stderr,ci95_lo,ci95_hi,count_estimate");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("hk,5,3,"));
    assert!(lines[2].starts_with("hk,5,21,"));
}

#[test]
fn exact_engines_agree() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture(dir.path());
    let esu = json(wrw().args(["exact", "--graph"]).arg(&g).args(["-k", "4"]));
    let formula = json(
        wrw()
            .args(["exact", "--graph"])
            .arg(&g)
            .args(["-k", "4", "--engine", "formula"]),
    );
    assert_eq!(esu, formula);
    assert_eq!(esu["method"], "exact");
}

#[test]
fn compare_against_saved_exact_report() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture(dir.path());
    let exact = dir.path().join("exact.json");
    wrw()
        .args(["exact", "--graph"])
        .arg(&g)
        .args(["-k", "3", "--out"])
        .arg(&exact)
        .assert()
        .success();
    let v = json(
        wrw()
            .args(["compare", "--graph"])
            .arg(&g)
            .args([
                "-k",
                "3",
                "--steps",
                "2000",
                "--runs",
                "10",
                "--exact-report",
            ])
            .arg(&exact),
    );
    for row in v["motifs"].as_array().unwrap() {
        let (e, x) = (
            row["estimate"].as_f64().unwrap(),
            row["exact"].as_f64().unwrap(),
        );
        assert!((row["relative_error"].as_f64().unwrap() - (e - x) / x).abs() < 1e-12);
        assert!(row["within_ci"].is_boolean());
    }
}

#[test]
fn compare_rejects_mismatched_k() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture(dir.path());
    let exact = dir.path().join("exact.json");
    wrw()
        .args(["exact", "--graph"])
        .arg(&g)
        .args(["-k", "4", "--out"])
        .arg(&exact)
        .assert()
        .success();
    wrw()
        .args(["compare", "--graph"])
        .arg(&g)
        .args(["-k", "3", "--steps", "100", "--exact-report"])
        .arg(&exact)
        .assert()
        .code(1)
        .stderr(predicate::str::contains("report mismatch"));
}

#[test]
fn count_reports_degree_sum() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture(dir.path());
    let v = json(wrw().args(["count", "--graph"]).arg(&g).args([
        "-k",
        "4",
        "--steps",
        "3000",
        "--runs",
        "4",
        "--node-count",
        "120",
    ]));
    assert!(v["degree_sum_estimate"].as_f64().unwrap() > 0.0);
    wrw()
        .args(["count", "--graph"])
        .arg(&g)
        .args(["-k", "4", "--steps", "300", "--format", "csv"])
        .assert()
        .success()
        .stdout(predicate::str::starts_with(
            "graph,k,m,canonical_code,method,Q,runs,degree_sum_estimate,count_estimate\n",
        ));
}

#[test]
fn catalog_lists_all_motifs() {
    let v = json(wrw().arg("catalog"));
    assert_eq!(v.as_array().unwrap().len(), 29);
    let csv = wrw()
        .args(["catalog", "-k", "3", "--format", "csv"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 3);
}

#[test]
fn bound_from_flags() {
    let v = json(wrw().args([
        "bound",
        "--mixing-time",
        "10",
        "--degree-sum",
        "20",
        "--top-degree-product",
        "1024",
        "--motif-count",
        "1",
        "--delta",
        "0.5",
        "--alpha",
        "0.1",
    ]));
    let expected = 72.0 * 10.0 * 20.0 * 1024.0 * 10f64.ln() / 0.25;
    assert!((v["t_min"].as_f64().unwrap() - expected).abs() < 1e-6 * expected);
}

#[test]
fn usage_errors_exit_2() {
    wrw().assert().code(2);
    wrw()
        .args(["estimate", "--graph", "x.txt", "-k", "6", "--steps", "1"])
        .assert()
        .code(2);
    wrw()
        .args(["estimate", "--graph", "x.txt", "-k", "4"])
        .assert()
        .code(2);
    wrw()
        .args([
            "estimate",
            "--graph",
            "x.txt",
            "-k",
            "4",
            "--steps",
            "1",
            "--queries",
            "1",
        ])
        .assert()
        .code(2);
    wrw()
        .args([
            "estimate", "--graph", "x.txt", "-k", "4", "--steps", "1", "--format", "xml",
        ])
        .assert()
        .code(2);
    wrw().args(["bound", "--mixing-time", "1"]).assert().code(2);
}

#[test]
fn runtime_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    wrw()
        .args([
            "estimate",
            "--graph",
            "/nonexistent/graph.txt",
            "-k",
            "4",
            "--steps",
            "10",
        ])
        .assert()
        .code(1)
        .stderr(predicate::str::contains("loading"));

    let split = dir.path().join("split.txt");
    std::fs::write(&split, "1 2\n2 3\n3 1\n7 8\n").unwrap();
    wrw()
        .args(["estimate", "--graph"])
        .arg(&split)
        .args(["-k", "3", "--steps", "10"])
        .assert()
        .code(1)
        .stderr(predicate::str::contains("not connected"));
    wrw()
        .args(["estimate", "--graph"])
        .arg(&split)
        .args(["-k", "3", "--steps", "100", "--burn-in", "10", "--lcc"])
        .assert()
        .success();

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 2\n2 x\n").unwrap();
    wrw()
        .args(["exact", "--graph"])
        .arg(&bad)
        .args(["-k", "3"])
        .assert()
        .code(1)
        .stderr(predicate::str::contains("line 2"));

    let big = dir.path().join("k8.txt");
    let mut f = std::fs::File::create(&big).unwrap();
    generate::complete(8).write_edge_list(&mut f).unwrap();
    wrw()
        .args(["exact", "--graph"])
        .arg(&big)
        .args(["-k", "5", "--cis-budget", "10"])
        .assert()
        .code(1)
        .stderr(predicate::str::contains("budget 10"));
}

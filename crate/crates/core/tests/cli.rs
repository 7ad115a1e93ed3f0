use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn blab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blab"))
        .args(args)
        .env_remove("BLAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn run_into(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    blab(&args)
}

#[test]
fn list_names_every_experiment() {
    let out = blab(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["alpha-centering", "lem2-H", "thm4-bessel", "williams-reversal"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
    assert_eq!(text.lines().count(), 17);
}

#[test]
fn unknown_experiment_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run_into(&out_dir, &["-e", "lem2-H", "no-such-experiment"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-experiment"));
    assert!(!out_dir.exists());
}

#[test]
fn bad_formats_and_budgets_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_into(dir.path(), &["-e", "lem2-H", "--format", "json,pdf"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_into(dir.path(), &["-e", "lem2-H", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn small_run_writes_every_artifact_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["-e", "alpha-centering", "alpha-law", "thm4-bessel", "--n", "20000", "--steps", "256", "--format", "json,csv,md,svg", "--seed", "3"];
    let a = dir.path().join("a");
    let first = run_into(&a, &args);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    for f in ["report.json", "metadata.json", "report.md", "checks.csv"] {
        assert!(a.join(f).is_file(), "{f}");
    }
    let before = fs::read(a.join("report.json")).unwrap();
    assert!(run_into(&a, &args).status.success());
    assert_eq!(before, fs::read(a.join("report.json")).unwrap());

    let report: serde_json::Value = serde_json::from_slice(&fs::read(a.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["version"], 1);
    assert_eq!(report["config"]["master_seed"], 3);
    let exps = report["experiments"].as_array().unwrap();
    assert_eq!(exps[0]["name"], "alpha-centering");
    let centre = &exps[0]["checks"][0];
    let [lo, hi] = [0, 1].map(|i| centre["interval"][i].as_f64().unwrap());
    assert!(lo <= 0.0 && 0.0 <= hi, "{lo} {hi}");

    let csv = fs::read_to_string(a.join("checks.csv")).unwrap();
    assert!(csv.starts_with("experiment,check,verdict,"));
    assert!(a.join("samples").is_dir());

    let svgs: Vec<_> = walk(&a.join("plots"));
    assert!(!svgs.is_empty());
    let svg = fs::read_to_string(&svgs[0]).unwrap();
    assert!(svg.starts_with("<svg"), "{}", &svg[..40.min(svg.len())]);

    let md = blab(&["report", a.join("report.json").to_str().unwrap()]);
    assert!(md.status.success());
    assert_eq!(String::from_utf8(md.stdout).unwrap(), fs::read_to_string(a.join("report.md")).unwrap());
}

#[test]
fn worker_variable_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_blab"))
        .args(["run", "-e", "lem2-H", "--n", "20000", "--out", dir.path().to_str().unwrap()])
        .env("BLAB_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_blab"))
        .args(["run", "-e", "lem2-H", "--n", "20000", "--workers", "4", "--out", dir.path().to_str().unwrap()])
        .env("BLAB_WORKERS", "1")
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("on 1 workers"));
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else if p.extension().is_some_and(|x| x == "svg") {
            out.push(p);
        }
    }
    out.sort();
    out
}

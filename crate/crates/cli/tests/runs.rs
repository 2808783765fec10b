use std::path::Path;
use std::process::Command as Process;

use bethegeom_cli::{render, run, validate_config, Format, Report, Suite};
use serde_json::Value;

fn report(raw: &str) -> Report {
    run(&validate_config(raw).unwrap())
}

fn artifact<'a>(r: &'a Report, name: &str) -> &'a Value {
    &r.artifacts
        .iter()
        .find(|a| a.name == name)
        .unwrap_or_else(|| panic!("no artifact {name}"))
        .value
}

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_bethegeom"))
}

fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn bethe_two_sites_one_magnon() {
    let r = report(r#"{"command":"bethe","chain":{"n":2},"k":1,"seed":4}"#);
    assert!(r.all_passed(), "{:#?}", r.checks);
    assert_eq!(artifact(&r, "k=1.solutions").as_array().unwrap().len(), 2);
    assert_eq!(artifact(&r, "k=1.quadratic_oracle").as_array().unwrap().len(), 2);
    let oracle = r.checks.iter().find(|c| c.name == "k=1.quadratic_oracle").unwrap();
    assert!(oracle.residual < 1e-10);
    for c in &r.checks {
        assert_eq!(c.suite, Suite::Bethe);
    }
}

#[test]
fn trs_two_sites_reports_hamiltonians_and_symmetric_functions() {
    let r = report(r#"{"command":"trs","chain":{"n":2},"seed":4}"#);
    assert!(r.all_passed(), "{:#?}", r.checks);
    let h = artifact(&r, "hamiltonians");
    for key in ["H", "e", "residuals"] {
        assert_eq!(h[key].as_array().unwrap().len(), 2, "{key}");
    }
    for res in h["residuals"].as_array().unwrap() {
        assert!(res.as_f64().unwrap() < 1e-8);
    }
    assert!(r.checks.iter().any(|c| c.name == "k=1.bethe_duality"));
}

#[test]
fn empty_suite_selection_runs_nothing() {
    let r = report(r#"{"chain":{"n":2},"suites":[]}"#);
    assert!(r.checks.is_empty());
    assert_eq!(r.summary.checks, 0);
    assert_eq!(r.exit_code(), 0);
    let csv = String::from_utf8(render(&r, Format::Csv).unwrap()).unwrap();
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn report_echoes_the_resolved_config() {
    let r = report(r#"{"command":"qq","chain":{"n":2},"seed":11}"#);
    let v: Value = serde_json::from_slice(&render(&r, Format::Json).unwrap()).unwrap();
    assert_eq!(v["config"]["truncation"], 6);
    assert_eq!(v["config"]["precision"], "std");
    assert_eq!(v["config"]["seed"], 11);
    assert_eq!(v["config"]["chain"]["a"].as_array().unwrap().len(), 2);
    assert_eq!(v["summary"]["checks"], r.checks.len());
}

#[test]
fn suite_streams_are_independent_of_selection() {
    let alone = report(r#"{"chain":{"n":2},"suites":["oper"],"seed":2}"#);
    let both = report(r#"{"chain":{"n":2},"suites":["qq","oper"],"seed":2}"#);
    let tail: Vec<_> = both.checks.iter().filter(|c| c.suite == Suite::Oper).collect();
    assert_eq!(tail.len(), alone.checks.len());
    for (a, b) in alone.checks.iter().zip(tail) {
        assert_eq!(a, b);
    }
}

#[test]
fn verify_all_runs_suites_in_order() {
    let r = report(r#"{"chain":{"n":2},"seed":1}"#);
    assert!(
        r.all_passed(),
        "{:#?}",
        r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()
    );
    let mut order: Vec<&str> = Vec::new();
    for c in &r.checks {
        if order.last() != Some(&c.suite.name()) {
            order.push(c.suite.name());
        }
    }
    assert_eq!(
        order,
        ["spinchain", "bethe", "q-operator", "vertex", "qq", "oper", "trs"]
    );
}

#[test]
fn binary_output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"chain":{"n":3}}"#);
    // same --out both times: the path is part of the echoed config
    let out = dir.path().join("report.json");
    let run = || {
        let st = bin()
            .args(["verify-all", "--config"])
            .arg(&cfg)
            .args(["--seed", "7", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert_eq!(st.code(), Some(0));
        std::fs::read(&out).unwrap()
    };
    let first = run();
    assert_eq!(first, run());
}

#[test]
fn csv_has_one_row_per_check() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"chain":{"n":2}}"#);
    let out = bin()
        .args(["qq", "--format", "csv", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,residual,tolerance,pass,seconds"));
    let rows: Vec<&str> = lines.collect();
    let r = report(r#"{"command":"qq","chain":{"n":2}}"#);
    assert_eq!(rows.len(), r.checks.len());
    assert!(rows.iter().all(|l| l.starts_with("qq.") && l.split(',').count() == 5));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(dir.path(), "ok.json", r#"{"chain":{"n":2}}"#);
    let code = |args: &[&str], cfg: &Path| {
        bin()
            .args(args)
            .arg("--config")
            .arg(cfg)
            .output()
            .unwrap()
            .status
            .code()
    };

    assert_eq!(code(&["trs"], &ok), Some(0));

    // a tolerance no extrapolation can meet
    let strict = write(
        dir.path(),
        "strict.json",
        r#"{"chain":{"n":3},"extrapolation":{"tolerance":1e-15}}"#,
    );
    assert_eq!(code(&["vertex"], &strict), Some(1));

    let hbar_one = write(dir.path(), "h.json", r#"{"chain":{"n":2,"hbar":[1,0]}}"#);
    assert_eq!(code(&["qq"], &hbar_one), Some(2));
    let broken = write(dir.path(), "b.json", "{");
    assert_eq!(code(&["qq"], &broken), Some(2));
    assert_eq!(code(&["qq"], &dir.path().join("missing.json")), Some(2));
    assert_eq!(code(&["nonsense"], &ok), Some(2));
    let unwritable = dir.path().join("no/such/dir/out.json");
    let st = bin()
        .args(["trs", "--config"])
        .arg(&ok)
        .arg("--out")
        .arg(&unwritable)
        .output()
        .unwrap()
        .status;
    assert_eq!(st.code(), Some(2));
}

#[test]
fn failing_check_is_reported_not_fatal() {
    let r = report(r#"{"command":"vertex","chain":{"n":3},"extrapolation":{"tolerance":1e-15}}"#);
    assert_eq!(r.exit_code(), 1);
    assert!(r.summary.failed > 0);
    assert!(r.checks.iter().any(|c| c.pass), "classical limit still passes");
}

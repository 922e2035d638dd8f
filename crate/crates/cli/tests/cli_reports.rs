use std::path::Path;
use std::process::Command;

use wholder::lab::{default_case, run_check, Expectation, Member, Verdict};
use wholder::field::Expr;
use wholder::Error;
use wholder_cli::suite::{EXIT_CONFIG, EXIT_ERROR, EXIT_FAIL, EXIT_PASS};
use wholder_cli::*;

fn config(dir: &Path, checks: &str, extra: &str) -> SuiteConfig {
    let json = format!(r#"{{"checks": {checks}, "output_dir": {:?}{extra}}}"#, dir.to_str().unwrap());
    SuiteConfig::from_json(&json).unwrap()
}

fn read_summary(dir: &Path) -> Summary {
    serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn listing_contains_the_core_checks() {
    let cases = list_cases();
    assert!(cases.len() >= 10);
    assert!(cases.iter().any(|c| c.id == "counterexample"));
    assert!(cases.iter().any(|c| c.id == "main-estimate"));
    assert_eq!(cases, list_cases());
}

#[test]
fn config_errors_are_reported_before_running() {
    assert!(matches!(SuiteConfig::from_json(r#"{"checks": [{"id": "unknown"}]}"#), Err(Error::Config(_))));
    assert!(matches!(SuiteConfig::from_json(r#"{"tolerances": {"atol": -1}}"#), Err(Error::Config(_))));
    assert!(matches!(SuiteConfig::from_json(r#"{"threads": 0}"#), Err(Error::Config(_))));
    assert!(matches!(SuiteConfig::from_json(r#"{"checks": [}"#), Err(Error::Config(_))));
    assert!(matches!(
        SuiteConfig::from_json(r#"{"checks": [{"id": "embedding", "name": "a"}, {"id": "cc-metric", "name": "a"}]}"#),
        Err(Error::Config(_))
    ));
    assert!(matches!(
        SuiteConfig::from_json(r#"{"checks": [{"id": "embedding", "params": {"m": 2, "n": 3, "gamma": 0.5}}]}"#),
        Err(Error::Config(_))
    ));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"checks": [{"id": "unknown"}]}"#).unwrap();
    assert_eq!(run_suite(&bad).exit_code, EXIT_CONFIG);
    assert_eq!(run_suite(&dir.path().join("missing.json")).exit_code, EXIT_CONFIG);
}

#[test]
fn empty_suite_passes_with_empty_summary() {
    let dir = tempfile::tempdir().unwrap();
    let run = run_config(&config(dir.path(), "[]", ""));
    assert_eq!(run.exit_code, EXIT_PASS);
    assert!(read_summary(dir.path()).checks.is_empty());
}

#[test]
fn suite_writes_reports_trails_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(dir.path(), r#"[{"id": "counterexample"}, {"id": "iterated-log", "name": "logs"}]"#, "");
    let run = run_config(&c);
    assert_eq!(run.exit_code, EXIT_PASS);
    let summary = read_summary(dir.path());
    assert_eq!(summary, run.summary);
    assert_eq!(exit_status(&summary), run.exit_code);
    assert_eq!(summary.checks.iter().map(|e| e.name.as_str()).collect::<Vec<_>>(), ["00-counterexample", "logs"]);
    for stem in ["00-counterexample", "logs"] {
        let report = std::fs::read_to_string(dir.path().join(format!("{stem}.json"))).unwrap();
        let csv = std::fs::read_to_string(dir.path().join(format!("{stem}.csv"))).unwrap();
        assert!(csv.starts_with("scale,term,value,slope\n"));
        assert_eq!(emit_plot_data_json(&report).unwrap(), csv);
    }
    assert!(dir.path().join("timings.json").exists());
}

#[test]
fn verdict_failures_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // the counterexample's divergence slope is far below this threshold
    let c = config(dir.path(), r#"[{"id": "counterexample"}]"#, r#", "tolerances": {"atol": 1e-10, "slope_threshold": 10}"#);
    let run = run_config(&c);
    assert_eq!(run.exit_code, EXIT_FAIL);
    assert_eq!(run.summary.checks[0].outcome, Outcome::Fail);
    assert!(!run.summary.checks[0].failed_assertions.is_empty());
    assert_eq!(exit_status(&read_summary(dir.path())), EXIT_FAIL);
}

#[test]
fn infrastructure_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(dir.path(), r#"[{"id": "embedding"}, {"id": "iterated-log"}]"#, r#", "window": {"point_cap": 1}"#);
    let run = run_config(&c);
    assert_eq!(run.exit_code, EXIT_ERROR);
    let s = read_summary(dir.path());
    assert_eq!(s.checks[0].outcome, Outcome::Error);
    assert!(s.checks[0].error.as_ref().unwrap().contains("cap"));
    assert_eq!(exit_status(&s), EXIT_ERROR);
}

#[test]
fn outputs_do_not_depend_on_the_thread_budget() {
    let checks = r#"[{"id": "counterexample"}, {"id": "embedding"}, {"id": "lower-order"}, {"id": "gauge-exactness"}]"#;
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_config(&config(a.path(), checks, r#", "threads": 1"#));
    run_config(&config(b.path(), checks, r#", "threads": 6"#));
    for f in ["summary.json", "00-counterexample.json", "01-embedding.json", "02-lower-order.csv", "03-gauge-exactness.json"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn plot_rows_for_zero_growing_and_single_rung_terms() {
    let mut case = default_case("main-estimate", None).unwrap();
    case.family = vec![Member::expr("zero", "", Expr::zero())];
    let zero = emit_plot_data(&run_check(&case).unwrap()).unwrap();
    let mut rows = zero.lines().skip(1).peekable();
    assert!(rows.peek().is_some());
    for row in rows {
        let cells: Vec<&str> = row.rsplitn(3, ',').collect();
        assert_eq!(cells[1], "0", "{row}");
    }

    let r = run_check(&default_case("counterexample", None).unwrap()).unwrap();
    let csv = emit_plot_data(&r).unwrap();
    let mixed: Vec<f64> = csv
        .lines()
        .filter(|l| l.contains("D(1,1)"))
        .map(|l| l.rsplitn(3, ',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(mixed.len(), 4);
    assert!(mixed.windows(2).all(|w| w[1] > w[0]));

    let r = run_check(&default_case("gauge-exactness", None).unwrap()).unwrap();
    let csv = emit_plot_data(&r).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",NA:too-few-rungs")));
}

#[test]
fn plot_rejects_malformed_reports() {
    let mut r = run_check(&default_case("iterated-log", None).unwrap()).unwrap();
    assert_eq!(r.expectation, Expectation::Exact);
    r.verdict = Verdict::Fail;
    assert!(matches!(emit_plot_data(&r), Err(Error::MalformedReport(_))));
    assert!(matches!(emit_plot_data_json("not json"), Err(Error::MalformedReport(_))));
}

#[test]
fn binary_runs_lists_and_plots() {
    let exe = env!("CARGO_BIN_EXE_wholder");
    let out = Command::new(exe).arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("counterexample")));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.json");
    std::fs::write(&cfg, r#"{"checks": [{"id": "counterexample"}]}"#).unwrap();
    let reports = dir.path().join("out");
    let status = Command::new(exe).args(["run", cfg.to_str().unwrap(), "--out", reports.to_str().unwrap(), "--threads", "2"]).status().unwrap();
    assert_eq!(status.code(), Some(EXIT_PASS));
    let status = Command::new(exe)
        .args(["run", cfg.to_str().unwrap(), "--out", reports.to_str().unwrap(), "--slope-threshold", "10"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_FAIL));
    let status = Command::new(exe).args(["run", cfg.to_str().unwrap(), "--atol=-1"]).status().unwrap();
    assert_eq!(status.code(), Some(EXIT_CONFIG));

    let csv = dir.path().join("trail.csv");
    let report = reports.join("00-counterexample.json");
    let status = Command::new(exe).args(["plot", report.to_str().unwrap(), "-o", csv.to_str().unwrap()]).status().unwrap();
    assert!(status.success());
    assert!(std::fs::read_to_string(csv).unwrap().starts_with("scale,term,value,slope"));
}

#[test]
fn shipped_default_config_parses() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.json");
    let c = SuiteConfig::load(&path).unwrap();
    let ids: Vec<&str> = c.checks.iter().map(|e| e.id.as_str()).collect();
    assert_eq!(ids.iter().filter(|&&i| i == "main-estimate").count(), 3);
    for case in list_cases() {
        assert!(ids.contains(&case.id.as_str()), "{} missing from the default suite", case.id);
    }
}

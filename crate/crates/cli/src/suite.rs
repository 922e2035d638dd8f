//! Runs a configured suite and writes reports, a summary, trails and timings.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use wholder::field::SpaceParams;
use wholder::lab::{run_check_timed, Verdict, VerificationReport, SCHEMA_VERSION};
use wholder::{Error, Result};

use crate::config::SuiteConfig;
use crate::plot::emit_plot_data;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryEntry {
    pub name: String,
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<SpaceParams>,
    pub outcome: Outcome,
    #[serde(default, with = "wholder::xreal")]
    pub constant: f64,
    #[serde(default)]
    pub failed_assertions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub checks: Vec<SummaryEntry>,
}

/// Exit status implied by a summary: errors win over failures.
pub fn exit_status(s: &Summary) -> i32 {
    if s.checks.iter().any(|c| c.outcome == Outcome::Error) {
        EXIT_ERROR
    } else if s.checks.iter().any(|c| c.outcome == Outcome::Fail) {
        EXIT_FAIL
    } else {
        EXIT_PASS
    }
}

#[derive(Clone, Debug, Serialize)]
struct Timing {
    name: String,
    seconds: f64,
}

pub struct SuiteRun {
    pub summary: Summary,
    pub exit_code: i32,
}

fn io(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::Io(format!("{}: {e}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(io(path))
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))
}

/// Loads the config at `path` and runs it. Config errors map to exit 2.
pub fn run_suite(path: &Path) -> SuiteRun {
    match SuiteConfig::load(path) {
        Ok(c) => run_config(&c),
        Err(e) => config_failure(e),
    }
}

fn config_failure(e: Error) -> SuiteRun {
    eprintln!("{e}");
    SuiteRun { summary: Summary { schema_version: SCHEMA_VERSION, checks: vec![] }, exit_code: EXIT_CONFIG }
}

/// Runs every check of a validated config on a pool of `config.threads` threads.
pub fn run_config(config: &SuiteConfig) -> SuiteRun {
    if let Err(e) = config.validate() {
        return config_failure(e);
    }
    let n = config.checks.len();
    let mut cases = Vec::with_capacity(n);
    for i in 0..n {
        match config.case(i) {
            Ok(c) => cases.push(c),
            Err(e) => return config_failure(e),
        }
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(config.threads).build() {
        Ok(p) => p,
        Err(e) => return config_failure(Error::Config(e.to_string())),
    };
    let results: Vec<_> = pool.install(|| cases.par_iter().map(run_check_timed).collect());

    let mut summary = Summary { schema_version: SCHEMA_VERSION, checks: Vec::with_capacity(n) };
    let mut reports: Vec<(String, VerificationReport)> = vec![];
    let mut timings = vec![];
    for (i, r) in results.into_iter().enumerate() {
        let name = config.stem(i);
        let e = &config.checks[i];
        let mut entry = SummaryEntry {
            name: name.clone(),
            id: e.id.clone(),
            params: Some(cases[i].params),
            outcome: Outcome::Error,
            constant: 0.0,
            failed_assertions: vec![],
            error: None,
        };
        match r {
            Ok((report, elapsed)) => {
                entry.outcome = if report.verdict == Verdict::Pass { Outcome::Pass } else { Outcome::Fail };
                entry.constant = report.constant;
                entry.failed_assertions = report
                    .failures()
                    .iter()
                    .map(|a| match &a.member {
                        Some(m) => format!("{} [{m}]", a.name),
                        None => a.name.clone(),
                    })
                    .collect();
                timings.push(Timing { name: name.clone(), seconds: elapsed.as_secs_f64() });
                reports.push((name, report));
            }
            Err(err) => entry.error = Some(err.to_string()),
        }
        summary.checks.push(entry);
    }

    let mut exit_code = exit_status(&summary);
    if let Err(e) = write_outputs(config, &summary, &reports, &timings) {
        eprintln!("output error: {e}");
        exit_code = EXIT_ERROR;
    }
    SuiteRun { summary, exit_code }
}

fn write_outputs(config: &SuiteConfig, summary: &Summary, reports: &[(String, VerificationReport)], timings: &[Timing]) -> Result<()> {
    let out = &config.output_dir;
    fs::create_dir_all(out).map_err(io(out))?;
    for (name, r) in reports {
        write(&out.join(format!("{name}.json")), &r.to_json()?)?;
        write(&out.join(format!("{name}.csv")), &emit_plot_data(r)?)?;
    }
    write(&out.join("summary.json"), &to_json(summary)?)?;
    write(&out.join("timings.json"), &to_json(&timings)?)?;
    Ok(())
}

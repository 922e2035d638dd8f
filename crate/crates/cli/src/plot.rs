//! Plot-ready CSV of every recorded trail.

use wholder::lab::VerificationReport;
use wholder::seminorm::Growth;
use wholder::{Error, Result};

pub const CSV_HEADER: [&str; 4] = ["scale", "term", "value", "slope"];

/// Minimum number of rungs for a slope fit.
const MIN_RUNGS: usize = 3;

fn slope_cell(class: Option<&Growth>, rungs: usize) -> String {
    match class {
        Some(Growth::Zero) => "0".into(),
        Some(g) => g.slope().map_or_else(|| "NA:unclassified".into(), |s| s.to_string()),
        None if rungs < MIN_RUNGS => "NA:too-few-rungs".into(),
        None => "NA:unclassified".into(),
    }
}

/// One row per (rung, term), terms named `member/label`.
pub fn emit_plot_data(report: &VerificationReport) -> Result<String> {
    if !report.is_consistent() {
        return Err(Error::MalformedReport("verdict does not follow from the recorded assertions".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for m in &report.members {
        for t in &m.terms {
            let term = format!("{}/{}", m.name, t.label);
            let slope = slope_cell(t.classification.as_ref(), t.trail.len());
            for r in &t.trail {
                w.write_record([r.scale.to_string(), term.clone(), r.value.to_string(), slope.clone()]).map_err(csv_err)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// As [`emit_plot_data`], from report JSON.
pub fn emit_plot_data_json(json: &str) -> Result<String> {
    emit_plot_data(&VerificationReport::from_json(json)?)
}

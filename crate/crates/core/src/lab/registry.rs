//! Named checks with default families, windows and ladders.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpaceParams;
use crate::lab::model::{CheckCase, Expectation, Member, VerificationReport};
use crate::lab::{classical, exact, families, interpolation, lower_order, main_estimate, small_time, trace_ext};
use crate::seminorm::{Ladder, LadderKind, Tolerances, Window};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseInfo {
    pub id: String,
    /// The inequality or identity under test.
    pub statement: String,
    pub default_params: SpaceParams,
}

type Runner = fn(&CheckCase) -> Result<VerificationReport>;

struct Entry {
    id: &'static str,
    statement: &'static str,
    params: (u32, f64, f64),
    run: Runner,
}

const ENTRIES: &[Entry] = &[
    Entry {
        id: "embedding",
        statement: "⟨u⟩^{(γ−ωγ)} ≤ C⟨u⟩_{ωγ}^{(γ)}",
        params: (2, 0.5, 0.5),
        run: classical::check_embedding,
    },
    Entry {
        id: "kdiff-equivalence",
        statement: "⟨u⟩_{ωγ}^{(γ)} and the weighted k-th difference seminorm are equivalent",
        params: (2, 0.5, 0.5),
        run: classical::check_kdiff_equivalence,
    },
    Entry {
        id: "minmax-weight",
        statement: "weights at the farther and at the nearer endpoint give equivalent seminorms",
        params: (2, 0.5, 0.5),
        run: classical::check_minmax_weight,
    },
    Entry {
        id: "eps-restriction",
        statement: "⟨u⟩_{ωγ}^{(γ)} ≤ Cε^{−1−γ} sup over |h| ≤ ε x_N of the same quotient",
        params: (2, 0.5, 0.5),
        run: classical::check_eps_restriction,
    },
    Entry {
        id: "cc-metric",
        statement: "Hölder seminorm in the control distance is equivalent to ⟨u⟩_{ωγ}^{(γ)}",
        params: (2, 0.5, 0.5),
        run: classical::check_cc_metric,
    },
    Entry {
        id: "main-estimate",
        statement: "finite weighted seminorms of all derivatives are bounded by the pure top-order ones",
        params: (2, 0.5, 0.5),
        run: main_estimate::check_main_estimate,
    },
    Entry {
        id: "counterexample",
        statement: "u = x_1²x_2^{2−n}: the right-hand side vanishes, the mixed seminorm is infinite",
        params: (2, 0.5, 0.5),
        run: main_estimate::check_counterexample,
    },
    Entry {
        id: "lower-order",
        statement: "lower-order normal derivatives are controlled; for integer n, ⟨D_{x_N}^{m−n}u⟩ is finite iff x_N^n D_{x_N}^m u vanishes on the boundary",
        params: (2, 1.0, 0.5),
        run: lower_order::check_lower_order,
    },
    Entry {
        id: "trace-extension",
        statement: "the Poisson extension reproduces boundary data of class C^l and is bounded by its norm",
        params: (2, 0.5, 0.5),
        run: trace_ext::check_trace_extension,
    },
    Entry {
        id: "interpolation",
        statement: "mixed seminorms are bounded by ε-weighted pure ones; sup norms by seminorms and lower derivatives",
        params: (2, 0.5, 0.5),
        run: interpolation::check_interpolation,
    },
    Entry {
        id: "general-domain",
        statement: "the main estimate on a disk with the boundary distance as weight",
        params: (2, 0.5, 0.5),
        run: main_estimate::check_general_domain,
    },
    Entry {
        id: "small-time",
        statement: "for zero initial data, lower-order norms on [0, T] decay like T^δ",
        params: (2, 1.0, 0.25),
        run: small_time::check_small_time,
    },
    Entry {
        id: "gauge-exactness",
        statement: "the gauge built from a planted multiple of the profile is that multiple",
        params: (2, 0.5, 0.5),
        run: exact::check_gauge_exactness,
    },
    Entry {
        id: "iterated-log",
        statement: "closed-form iterated logarithms equal their repeated-integral definition",
        params: (2, 0.5, 0.5),
        run: exact::check_iterated_log,
    },
];

fn entry(id: &str) -> Result<&'static Entry> {
    ENTRIES.iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownCheck(id.to_string()))
}

pub fn list_cases() -> Vec<CaseInfo> {
    ENTRIES
        .iter()
        .map(|e| CaseInfo {
            id: e.id.into(),
            statement: e.statement.into(),
            default_params: SpaceParams::new(e.params.0, e.params.1, e.params.2).expect("registry parameters are valid"),
        })
        .collect()
}

fn deep(base: Window, rungs: &[f64]) -> Ladder {
    families::deepening(base, rungs)
}

/// A three-rung ladder for checks that do not sweep a window.
fn nominal(dim: usize) -> Ladder {
    deep(Window::unit(dim).with_grading(0.5, 4).with_tangent(1.0, 3), &[0.0, 1.0, 2.0])
}

/// The default case for `id`, optionally with other parameters.
pub fn default_case(id: &str, params: Option<SpaceParams>) -> Result<CheckCase> {
    let e = entry(id)?;
    let p = match params {
        Some(p) => p,
        None => SpaceParams::new(e.params.0, e.params.1, e.params.2)?,
    };
    let m = p.m as f64;
    let mut dim = 2;
    let mut sweep = vec![];
    let mut aux_sweep = vec![];
    let (family, ladder, expectation): (Vec<Member>, Ladder, Expectation) = match id {
        "embedding" => (families::embedding(&p)?, deep(families::compact_window(2, 17, 16), &[0.0, 4.0, 8.0]), Expectation::RatioBounded),
        "kdiff-equivalence" => (
            families::kdiff(&p)?,
            Ladder::new(families::compact_window(2, 9, 10), LadderKind::Refining, vec![0.0, 1.0, 2.0]),
            Expectation::TwoSided,
        ),
        "minmax-weight" => (families::minmax(&p)?, deep(families::compact_window(2, 17, 16), &[0.0, 4.0, 8.0]), Expectation::RatioBounded),
        "eps-restriction" => {
            sweep = vec![0.5, 0.25, 0.125];
            let w = families::compact_window(2, 33, 40).with_grading(0.9, 40);
            (families::eps_restriction(&p)?, deep(w, &[0.0, 10.0, 20.0]), Expectation::RatioBounded)
        }
        "cc-metric" => (families::cc_metric(&p)?, deep(families::compact_window(2, 17, 16), &[0.0, 4.0, 8.0]), Expectation::TwoSided),
        "main-estimate" => {
            let w = families::compact_window(2, 9, 14).with_time(-1.6, 1.6, 5);
            (families::main_estimate(&p)?, Ladder::new(w, LadderKind::Expanding, vec![1.0, 2.0, 4.0]), Expectation::RatioBounded)
        }
        "counterexample" => (
            families::counterexample(&p),
            Ladder::new(Window::unit(2), LadderKind::Homothetic { time_power: m }, vec![1.0, 2.0, 4.0, 8.0]),
            Expectation::LhsDivergesRhsZero,
        ),
        "lower-order" => {
            let w = families::compact_window(2, 17, 12).interior();
            (families::lower_order(&p)?, deep(w, &[0.0, 8.0, 16.0]), Expectation::IffSplit)
        }
        "trace-extension" => {
            let mut w = Window::unit(2).with_tangent(4.0, 33).with_grading(0.7, 14);
            w.boundary_extent = 4.0;
            (families::trace_extension(&p), deep(w, &[0.0, 6.0, 12.0]), Expectation::RatioBounded)
        }
        "interpolation" => {
            sweep = (-6..=6).map(|k| 2f64.powi(k)).collect();
            aux_sweep = (-6..=4).map(|k| 2f64.powi(k)).collect();
            let w = families::compact_window(2, 17, 12).with_time(-1.6, 1.6, 7);
            (families::interpolation(&p)?, deep(w, &[0.0, 1.0, 2.0]), Expectation::RatioBounded)
        }
        "general-domain" => {
            let w = Window::disk(families::unit_disk(), 48).with_grading(0.7, 10);
            (families::general_domain(&p)?, deep(w, &[0.0, 3.0, 6.0]), Expectation::RatioBounded)
        }
        "small-time" => {
            sweep = vec![1.0, 0.5, 0.25, 0.125];
            let delta = (1.0 - p.gamma) / m;
            (families::small_time(&p)?, deep(small_time::default_window(2), &[0.0, 1.0, 2.0]), Expectation::SlopeAtLeast { delta })
        }
        "gauge-exactness" => (families::gauge_exactness(&p, &[-3.0, 1.0, 5.0]), nominal(2), Expectation::Exact),
        "iterated-log" => {
            dim = 1;
            sweep = vec![0.1, 0.5, 1.0, 2.0];
            (families::iterated_log(), nominal(1), Expectation::Exact)
        }
        _ => return Err(Error::UnknownCheck(id.to_string())),
    };
    Ok(CheckCase {
        id: id.into(),
        params: p,
        dim,
        family,
        ladder,
        lhs: String::new(),
        rhs: String::new(),
        expectation,
        sweep,
        aux_sweep,
        tolerances: Tolerances::default(),
    }
    .with_sides(e.statement))
}

impl CheckCase {
    fn with_sides(mut self, statement: &str) -> CheckCase {
        let (l, r) = statement.split_once(" ≤ ").unwrap_or((statement, ""));
        self.lhs = l.to_string();
        self.rhs = r.to_string();
        self
    }
}

/// Validates the case and runs the check named by its id.
pub fn run_check(case: &CheckCase) -> Result<VerificationReport> {
    let e = entry(&case.id)?;
    case.validate()?;
    (e.run)(case)
}

/// As [`run_check`], with the wall-clock time kept out of the report.
pub fn run_check_timed(case: &CheckCase) -> Result<(VerificationReport, Duration)> {
    let start = Instant::now();
    let r = run_check(case)?;
    Ok((r, start.elapsed()))
}

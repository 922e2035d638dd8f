//! Helpers shared by the checks.

use crate::lab::model::{CheckCase, Member, Recorder, Relation};
use crate::seminorm::growth::loglog_slope;
use crate::seminorm::{Growth, Ladder, Rung, SeminormEstimate, Tolerances};

pub fn member_dim(case: &CheckCase, m: &Member) -> usize {
    m.dim.unwrap_or(case.dim)
}

/// The ladder with its base window moved to dimension `dim` (same tangential width on every axis).
pub fn ladder_in_dim(ladder: &Ladder, dim: usize) -> Ladder {
    let mut l = ladder.clone();
    if l.base.tangent_half_widths.len() + 1 != dim {
        let w = l.base.tangent_half_widths.first().copied().unwrap_or(l.base.boundary_extent);
        l.base.tangent_half_widths = vec![w; dim.saturating_sub(1)];
        l.base.tangent_center = None;
    }
    l
}

/// The ladder without a time axis.
pub fn static_ladder(ladder: &Ladder) -> Ladder {
    let mut l = ladder.clone();
    l.base.time_points = 1;
    l.base.t_min = 0.0;
    l.base.t_max = 0.0;
    l
}

/// Least-squares log-log slope over the positive finite points; 0 with fewer than two.
pub fn slope(points: &[(f64, f64)]) -> f64 {
    let pos: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.0 > 0.0 && p.1 > 0.0 && p.1.is_finite()).collect();
    if pos.len() < 2 {
        0.0
    } else {
        loglog_slope(&pos)
    }
}

pub fn trail_points(trail: &[Rung]) -> Vec<(f64, f64)> {
    trail.iter().map(|r| (r.scale, r.value)).collect()
}

/// a/b, with 0/0 = 0 (both below atol) and a/0 = ∞.
pub fn ratio(a: f64, b: f64, atol: f64) -> f64 {
    if a.abs() < atol && b.abs() < atol {
        0.0
    } else if b.abs() < atol {
        f64::INFINITY
    } else {
        a / b
    }
}

pub fn ratio_trail(num: &[Rung], den: &[Rung], atol: f64) -> Vec<(f64, f64)> {
    num.iter().zip(den).map(|(a, b)| (a.scale, ratio(a.value, b.value, atol))).collect()
}

pub fn max_of(points: &[(f64, f64)]) -> f64 {
    points.iter().fold(0.0f64, |m, p| if p.1.is_nan() || m.is_nan() { f64::NAN } else { m.max(p.1) })
}

/// |r_last / r_prev − 1| for the finest two points; 0 when both vanish.
pub fn last_change(points: &[(f64, f64)]) -> f64 {
    match points {
        [.., a, b] => {
            if a.1 == 0.0 && b.1 == 0.0 {
                0.0
            } else if a.1 == 0.0 {
                f64::INFINITY
            } else {
                (b.1 / a.1 - 1.0).abs()
            }
        }
        _ => 0.0,
    }
}

pub fn record_estimate(rec: &mut Recorder, mi: usize, label: &str, est: &SeminormEstimate) {
    rec.term(mi, label, est.trail.clone(), est.classification.clone());
}

pub fn is_zero(est: &SeminormEstimate) -> bool {
    matches!(est.classification, Some(Growth::Zero))
}

/// Records num/den along the ladder and asserts that it is finite and does not grow.
/// Returns the largest ratio.
pub fn ratio_bounded(
    rec: &mut Recorder,
    mi: usize,
    name: &str,
    num: &SeminormEstimate,
    den: &SeminormEstimate,
    tol: &Tolerances,
) -> f64 {
    let member = rec.members[mi].name.clone();
    let pts = ratio_trail(&num.trail, &den.trail, tol.atol);
    rec.sweep(mi, format!("{name} ratio"), &pts);
    if is_zero(num) && is_zero(den) {
        rec.caveat(mi, format!("{name}: both sides vanish"));
    }
    let max = max_of(&pts);
    rec.check(format!("{name}: ratio finite"), Some(&member), max, Relation::Below { bound: f64::INFINITY });
    rec.check(
        format!("{name}: ratio slope"),
        Some(&member),
        slope(&pts),
        Relation::Below { bound: tol.slope_threshold },
    );
    rec.constant(max);
    max
}

//! Comparisons between seminorms of one function: embedding, k-th differences,
//! weight conventions, ε-restriction and the control distance.

use crate::error::Result;
use crate::lab::common::{
    ladder_in_dim, last_change, max_of, member_dim, ratio, ratio_bounded, ratio_trail, record_estimate, slope,
    trail_points,
};
use crate::lab::model::{CheckCase, Recorder, Relation, VerificationReport};
use crate::seminorm::engine::on_ladder;
use crate::seminorm::{
    cc_seminorm_on_grid, seminorm_ladder, EpsRestriction, PairKind, SeminormSpec, SymbolicField, TermRequest,
    WeightConvention,
};
use crate::field::MultiIndex;

const LINE_GRADING: f64 = 0.95;

/// ⟨u⟩^{(γ−ωγ)} against ⟨u⟩_{ωγ}^{(γ)}.
pub fn check_embedding(case: &CheckCase) -> Result<VerificationReport> {
    let p = &case.params;
    let tol = &case.tolerances;
    let mut rec = Recorder::new();
    for m in &case.family {
        let dim = member_dim(case, m);
        let ladder = ladder_in_dim(&case.ladder, dim);
        let field = SymbolicField::new(m.expression()?, dim)?;
        let plain = SeminormSpec::new(TermRequest::value(dim), PairKind::Isotropic, (1.0 - p.omega()) * p.gamma, 0.0);
        let weighted = SeminormSpec::new(TermRequest::value(dim), PairKind::Isotropic, p.gamma, p.wg());
        let a = seminorm_ladder(&field, &plain, &ladder, tol)?;
        let b = seminorm_ladder(&field, &weighted, &ladder, tol)?;
        let mi = rec.member(m);
        record_estimate(&mut rec, mi, &plain.label(), &a);
        record_estimate(&mut rec, mi, &weighted.label(), &b);
        ratio_bounded(&mut rec, mi, "embedding", &a, &b, tol);
    }
    Ok(rec.finish(case))
}

/// ⟨u⟩_{ωγ}^{(γ)} against the base-point weighted k-th difference seminorm. One-dimensional
/// members compare ⟨D^m u⟩_{ωγ}^{(γ)} with differences of order m + k − 1 and exponent m + γ.
/// The ladder is expected to refine the grid; the last two rungs give the refinement change.
pub fn check_kdiff_equivalence(case: &CheckCase) -> Result<VerificationReport> {
    let p = &case.params;
    let tol = &case.tolerances;
    let orders: Vec<u32> = if case.sweep.is_empty() { vec![2] } else { case.sweep.iter().map(|k| k.round() as u32).collect() };
    let mut rec = Recorder::new();
    for m in &case.family {
        let dim = member_dim(case, m);
        let mut ladder = ladder_in_dim(&case.ladder, dim);
        if dim == 1 {
            // a line has no tangential samples to pay for: grade it finely
            let finest = ladder.base.finest_level();
            ladder.base.grading_ratio = LINE_GRADING;
            ladder.base.levels = ((finest / ladder.base.boundary_extent).ln() / LINE_GRADING.ln()).ceil() as u32;
        }
        let field = SymbolicField::new(m.expression()?, dim)?;
        let mi = rec.member(m);
        let (direct, exponent, shift) = if dim == 1 {
            (TermRequest::new(MultiIndex::axis(1, 0, p.m), 0, 0.0), p.mf() + p.gamma, p.m - 1)
        } else {
            (TermRequest::value(dim), p.gamma, 0)
        };
        let a_spec = SeminormSpec::new(direct, PairKind::Isotropic, p.gamma, p.wg());
        let a = seminorm_ladder(&field, &a_spec, &ladder, tol)?;
        record_estimate(&mut rec, mi, &a_spec.label(), &a);
        for &k in &orders {
            let b_spec = SeminormSpec::new(TermRequest::value(dim), PairKind::Isotropic, exponent, p.wg())
                .with_convention(WeightConvention::Min)
                .with_order(k + shift);
            let b = seminorm_ladder(&field, &b_spec, &ladder, tol)?;
            record_estimate(&mut rec, mi, &b_spec.label(), &b);
            let pts = ratio_trail(&a.trail, &b.trail, tol.atol);
            let name = format!("k={}", k + shift);
            rec.sweep(mi, format!("{name} ratio"), &pts);
            let last = pts.last().map_or(0.0, |q| q.1);
            if last == 0.0 {
                rec.caveat(mi, format!("{name}: both sides vanish"));
                rec.check(format!("{name}: vacuous"), Some(&m.name), max_of(&pts), Relation::AtMost { bound: 0.0 });
                continue;
            }
            rec.check(format!("{name}: direct/difference"), Some(&m.name), last, Relation::Within { lo: 1e-2, hi: 1e2 });
            rec.check(format!("{name}: difference/direct"), Some(&m.name), 1.0 / last, Relation::Within { lo: 1e-2, hi: 1e2 });
            rec.check(format!("{name}: refinement change"), Some(&m.name), last_change(&pts), Relation::Below { bound: 0.1 });
            rec.constant(last.max(1.0 / last));
        }
    }
    Ok(rec.finish(case))
}

/// Largest-distance weight against lower-endpoint weight.
pub fn check_minmax_weight(case: &CheckCase) -> Result<VerificationReport> {
    let p = &case.params;
    let tol = &case.tolerances;
    let mut rec = Recorder::new();
    for m in &case.family {
        let dim = member_dim(case, m);
        let ladder = ladder_in_dim(&case.ladder, dim);
        let field = SymbolicField::new(m.expression()?, dim)?;
        let max_spec = SeminormSpec::new(TermRequest::value(dim), PairKind::Isotropic, p.gamma, p.wg());
        let min_spec = max_spec.clone().with_convention(WeightConvention::Min);
        let a = seminorm_ladder(&field, &max_spec, &ladder, tol)?;
        let b = seminorm_ladder(&field, &min_spec, &ladder, tol)?;
        let mi = rec.member(m);
        record_estimate(&mut rec, mi, &max_spec.label(), &a);
        record_estimate(&mut rec, mi, &min_spec.label(), &b);
        ratio_bounded(&mut rec, mi, "max/min", &a, &b, tol);
        // the reverse direction is immediate: the larger weight dominates
        let reverse = max_of(&ratio_trail(&b.trail, &a.trail, tol.atol));
        rec.check("min/max: at most one", Some(&m.name), reverse, Relation::AtMost { bound: 1.0 + 1e-12 });
    }
    Ok(rec.finish(case))
}

/// Full seminorm against ε^{−1−γ} times the seminorm over pairs with |h| ≤ ε·x_N.
pub fn check_eps_restriction(case: &CheckCase) -> Result<VerificationReport> {
    let p = &case.params;
    let tol = &case.tolerances;
    let eps_grid = if case.sweep.is_empty() { vec![0.5, 0.25, 0.125] } else { case.sweep.clone() };
    let mut rec = Recorder::new();
    for m in &case.family {
        let dim = member_dim(case, m);
        let ladder = ladder_in_dim(&case.ladder, dim);
        let field = SymbolicField::new(m.expression()?, dim)?;
        let full_spec = SeminormSpec::new(TermRequest::value(dim), PairKind::Isotropic, p.gamma, p.wg());
        let full = seminorm_ladder(&field, &full_spec, &ladder, tol)?;
        let mi = rec.member(m);
        record_estimate(&mut rec, mi, &full_spec.label(), &full);
        let mut by_eps = Vec::new();
        for &eps in &eps_grid {
            let spec = full_spec.clone().with_convention(WeightConvention::Min).with_eps(EpsRestriction::Below { eps });
            let r = seminorm_ladder(&field, &spec, &ladder, tol)?;
            record_estimate(&mut rec, mi, &spec.label(), &r);
            let scale = eps.powf(1.0 + p.gamma);
            let c: Vec<(f64, f64)> = full
                .trail
                .iter()
                .zip(&r.trail)
                .map(|(f, q)| (f.scale, ratio(f.value * scale, q.value, tol.atol)))
                .collect();
            rec.sweep(mi, format!("C(eps={eps})"), &c);
            let name = format!("eps={eps}");
            rec.check(format!("{name}: C finite"), Some(&m.name), max_of(&c), Relation::Below { bound: f64::INFINITY });
            rec.check(format!("{name}: C ladder slope"), Some(&m.name), slope(&c), Relation::Below { bound: tol.slope_threshold });
            let last = c.last().map_or(0.0, |q| q.1);
            rec.constant(last);
            by_eps.push((1.0 / eps, last));
        }
        rec.sweep(mi, "C against 1/eps", &by_eps);
        rec.check("C does not grow as eps shrinks", Some(&m.name), slope(&by_eps), Relation::Below { bound: tol.slope_threshold });
    }
    Ok(rec.finish(case))
}

/// Hölder constant in the control distance s(x, x̄) against ⟨u⟩_{ωγ}^{(γ)}.
pub fn check_cc_metric(case: &CheckCase) -> Result<VerificationReport> {
    let p = &case.params;
    let tol = &case.tolerances;
    let mut rec = Recorder::new();
    for m in &case.family {
        let dim = member_dim(case, m);
        let ladder = ladder_in_dim(&case.ladder, dim);
        let field = SymbolicField::new(m.expression()?, dim)?;
        let spec = SeminormSpec::new(TermRequest::value(dim), PairKind::Isotropic, p.gamma, p.wg());
        let a = on_ladder(&ladder, tol, |g| cc_seminorm_on_grid(&field, p.omega(), p.gamma, g))?;
        let b = seminorm_ladder(&field, &spec, &ladder, tol)?;
        let mi = rec.member(m);
        record_estimate(&mut rec, mi, "control-distance seminorm", &a);
        record_estimate(&mut rec, mi, &spec.label(), &b);
        let pts = ratio_trail(&a.trail, &b.trail, tol.atol);
        rec.sweep(mi, "cc ratio", &pts);
        let last = pts.last().map_or(0.0, |q| q.1);
        if last == 0.0 && max_of(&trail_points(&a.trail)) < tol.atol {
            rec.caveat(mi, "both sides vanish");
            rec.check("cc: vacuous", Some(&m.name), max_of(&pts), Relation::AtMost { bound: 0.0 });
            continue;
        }
        rec.check("cc: two-sided ratio", Some(&m.name), last, Relation::Within { lo: 1e-2, hi: 1e2 });
        rec.check("cc: ratio slope", Some(&m.name), slope(&pts), Relation::Below { bound: tol.slope_threshold });
        rec.constant(last.max(1.0 / last));
    }
    Ok(rec.finish(case))
}

//! The main estimate on the half-space and on a disk, and the counterexample showing that
//! its finiteness caveat is needed.

use crate::error::{Error, Result};
use crate::field::{MultiIndex, Poly, SpaceParams};
use crate::geometry::DomainGeometry;
use crate::lab::common::{last_change, max_of, member_dim, ratio_trail, slope, static_ladder, trail_points};
use crate::lab::model::{CheckCase, Recorder, Relation, VerificationReport};
use crate::seminorm::composite::{
    domain_lhs_terms, evaluate_terms_ladder, group_terms, norm_terms, sum_trails, theorem1_lhs_terms,
    theorem1_rhs_terms, GroupEstimate, NormTerm,
};
use crate::seminorm::{
    classify_growth, seminorm_ladder, Field, Growth, Ladder, PairKind, Rung, SeminormSpec, SymbolicField, TermRequest,
    Tolerances,
};

/// Judges LHS groups against the RHS along the ladder. Diverging groups are excluded under the
/// finiteness caveat; bounded groups must have bounded slopes and a stable ratio to the RHS.
fn judge_groups(rec: &mut Recorder, mi: usize, groups: &[GroupEstimate], rhs: &[Rung], tol: &Tolerances) -> Result<()> {
    let member = rec.members[mi].name.clone();
    let rhs_class = classify_growth(&trail_points(rhs), tol)?;
    rec.term(mi, "rhs", rhs.to_vec(), Some(rhs_class.clone()));
    let mut finite: Vec<Vec<(f64, f64)>> = Vec::new();
    for g in groups {
        rec.term(mi, format!("lhs {}", g.group), g.trail.clone(), Some(g.classification.clone()));
        match &g.classification {
            Growth::Zero => {}
            Growth::Diverging { slope } => {
                let why = if rhs_class == Growth::Zero { "finiteness caveat exercised (zero right-hand side)" } else { "finiteness caveat" };
                rec.caveat(mi, format!("{} excluded: not finite, slope {slope:.3}; {why}", g.group));
            }
            Growth::Bounded { slope } => {
                rec.check(format!("{}: slope", g.group), Some(&member), *slope, Relation::Below { bound: tol.slope_threshold });
                finite.push(ratio_trail(&g.trail, rhs, tol.atol));
            }
        }
    }
    if finite.is_empty() {
        rec.caveat(mi, "no nonzero finite left-hand side group");
        return Ok(());
    }
    let worst: Vec<(f64, f64)> = (0..rhs.len())
        .map(|k| (rhs[k].scale, finite.iter().fold(0.0f64, |m, r| m.max(r[k].1))))
        .collect();
    rec.sweep(mi, "max lhs/rhs ratio", &worst);
    let max = max_of(&worst);
    rec.check("max ratio finite", Some(&member), max, Relation::Below { bound: f64::INFINITY });
    rec.check("max ratio change over the finest two rungs", Some(&member), last_change(&worst), Relation::AtMost { bound: 0.2 });
    rec.constant(max);
    Ok(())
}

/// Checks x_N^{n−j} D^α u → 0 as x_N → 0 for j < n, |α| = m − j, α_N < m − j.
fn vanishing_conditions(rec: &mut Recorder, mi: usize, poly: &Poly, p: &SpaceParams, tol: &Tolerances) {
    let member = rec.members[mi].name.clone();
    let dim = poly.dim();
    let heights: Vec<f64> = (2..=10).map(|k| 10f64.powi(-k)).collect();
    let tangents = [-0.3, 0.0, 0.4];
    let mut j = 0u32;
    while (j as f64) < p.n {
        for alpha in MultiIndex::all_of_order(dim, p.m - j) {
            if alpha.normal() >= p.m - j {
                continue;
            }
            let f = poly.derivative(&alpha, 0).weighted(&DomainGeometry::HalfSpace, p.n - j as f64);
            let pts: Vec<(f64, f64)> = heights
                .iter()
                .map(|&h| {
                    let v = tangents.iter().fold(0.0f64, |m, &y| {
                        let mut x = vec![y; dim];
                        x[dim - 1] = h;
                        m.max(f.eval(&x, 0.0).abs())
                    });
                    (h, v)
                })
                .collect();
            let label = format!("vanishing w^{} D{} u", p.n - j as f64, alpha.label());
            rec.sweep(mi, label.clone(), &pts);
            if max_of(&pts) < tol.atol {
                rec.check(format!("{label}: zero"), Some(&member), max_of(&pts), Relation::Below { bound: tol.atol });
            } else {
                rec.check(format!("{label}: decays"), Some(&member), slope(&pts), Relation::Above { bound: 0.0 });
            }
        }
        j += 1;
    }
}

fn ladder_for(field: &dyn Field, ladder: &Ladder) -> Ladder {
    if field.is_time_independent() {
        static_ladder(ladder)
    } else {
        ladder.clone()
    }
}

fn evaluate_side(field: &dyn Field, terms: &[NormTerm], ladder: &Ladder, tol: &Tolerances) -> Result<Vec<GroupEstimate>> {
    group_terms(evaluate_terms_ladder(field, terms, ladder, tol)?, tol)
}

fn rhs_trail(field: &dyn Field, terms: &[NormTerm], ladder: &Ladder, tol: &Tolerances) -> Result<Vec<Rung>> {
    sum_trails(&evaluate_terms_ladder(field, terms, ladder, tol)?)
}

/// Main estimate on the half-space, per member.
pub fn check_main_estimate(case: &CheckCase) -> Result<VerificationReport> {
    let p = &case.params;
    let tol = &case.tolerances;
    let mut rec = Recorder::new();
    for m in &case.family {
        let dim = member_dim(case, m);
        let field = SymbolicField::new(m.expression()?, dim)?;
        let ladder = ladder_for(&field, &case.ladder);
        let parabolic = !field.is_time_independent();
        let groups = evaluate_side(&field, &theorem1_lhs_terms(p, dim, parabolic), &ladder, tol)?;
        let rhs = rhs_trail(&field, &theorem1_rhs_terms(p, dim, parabolic), &ladder, tol)?;
        let mi = rec.member(m);
        judge_groups(&mut rec, mi, &groups, &rhs, tol)?;
        vanishing_conditions(&mut rec, mi, field.poly(), p, tol);
    }
    if p.integer_n() {
        rec.note("integer n: ⟨D_{x_N}^{m−n} u⟩ is part of the first group and may diverge without violating the estimate");
    }
    Ok(rec.finish(case))
}

/// Zero right-hand side with a diverging mixed weighted seminorm, m = 2, 0 ≤ n < 1.
pub fn check_counterexample(case: &CheckCase) -> Result<VerificationReport> {
    let p = &case.params;
    let tol = &case.tolerances;
    if p.m != 2 || !(0.0..1.0).contains(&p.n) {
        return Err(Error::Precondition(format!("counterexample needs m = 2 and 0 ≤ n < 1, got m = {}, n = {}", p.m, p.n)));
    }
    let target = 2.0 - p.gamma + p.wg();
    let mut rec = Recorder::new();
    for m in &case.family {
        let dim = member_dim(case, m);
        if dim != 2 {
            return Err(Error::MalformedCase("counterexample members are two-dimensional".into()));
        }
        let field = SymbolicField::new(m.expression()?, dim)?;
        let ladder = ladder_for(&field, &case.ladder);
        let parabolic = !field.is_time_independent();
        let mi = rec.member(m);
        for t in evaluate_terms_ladder(&field, &theorem1_rhs_terms(p, dim, parabolic), &ladder, tol)? {
            let max = t.estimate.trail.iter().fold(0.0f64, |a, r| a.max(r.value));
            rec.term(mi, format!("rhs {}", t.label), t.estimate.trail.clone(), t.estimate.classification.clone());
            rec.check(format!("rhs {} below atol", t.label), Some(&m.name), max, Relation::Below { bound: tol.atol });
        }
        let mixed = SeminormSpec::new(TermRequest::new(MultiIndex::new(vec![1, 1]), 0, p.n), PairKind::Isotropic, p.gamma, p.wg());
        let est = seminorm_ladder(&field, &mixed, &ladder, tol)?;
        rec.term(mi, format!("mixed {}", mixed.label()), est.trail.clone(), est.classification.clone());
        let s = est.classification.as_ref().and_then(|g| g.slope()).unwrap_or(0.0);
        let diverging = matches!(est.classification, Some(Growth::Diverging { .. }));
        rec.check("mixed term diverges", Some(&m.name), if diverging { s } else { 0.0 }, Relation::Above { bound: tol.slope_threshold });
        rec.check("mixed term slope 2 − γ + ωγ", Some(&m.name), s, Relation::Near { target, tol: 0.15 });
        rec.caveat(mi, "right-hand side vanishes while a left-hand side seminorm is infinite: finiteness caveat exercised");
        rec.constant(est.value);
    }
    rec.note(format!("expected mixed-term slope {target}"));
    Ok(rec.finish(case))
}

/// Main-estimate analog on a disk with the boundary distance d(x) in place of x_N.
pub fn check_general_domain(case: &CheckCase) -> Result<VerificationReport> {
    let p = &case.params;
    let tol = &case.tolerances;
    if !matches!(case.ladder.base.geometry, DomainGeometry::Disk(_)) {
        return Err(Error::MalformedCase("general-domain needs a disk window".into()));
    }
    let mut rec = Recorder::new();
    for m in &case.family {
        let field = SymbolicField::new(m.expression()?, 2)?;
        let ladder = ladder_for(&field, &case.ladder);
        let parabolic = !field.is_time_independent();
        let groups = evaluate_side(&field, &domain_lhs_terms(p, 2, parabolic), &ladder, tol)?;
        let rhs = rhs_trail(&field, &norm_terms(p, crate::seminorm::NormVariant::Domain, 2, parabolic), &ladder, tol)?;
        let mi = rec.member(m);
        judge_groups(&mut rec, mi, &groups, &rhs, tol)?;
    }
    Ok(rec.finish(case))
}

//! Lower-order normal derivatives: bounds by the top-order one, the integer-n boundary
//! condition, Zygmund-type seminorms and the noninteger-n chain of bounds.

use crate::error::Result;
use crate::field::{MultiIndex, SpaceParams};
use crate::lab::common::{member_dim, ratio_bounded, record_estimate};
use crate::lab::model::{CheckCase, Recorder, Relation, VerificationReport};
use crate::operators::{gauge_tilde, LimitOptions};
use crate::seminorm::engine::{on_ladder, zygmund_on_grid, ZygmundVariant};
use crate::seminorm::{
    seminorm_ladder, sup_norm_on_grid, EpsRestriction, Field, Growth, Ladder, PairKind, SeminormEstimate, SeminormSpec,
    SymbolicField, TermRequest, Tolerances,
};

fn normal_term(dim: usize, order: u32, weight: f64) -> TermRequest {
    TermRequest::new(MultiIndex::axis(dim, dim - 1, order), 0, weight)
}

fn normal_seminorm(dim: usize, order: u32, weight: f64, exponent: f64, p: &SpaceParams) -> SeminormSpec {
    SeminormSpec::new(normal_term(dim, order, weight), PairKind::Directional { axis: dim - 1 }, exponent, p.wg())
}

fn slope_of(est: &SeminormEstimate) -> f64 {
    est.classification.as_ref().and_then(|g| g.slope()).unwrap_or(0.0)
}

pub fn check_lower_order(case: &CheckCase) -> Result<VerificationReport> {
    let p = &case.params;
    let tol = &case.tolerances;
    let mut rec = Recorder::new();
    for m in &case.family {
        let dim = member_dim(case, m);
        let expr = m.expression()?;
        let field = SymbolicField::new(expr, dim)?;
        let ladder = &case.ladder;
        let mi = rec.member(m);
        let top_spec = normal_seminorm(dim, p.m, p.n, p.gamma, p);
        let top = seminorm_ladder(&field, &top_spec, ladder, tol)?;
        record_estimate(&mut rec, mi, &top_spec.label(), &top);
        let mut j = 1u32;
        while (j as f64) < p.n {
            let spec = normal_seminorm(dim, p.m - j, p.n - j as f64, p.gamma, p);
            let est = seminorm_ladder(&field, &spec, ladder, tol)?;
            record_estimate(&mut rec, mi, &spec.label(), &est);
            ratio_bounded(&mut rec, mi, &format!("lower order j={j}"), &est, &top, tol);
            j += 1;
        }
        if p.integer_n() {
            integer_split(&mut rec, mi, expr, &field, p, ladder, tol)?;
        } else {
            noninteger_chain(&mut rec, mi, &field, p, ladder, tol)?;
        }
    }
    Ok(rec.finish(case))
}

/// Pair restriction and window shrink for the boundary split, so that cutoff derivatives
/// away from the boundary do not mask the growth at x_N → 0.
const SPLIT_EPS: f64 = 0.5;
const SPLIT_SHRINK: f64 = 5.0;

fn near_boundary(ladder: &Ladder) -> Ladder {
    let mut l = ladder.clone();
    for w in l.base.tangent_half_widths.iter_mut() {
        *w /= SPLIT_SHRINK;
    }
    l.base.boundary_extent /= SPLIT_SHRINK;
    l
}

/// ⟨D_{x_N}^{m−n} u⟩ is finite exactly when x_N^n D_{x_N}^m u vanishes on the boundary.
fn integer_split(
    rec: &mut Recorder,
    mi: usize,
    expr: &crate::field::Expr,
    field: &SymbolicField,
    p: &SpaceParams,
    ladder: &Ladder,
    tol: &Tolerances,
) -> Result<()> {
    let member = rec.members[mi].name.clone();
    let dim = field.dim();
    let boundary = gauge_tilde(expr, p, dim, &LimitOptions::default())?.a;
    let vanishes = boundary == 0.0;
    rec.sweep(mi, "boundary value of x_N^n D_{x_N}^m u", &[(0.0, boundary)]);
    let k = p.floor_m_minus_n();
    let spec = normal_seminorm(dim, k, 0.0, p.gamma, p).with_eps(EpsRestriction::Below { eps: SPLIT_EPS });
    let est = seminorm_ladder(field, &spec, &near_boundary(ladder), tol)?;
    record_estimate(rec, mi, &spec.label(), &est);
    let s = slope_of(&est);
    if vanishes {
        rec.check("vanishing boundary value: normal seminorm bounded", Some(&member), s, Relation::Below { bound: tol.slope_threshold });
    } else {
        let diverging = matches!(est.classification, Some(Growth::Diverging { .. }));
        rec.check(
            "nonzero boundary value: normal seminorm diverges",
            Some(&member),
            if diverging { s } else { 0.0 },
            Relation::Above { bound: tol.slope_threshold },
        );
    }
    if k >= 1 {
        let req = normal_term(dim, k - 1, 0.0);
        let mut variants = vec![ZygmundVariant::Tangential];
        if !field.is_time_independent() && ladder.base.time_points > 1 {
            variants.push(ZygmundVariant::Time);
        }
        for v in variants {
            let z = on_ladder(ladder, tol, |g| zygmund_on_grid(field, &req, p, g, v))?;
            let label = format!("zygmund {:?} of {}", v, req.label()).to_lowercase();
            record_estimate(rec, mi, &label, &z);
            rec.check(format!("{label}: finite"), Some(&member), z.value, Relation::Below { bound: f64::INFINITY });
            rec.check(format!("{label}: slope"), Some(&member), slope_of(&z), Relation::Below { bound: tol.slope_threshold });
        }
    }
    Ok(())
}

/// ⟨D^{[m−n]}u⟩_{x_N}^{(1−{n})} ≤ C|x_N^{{n}} D^{[m−n]+1}u|^{(0)} ≤ C⟨x_N^{{n}} D^{[m−n]+1}u⟩_{ωγ}
/// ≤ C⟨x_N^n D^m u⟩_{ωγ}, all derivatives in x_N.
fn noninteger_chain(
    rec: &mut Recorder,
    mi: usize,
    field: &SymbolicField,
    p: &SpaceParams,
    ladder: &Ladder,
    tol: &Tolerances,
) -> Result<()> {
    let dim = field.dim();
    let k = p.floor_m_minus_n();
    let frac = p.n - p.floor_n() as f64;
    let q1_spec = SeminormSpec::new(normal_term(dim, k, 0.0), PairKind::Directional { axis: dim - 1 }, 1.0 - frac, 0.0);
    let q2_req = normal_term(dim, k + 1, frac);
    let q3_spec = normal_seminorm(dim, k + 1, frac, p.gamma, p);
    let q4_spec = normal_seminorm(dim, p.m, p.n, p.gamma, p);
    let q1 = seminorm_ladder(field, &q1_spec, ladder, tol)?;
    let q2 = on_ladder(ladder, tol, |g| sup_norm_on_grid(field, &q2_req, g))?;
    let q3 = seminorm_ladder(field, &q3_spec, ladder, tol)?;
    let q4 = seminorm_ladder(field, &q4_spec, ladder, tol)?;
    record_estimate(rec, mi, &q1_spec.label(), &q1);
    record_estimate(rec, mi, &format!("sup|{}|", q2_req.label()), &q2);
    record_estimate(rec, mi, &q3_spec.label(), &q3);
    record_estimate(rec, mi, &q4_spec.label(), &q4);
    ratio_bounded(rec, mi, "chain 1", &q1, &q2, tol);
    ratio_bounded(rec, mi, "chain 2", &q2, &q3, tol);
    ratio_bounded(rec, mi, "chain 3", &q3, &q4, tol);
    Ok(())
}

//! Boundary data and its extension: reproduction of the data, decay in x_N, the norm bound
//! and the interpolation inequality on the boundary.

use crate::error::{Error, Result};
use crate::field::MultiIndex;
use crate::geometry::DomainGeometry;
use crate::lab::common::{last_change, max_of, ratio, slope};
use crate::lab::model::{CheckCase, Recorder, Relation, VerificationReport};
use crate::operators::poisson::{boundary_exponent, boundary_slice};
use crate::operators::{
    boundary_norm, poisson_extend, trace_field, BoundaryField, BoundaryFunction, BoundaryProfile, LimitOptions,
    PoissonExtension,
};
use crate::seminorm::composite::{evaluate_terms_ladder, norm_terms, sum_trails};
use crate::seminorm::engine::seminorm_on_grid;
use crate::seminorm::{Field, NormVariant, PairKind, SampleGrid, SeminormSpec, TermRequest};

/// Members supported beyond this radius skip the norm comparison.
const NORM_SUPPORT_LIMIT: f64 = 2.0;

fn value_at(ext: &PoissonExtension, alpha: &MultiIndex, x: &[f64]) -> Result<f64> {
    let eval = ext.term(&TermRequest::new(alpha.clone(), 0, 0.0), &DomainGeometry::HalfSpace)?;
    Ok(eval.eval(x, 0.0))
}

pub fn check_trace_extension(case: &CheckCase) -> Result<VerificationReport> {
    let p = &case.params;
    if case.dim != 2 {
        return Err(Error::UnsupportedDimension("trace-extension runs with one tangential variable".into()));
    }
    let l = boundary_exponent(p);
    let mut rec = Recorder::new();
    for m in &case.family {
        let v = m.boundary_function()?;
        let mi = rec.member(m);
        let name = m.name.clone();
        let ext = poisson_extend(v, 1, None)?;

        let ys = [-0.7, -0.2, 0.0, 0.3, 0.8];
        let pts: Vec<(Vec<f64>, f64)> = ys.iter().map(|&y| (vec![y], 0.0)).collect();
        let traces = trace_field(&ext, 0, p, &pts, &LimitOptions::default())?;
        let errs: Vec<(f64, f64)> = ys
            .iter()
            .zip(&traces)
            .map(|(&y, s)| {
                let b = ext.boundary_value(&[y]);
                (y, (s.value - b).abs() / b.abs().max(1.0))
            })
            .collect();
        rec.sweep(mi, "boundary reproduction error", &errs);
        rec.check("boundary reproduction", Some(&name), max_of(&errs), Relation::Below { bound: 1e-4 });

        match v.profile {
            BoundaryProfile::WindowedCosine { frequency } => {
                let mut pts = Vec::new();
                for s in [0.1, 0.2, 0.4] {
                    let got = value_at(&ext, &MultiIndex::zeros(2), &[0.0, s])?;
                    let want = (-frequency * s).exp();
                    pts.push((s, (got - want).abs() / want));
                }
                rec.sweep(mi, "decay error against exp(−ξ x_N)", &pts);
                rec.check("exponential decay", Some(&name), max_of(&pts), Relation::Below { bound: 1e-3 });
            }
            BoundaryProfile::AbsPower { power } => {
                let heights: Vec<f64> = (4..=11).map(|k| 2f64.powi(-k)).collect();
                for alpha in [MultiIndex::new(vec![0, p.m]), MultiIndex::new(vec![p.m, 0])] {
                    let pts = heights
                        .iter()
                        .map(|&s| Ok((s, value_at(&ext, &alpha, &[0.0, s])?.abs())))
                        .collect::<Result<Vec<_>>>()?;
                    let label = format!("|D{} P[v](0, x_N)|", alpha.label());
                    rec.sweep(mi, label.clone(), &pts);
                    rec.check(format!("{label}: slope l − m"), Some(&name), slope(&pts), Relation::Near {
                        target: power - p.mf(),
                        tol: 0.1,
                    });
                }
            }
            _ => {}
        }

        if v.support_radius() <= NORM_SUPPORT_LIMIT {
            extension_norm(&mut rec, mi, case, v)?;
        } else {
            rec.caveat(mi, "wide support: extension norm not compared");
        }
        boundary_interpolation(&mut rec, mi, case, v)?;
    }
    rec.note(format!("boundary regularity l = {l}"));
    Ok(rec.finish(case))
}

/// Tilde norm of η·P[v] on interior windows against the boundary norm of v.
fn extension_norm(rec: &mut Recorder, mi: usize, case: &CheckCase, v: &BoundaryFunction) -> Result<()> {
    let p = &case.params;
    let tol = &case.tolerances;
    let name = rec.members[mi].name.clone();
    let r = v.support_radius();
    let ext = poisson_extend(v, 1, Some((r + 0.5, r + 2.5, p.m + 2)))?;
    let parabolic = !ext.is_time_independent();
    let terms = norm_terms(p, NormVariant::Tilde, 2, parabolic);
    let lhs = sum_trails(&evaluate_terms_ladder(&ext, &terms, &case.ladder, tol)?)?;
    let rhs = boundary_norm(v, 1, p, &case.ladder.base)?;
    rec.term(mi, "extension tilde norm", lhs.clone(), None);
    rec.sweep(mi, "boundary norm", &[(1.0, rhs.total)]);
    let pts: Vec<(f64, f64)> = lhs.iter().map(|q| (q.scale, ratio(q.value, rhs.total, tol.atol))).collect();
    rec.sweep(mi, "extension/boundary ratio", &pts);
    if rhs.total < tol.atol && max_of(&pts) == 0.0 {
        rec.caveat(mi, "extension and boundary norms vanish");
    }
    rec.check("extension ratio finite", Some(&name), max_of(&pts), Relation::Below { bound: f64::INFINITY });
    rec.check("extension ratio slope", Some(&name), slope(&pts), Relation::Below { bound: tol.slope_threshold });
    rec.check("extension ratio settles", Some(&name), last_change(&pts), Relation::AtMost { bound: 0.2 });
    rec.constant(max_of(&pts));
    Ok(())
}

/// ⟨v⟩^{(γ)} ≤ 2^{1−γ} (sup|v|)^{1−γ} (⟨v⟩^{(1)})^γ on the boundary slice.
fn boundary_interpolation(rec: &mut Recorder, mi: usize, case: &CheckCase, v: &BoundaryFunction) -> Result<()> {
    let g = case.params.gamma;
    let name = rec.members[mi].name.clone();
    let field = BoundaryField::new(v, 1)?;
    let grid = SampleGrid::new(&boundary_slice(&case.ladder.base))?;
    let value = TermRequest::value(2);
    let frac = seminorm_on_grid(&field, &SeminormSpec::new(value.clone(), PairKind::Tangential, g, 0.0), &grid)?.value;
    let lip = seminorm_on_grid(&field, &SeminormSpec::new(value.clone(), PairKind::Tangential, 1.0, 0.0), &grid)?.value;
    let sup = crate::seminorm::sup_norm_on_grid(&field, &value, &grid)?.value;
    let c = ratio(frac, sup.powf(1.0 - g) * lip.powf(g), case.tolerances.atol);
    rec.sweep(mi, "boundary interpolation constant", &[(g, c)]);
    rec.check("boundary interpolation", Some(&name), c, Relation::AtMost { bound: 2f64.powf(1.0 - g) * (1.0 + 1e-9) });
    Ok(())
}

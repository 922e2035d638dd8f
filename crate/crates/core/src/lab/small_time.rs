//! Small-time decay of lower-order norms for functions with u(x,0) ≡ u_t(x,0) ≡ 0.

use crate::error::{Error, Result};
use crate::field::{MultiIndex, Poly, SpaceParams};
use crate::lab::common::{max_of, member_dim, slope};
use crate::lab::model::{CheckCase, Recorder, Relation, VerificationReport};
use crate::seminorm::engine::{seminorm_on_grid, sup_norm_on_grid};
use crate::seminorm::{PairKind, SampleGrid, SeminormSpec, SymbolicField, TermRequest, Tolerances, Window};

const SLACK: f64 = 0.05;

/// u(x,0) and u_t(x,0) vanish: exactly when every term carries t², otherwise on probe points.
fn zero_initial(poly: &Poly, window: &Window, atol: f64) -> Result<()> {
    if poly.min_time_power().map_or(true, |k| k >= 2) {
        return Ok(());
    }
    let grid = SampleGrid::new(window)?;
    let dim = poly.dim();
    let ut = poly.derivative(&MultiIndex::zeros(dim), 1);
    for s in 0..grid.n_spatial() {
        let x = grid.point(s);
        let (v, d) = (poly.eval(x, 0.0), ut.eval(x, 0.0));
        if v.abs() > atol || d.abs() > atol {
            return Err(Error::Precondition(format!(
                "u(x,0) = {v:.3e}, u_t(x,0) = {d:.3e} at x = {x:?}: initial data must vanish"
            )));
        }
    }
    Ok(())
}

struct Term {
    label: String,
    req: TermRequest,
    /// minimal T-exponents of sup, space seminorm and time seminorm
    exponents: [f64; 3],
}

fn terms(p: &SpaceParams, dim: usize) -> Vec<Term> {
    let g = p.gamma;
    let m = p.mf();
    let mut out = Vec::new();
    let mut j = 1u32;
    while j as f64 <= p.n && j <= p.m {
        let jm = j as f64 / m;
        for alpha in MultiIndex::all_of_order(dim, p.m - j) {
            let req = TermRequest::new(alpha, 0, p.n);
            out.push(Term { label: req.label(), req, exponents: [g / m, jm.min((1.0 - g) / m), jm] });
        }
        j += 1;
    }
    let delta = (g / m).min(1.0 / m).min((1.0 - g) / m);
    let mut k = 0u32;
    while (k as f64) < p.m_minus_n() {
        for alpha in MultiIndex::all_of_order(dim, k) {
            let req = TermRequest::new(alpha, 0, 0.0);
            out.push(Term { label: req.label(), req, exponents: [delta; 3] });
        }
        k += 1;
    }
    out
}

fn t_grid(case: &CheckCase) -> Vec<f64> {
    if case.sweep.is_empty() {
        vec![1.0, 0.5, 0.25, 0.125]
    } else {
        case.sweep.clone()
    }
}

pub fn check_small_time(case: &CheckCase) -> Result<VerificationReport> {
    let p = &case.params;
    let tol = &case.tolerances;
    let ts = t_grid(case);
    if ts.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
        return Err(Error::MalformedCase("small-time horizons must lie in (0, 1]".into()));
    }
    let base = &case.ladder.base;
    let time_points = base.time_points.max(2);
    let mut rec = Recorder::new();
    for m in &case.family {
        let dim = member_dim(case, m);
        let field = SymbolicField::new(m.expression()?, dim)?;
        zero_initial(field.poly(), &base.clone().with_time(0.0, 0.0, 1), tol.atol)?;
        let mi = rec.member(m);
        for term in terms(p, dim) {
            let specs = [
                SeminormSpec::new(term.req.clone(), PairKind::Isotropic, p.gamma, 0.0),
                SeminormSpec::new(term.req.clone(), PairKind::Time, p.gamma / p.mf(), 0.0),
            ];
            let mut rows: [Vec<(f64, f64)>; 3] = Default::default();
            for &t in &ts {
                let grid = SampleGrid::new(&base.clone().with_time(0.0, t, time_points))?;
                rows[0].push((t, sup_norm_on_grid(&field, &term.req, &grid)?.value));
                rows[1].push((t, seminorm_on_grid(&field, &specs[0], &grid)?.value));
                rows[2].push((t, seminorm_on_grid(&field, &specs[1], &grid)?.value));
            }
            for (i, kind) in ["sup", "space", "time"].iter().enumerate() {
                judge(&mut rec, mi, &format!("{kind} {}", term.label), &rows[i], term.exponents[i], tol);
            }
        }
    }
    rec.note(format!("δ = (1 − γ)/m = {}", (1.0 - p.gamma) / p.mf()));
    Ok(rec.finish(case))
}

fn judge(rec: &mut Recorder, mi: usize, label: &str, pts: &[(f64, f64)], exponent: f64, tol: &Tolerances) {
    let member = rec.members[mi].name.clone();
    rec.sweep(mi, label, pts);
    if max_of(pts) < tol.atol {
        rec.caveat(mi, format!("{label}: vanishes for every T"));
        return;
    }
    rec.check(format!("{label}: T-slope"), Some(&member), slope(pts), Relation::AtLeast { bound: exponent - SLACK });
}

pub fn default_window(dim: usize) -> Window {
    crate::lab::families::compact_window(dim, 9, 10).with_time(0.0, 1.0, 9)
}

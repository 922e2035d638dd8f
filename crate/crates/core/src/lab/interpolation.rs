//! Interpolation inequalities: the ε-weighted bounds of a mixed seminorm by pure ones, their
//! time analog, and the sup-norm bound with a free step h.
//!
//! The ε inequalities are checked the way they are proved: the base estimate is measured on
//! the dilated function v_ε (one variable scaled by ε) over a correspondingly dilated window,
//! then rewritten in terms of u. The fitted ε-slopes of the rewritten terms come from the
//! measured numbers.

use crate::error::Result;
use crate::field::{MultiIndex, SpaceParams};
use crate::geometry::DomainGeometry;
use crate::lab::common::{max_of, member_dim, ratio, slope, static_ladder};
use crate::lab::families::BUMP_RADIUS;
use crate::lab::model::{CheckCase, Recorder, Relation, VerificationReport};
use crate::seminorm::engine::{seminorm_on_grid, sup_norm_on_grid};
use crate::seminorm::{Field, PairKind, PointEval, SampleGrid, SeminormSpec, SymbolicField, TermRequest, Tolerances, Window};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Axis {
    Space(usize),
    Time,
}

/// v_ε(y, τ) = u(…, ε y_k, …, τ) or u(y, ε τ).
struct Dilated<'a> {
    inner: &'a dyn Field,
    axis: Axis,
    eps: f64,
}

struct DilatedTerm<'a> {
    eval: Box<dyn PointEval + 'a>,
    axis: Axis,
    eps: f64,
    factor: f64,
}

impl PointEval for DilatedTerm<'_> {
    fn eval(&self, x: &[f64], t: f64) -> f64 {
        match self.axis {
            Axis::Space(k) => {
                let mut y = x.to_vec();
                y[k] *= self.eps;
                self.factor * self.eval.eval(&y, t)
            }
            Axis::Time => self.factor * self.eval.eval(x, self.eps * t),
        }
    }
}

impl Field for Dilated<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn term(&self, req: &TermRequest, geometry: &DomainGeometry) -> Result<Box<dyn PointEval + '_>> {
        let dim = self.dim();
        let power = match self.axis {
            Axis::Space(k) if k == dim - 1 => req.alpha.normal() as f64 - req.pre_weight,
            Axis::Space(k) => req.alpha.0[k] as f64,
            Axis::Time => req.time_order as f64,
        };
        Ok(Box::new(DilatedTerm {
            eval: self.inner.term(req, geometry)?,
            axis: self.axis,
            eps: self.eps,
            factor: self.eps.powf(power),
        }))
    }

    fn is_time_independent(&self) -> bool {
        self.inner.is_time_independent()
    }
}

fn dilated_window(base: &Window, axis: Axis, eps: f64) -> Window {
    let mut w = base.clone();
    let dim = w.dim();
    match axis {
        Axis::Space(k) if k == dim - 1 => w.boundary_extent /= eps,
        Axis::Space(k) => {
            w.tangent_half_widths[k] /= eps;
            if let Some(c) = w.tangent_center.as_mut() {
                c[k] /= eps;
            }
        }
        Axis::Time => {
            w.t_min /= eps;
            w.t_max /= eps;
        }
    }
    w
}

/// Values of every spec on v_ε, per ε.
fn measure(field: &dyn Field, axis: Axis, eps: &[f64], specs: &[SeminormSpec], base: &Window) -> Result<Vec<Vec<f64>>> {
    let mut out = vec![Vec::with_capacity(eps.len()); specs.len()];
    for &e in eps {
        let d = Dilated { inner: field, axis, eps: e };
        let grid = SampleGrid::new(&dilated_window(base, axis, e))?;
        for (i, s) in specs.iter().enumerate() {
            out[i].push(seminorm_on_grid(&d, s, &grid)?.value);
        }
    }
    Ok(out)
}

fn pure(dim: usize, axis: usize, p: &SpaceParams) -> SeminormSpec {
    SeminormSpec::new(TermRequest::new(MultiIndex::axis(dim, axis, p.m), 0, p.n), PairKind::Directional { axis }, p.gamma, p.wg())
}

fn mixed_indices(dim: usize, m: u32) -> Vec<MultiIndex> {
    MultiIndex::all_of_order(dim, m).into_iter().filter(|a| a.0.iter().all(|&c| c < m)).collect()
}

fn sum_of(rows: &[Vec<f64>], k: usize) -> f64 {
    rows.iter().map(|r| r[k]).sum()
}

/// Judges L ≤ C(ε^{e1}A + ε^{e2}B) from measurements L_ε, A_ε, B_ε on v_ε.
#[allow(clippy::too_many_arguments)]
fn judge_sweep(
    rec: &mut Recorder,
    mi: usize,
    name: &str,
    eps: &[f64],
    l: &[f64],
    a: &[f64],
    b: &[f64],
    exponents: (f64, f64),
    tol: &Tolerances,
) {
    let member = rec.members[mi].name.clone();
    if l.iter().all(|v| v.abs() < tol.atol) {
        rec.caveat(mi, format!("{name}: left-hand side vanishes"));
        rec.check(format!("{name}: vacuous"), Some(&member), max_of(&eps.iter().copied().zip(l.iter().copied()).collect::<Vec<_>>()), Relation::Below { bound: tol.atol });
        return;
    }
    let c: Vec<(f64, f64)> = (0..eps.len()).map(|i| (eps[i], ratio(l[i], a[i] + b[i], tol.atol))).collect();
    rec.sweep(mi, format!("{name}: C(eps)"), &c);
    let cmax = max_of(&c);
    rec.check(format!("{name}: single constant"), Some(&member), cmax, Relation::Below { bound: f64::INFINITY });
    let n = c.len();
    if n >= 3 {
        rec.check(format!("{name}: C bounded as eps grows"), Some(&member), slope(&c[n - 3..]), Relation::Below { bound: tol.slope_threshold });
        rec.check(format!("{name}: C bounded as eps shrinks"), Some(&member), slope(&c[..3]), Relation::Above { bound: -tol.slope_threshold });
    }
    rec.constant(cmax);
    let reference = l.iter().copied().find(|v| v.abs() >= tol.atol).unwrap_or(1.0);
    for (label, side, target) in [("first term", a, exponents.0), ("second term", b, exponents.1)] {
        if side.iter().all(|v| v.abs() < tol.atol) {
            rec.caveat(mi, format!("{name}: {label} vanishes"));
            continue;
        }
        let pts: Vec<(f64, f64)> = (0..eps.len()).map(|i| (eps[i], reference * ratio(side[i], l[i], tol.atol))).collect();
        rec.sweep(mi, format!("{name}: {label}"), &pts);
        rec.check(format!("{name}: {label} eps-exponent"), Some(&member), slope(&pts), Relation::Near { target, tol: 0.1 });
    }
}

fn eps_grid(case: &CheckCase) -> Vec<f64> {
    if case.sweep.is_empty() {
        (-6..=6).map(|k| 2f64.powi(k)).collect()
    } else {
        case.sweep.clone()
    }
}

fn h_grid(case: &CheckCase) -> Vec<f64> {
    if case.aux_sweep.is_empty() {
        (-6..=4).map(|k| 2f64.powi(k)).collect()
    } else {
        case.aux_sweep.clone()
    }
}

pub fn check_interpolation(case: &CheckCase) -> Result<VerificationReport> {
    let p = &case.params;
    let tol = &case.tolerances;
    let eps = eps_grid(case);
    let mut rec = Recorder::new();
    for m in &case.family {
        let dim = member_dim(case, m);
        let field = SymbolicField::new(m.expression()?, dim)?;
        let timed = !field.is_time_independent() && case.ladder.base.time_points > 1;
        let base = if field.is_time_independent() { static_ladder(&case.ladder).base } else { case.ladder.base.clone() };
        let mi = rec.member(m);
        for k in 0..dim {
            let others: Vec<SeminormSpec> = (0..dim).filter(|&i| i != k).map(|i| pure(dim, i, p)).collect();
            let own = pure(dim, k, p);
            for alpha in mixed_indices(dim, p.m) {
                let ak = alpha.0[k] as f64;
                let lhs = SeminormSpec::new(TermRequest::new(alpha.clone(), 0, p.n), PairKind::Directional { axis: k }, p.gamma, p.wg());
                let mut specs = vec![lhs, own.clone()];
                specs.extend(others.iter().cloned());
                let rows = measure(&field, Axis::Space(k), &eps, &specs, &base)?;
                let a: Vec<f64> = (0..eps.len()).map(|i| sum_of(&rows[2..], i)).collect();
                let name = format!("axis {} D{}", k + 1, alpha.label());
                judge_sweep(&mut rec, mi, &name, &eps, &rows[0], &a, &rows[1], (-ak - p.gamma, p.mf() - ak), tol);
            }
        }
        if timed {
            let beta = p.gamma / p.mf();
            let dt = SeminormSpec::new(TermRequest::new(MultiIndex::zeros(dim), 1, 0.0), PairKind::Time, beta, 0.0);
            let pures: Vec<SeminormSpec> = (0..dim).map(|i| pure(dim, i, p)).collect();
            for alpha in MultiIndex::all_of_order(dim, p.m) {
                let lhs = SeminormSpec::new(TermRequest::new(alpha.clone(), 0, p.n), PairKind::Time, beta, 0.0);
                let mut specs = vec![lhs, dt.clone()];
                specs.extend(pures.iter().cloned());
                let rows = measure(&field, Axis::Time, &eps, &specs, &base)?;
                let a: Vec<f64> = (0..eps.len()).map(|i| sum_of(&rows[2..], i)).collect();
                let name = format!("time D{}", alpha.label());
                judge_sweep(&mut rec, mi, &name, &eps, &rows[0], &a, &rows[1], (-beta, 1.0), tol);
            }
        }
        sup_bound(&mut rec, mi, &field, p, &base, &h_grid(case), tol)?;
    }
    Ok(rec.finish(case))
}

/// Σ|x_N^{n−j} D^α u| ≤ C(h^{(1−ω)γ} H + F·P/h) for 0 ≤ j < n, with F = 1 + R or 1 + R^{n−j}.
fn sup_bound(
    rec: &mut Recorder,
    mi: usize,
    field: &dyn Field,
    p: &SpaceParams,
    window: &Window,
    hs: &[f64],
    tol: &Tolerances,
) -> Result<()> {
    let member = rec.members[mi].name.clone();
    let grid = SampleGrid::new(window)?;
    let dim = field.dim();
    let mut j = 0u32;
    while (j as f64) < p.n {
        let w = p.n - j as f64;
        let low = w < 1.0;
        let mut s = 0.0;
        let mut h_sum = 0.0;
        for alpha in MultiIndex::all_of_order(dim, p.m - j) {
            s += sup_norm_on_grid(field, &TermRequest::new(alpha.clone(), 0, w), &grid)?.value;
            let weight = if low { p.n } else { w };
            let spec = SeminormSpec::new(TermRequest::new(alpha, 0, weight), PairKind::Isotropic, p.gamma, p.wg());
            h_sum += seminorm_on_grid(field, &spec, &grid)?.value;
        }
        let mut low_sum = 0.0;
        for alpha in MultiIndex::all_of_order(dim, p.m - j - 1) {
            let weight = if low { 0.0 } else { w - 1.0 };
            low_sum += sup_norm_on_grid(field, &TermRequest::new(alpha, 0, weight), &grid)?.value;
        }
        let f = if low { 1.0 + BUMP_RADIUS.powf(w) } else { 1.0 + BUMP_RADIUS };
        let e = (1.0 - p.omega()) * p.gamma;
        let name = format!("sup bound j={j}");
        if s < tol.atol && h_sum < tol.atol && low_sum < tol.atol {
            rec.caveat(mi, format!("{name}: all terms vanish"));
            j += 1;
            continue;
        }
        let bound: Vec<(f64, f64)> = hs.iter().map(|&h| (h, h.powf(e) * h_sum + f * low_sum / h)).collect();
        let c: Vec<(f64, f64)> = bound.iter().map(|&(h, b)| (h, ratio(s, b, tol.atol))).collect();
        rec.sweep(mi, format!("{name}: bound(h)"), &bound);
        rec.sweep(mi, format!("{name}: C(h)"), &c);
        let cmax = max_of(&c);
        rec.check(format!("{name}: single constant"), Some(&member), cmax, Relation::Below { bound: f64::INFINITY });
        rec.constant(cmax);
        let best = bound.iter().fold(f64::INFINITY, |m, q| m.min(q.1));
        let ends = bound.first().map_or(0.0, |q| q.1).min(bound.last().map_or(0.0, |q| q.1));
        rec.check(format!("{name}: optimal h beats both ends"), Some(&member), best / ends, Relation::Below { bound: 1.0 });
        j += 1;
    }
    Ok(())
}

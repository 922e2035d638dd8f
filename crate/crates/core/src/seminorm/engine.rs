//! Grid suprema of difference quotients.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::multi_index::binomial;
use crate::field::{Expr, SpaceParams};
use crate::seminorm::field::{Field, PointEval, SymbolicField, TermRequest};
use crate::seminorm::grid::SampleGrid;
use crate::seminorm::growth::classify_growth;
use crate::seminorm::spec::{
    EpsRestriction, PairKind, Rung, SeminormEstimate, SeminormSpec, Tolerances, WeightConvention, Witness,
};
use crate::seminorm::window::{Ladder, Window};

/// Running maximum with deterministic tie-breaking on the pair key.
#[derive(Clone, Copy, Debug)]
struct Best {
    value: f64,
    key: (u32, u32, u32, u32),
    step: f64,
    nonfinite: bool,
    count: u64,
}

impl Best {
    fn none() -> Best {
        Best { value: -1.0, key: (u32::MAX, u32::MAX, u32::MAX, u32::MAX), step: 0.0, nonfinite: false, count: 0 }
    }

    fn offer(&mut self, value: f64, key: (u32, u32, u32, u32), step: f64, nonfinite: bool) {
        let better = if nonfinite != self.nonfinite {
            nonfinite
        } else if nonfinite {
            key < self.key
        } else {
            value > self.value || (value == self.value && key < self.key)
        };
        if better {
            self.value = value;
            self.key = key;
            self.step = step;
            self.nonfinite = nonfinite;
        }
    }

    fn merge(mut self, o: Best) -> Best {
        let count = self.count + o.count;
        if o.key != (u32::MAX, u32::MAX, u32::MAX, u32::MAX) {
            self.offer(o.value, o.key, o.step, o.nonfinite);
        }
        self.count = count;
        self
    }
}

struct Ctx<'a> {
    grid: &'a SampleGrid,
    vals: &'a [f64],
    pw: Vec<f64>,
    spec: &'a SeminormSpec,
    eval: &'a dyn PointEval,
    ns: usize,
}

impl<'a> Ctx<'a> {
    fn new(grid: &'a SampleGrid, vals: &'a [f64], spec: &'a SeminormSpec, eval: &'a dyn PointEval) -> Ctx<'a> {
        let pw = grid
            .weight
            .iter()
            .map(|&w| if spec.weight_power == 0.0 { 1.0 } else if w <= 0.0 { 0.0 } else { w.powf(spec.weight_power) })
            .collect();
        Ctx { grid, vals, pw, spec, eval, ns: grid.n_spatial() }
    }

    /// Lower endpoint (by boundary distance, then index) goes first.
    fn orient(&self, i: usize, j: usize) -> (usize, usize) {
        let (wi, wj) = (self.grid.weight[i], self.grid.weight[j]);
        if wi < wj || (wi == wj && i <= j) {
            (i, j)
        } else {
            (j, i)
        }
    }

    fn weight(&self, lo: usize, hi: usize) -> f64 {
        match self.spec.convention {
            WeightConvention::Max => self.pw[lo].max(self.pw[hi]),
            WeightConvention::Min => self.pw[lo],
        }
    }

    fn eps_ok(&self, lo: usize, step: f64) -> bool {
        let wl = self.grid.weight[lo];
        match self.spec.eps {
            EpsRestriction::None => true,
            EpsRestriction::Below { eps } => step <= eps * wl * (1.0 + 1e-12),
            EpsRestriction::Above { eps } => step >= eps * wl * (1.0 - 1e-12),
        }
    }

    /// Spatial pair at time index ti.
    fn spatial(&self, best: &mut Best, ti: usize, i: usize, j: usize) {
        let (lo, hi) = self.orient(i, j);
        let dist = self.grid.distance(lo, hi);
        if dist == 0.0 {
            return;
        }
        let k = self.spec.order as usize;
        let step = dist / k as f64;
        if !self.eps_ok(lo, step) {
            return;
        }
        let w = self.weight(lo, hi);
        if w == 0.0 {
            return;
        }
        best.count += 1;
        let key = (ti as u32, lo as u32, ti as u32, hi as u32);
        let (diff, mag) = if k == 1 {
            let (a, b) = (self.vals[ti * self.ns + lo], self.vals[ti * self.ns + hi]);
            (b - a, a.abs() + b.abs())
        } else {
            let t = self.grid.times[ti];
            let (xa, xb) = (self.grid.point(lo), self.grid.point(hi));
            let (mut acc, mut mag) = (0.0, 0.0);
            let mut buf = vec![0.0; xa.len()];
            for r in 0..=k {
                let v = if r == 0 {
                    self.vals[ti * self.ns + lo]
                } else if r == k {
                    self.vals[ti * self.ns + hi]
                } else {
                    let s = r as f64 / k as f64;
                    for (q, (a, b)) in buf.iter_mut().zip(xa.iter().zip(xb)) {
                        *q = a + s * (b - a);
                    }
                    self.eval.eval(&buf, t)
                };
                let sign = if (k - r) % 2 == 0 { 1.0 } else { -1.0 };
                let c = binomial(k as u32, r as u32) * v;
                acc += sign * c;
                mag += c.abs();
            }
            (acc, mag)
        };
        if !diff.is_finite() {
            best.offer(f64::INFINITY, key, step, true);
            return;
        }
        let num = below_roundoff(diff, mag);
        if num == 0.0 {
            best.offer(0.0, key, step, false);
            return;
        }
        let q = w * num / step.powf(self.spec.exponent);
        best.offer(q, key, step, false);
    }

    /// Time pair at spatial index s.
    fn temporal(&self, best: &mut Best, s: usize, ta: usize, tb: usize) {
        let w = self.pw[s];
        if w == 0.0 {
            return;
        }
        let k = self.spec.order as usize;
        let (t0, t1) = (self.grid.times[ta], self.grid.times[tb]);
        let step = (t1 - t0).abs() / k as f64;
        if step == 0.0 {
            return;
        }
        best.count += 1;
        let key = (ta as u32, s as u32, tb as u32, s as u32);
        let (diff, mag) = if k == 1 {
            let (a, b) = (self.vals[ta * self.ns + s], self.vals[tb * self.ns + s]);
            (b - a, a.abs() + b.abs())
        } else {
            let x = self.grid.point(s);
            let (mut acc, mut mag) = (0.0, 0.0);
            for r in 0..=k {
                let v = if r == 0 {
                    self.vals[ta * self.ns + s]
                } else if r == k {
                    self.vals[tb * self.ns + s]
                } else {
                    self.eval.eval(x, t0 + (t1 - t0) * r as f64 / k as f64)
                };
                let sign = if (k - r) % 2 == 0 { 1.0 } else { -1.0 };
                let c = binomial(k as u32, r as u32) * v;
                acc += sign * c;
                mag += c.abs();
            }
            (acc, mag)
        };
        if !diff.is_finite() {
            best.offer(f64::INFINITY, key, step, true);
            return;
        }
        let q = w * below_roundoff(diff, mag) / step.powf(self.spec.exponent);
        best.offer(q, key, step, false);
    }
}

/// |diff|, or 0 when it is within rounding error of the summed magnitudes.
fn below_roundoff(diff: f64, mag: f64) -> f64 {
    if diff.abs() <= 8.0 * f64::EPSILON * mag {
        0.0
    } else {
        diff.abs()
    }
}

fn finish(grid: &SampleGrid, best: Best, subsampled: bool) -> SeminormEstimate {
    if best.key.0 == u32::MAX {
        return SeminormEstimate { pairs: best.count, subsampled, ..SeminormEstimate::zero() };
    }
    let (ta, a, tb, b) = best.key;
    SeminormEstimate {
        value: if best.nonfinite { f64::INFINITY } else { best.value },
        non_finite: best.nonfinite,
        witness: Some(Witness {
            x: grid.point(a as usize).to_vec(),
            t: grid.times[ta as usize],
            x_bar: grid.point(b as usize).to_vec(),
            t_bar: grid.times[tb as usize],
            step: best.step,
        }),
        pairs: best.count,
        subsampled,
        trail: vec![],
        classification: None,
    }
}

/// Supremum of the difference quotient described by `spec` over the pair set of `grid`.
pub fn seminorm_on_grid(field: &dyn Field, spec: &SeminormSpec, grid: &SampleGrid) -> Result<SeminormEstimate> {
    spec.validate()?;
    if field.dim() != grid.dim {
        return Err(Error::InvalidSpec(format!(
            "field dimension {} does not match window dimension {}",
            field.dim(),
            grid.dim
        )));
    }
    let req: TermRequest = spec.request();
    let eval = field.term(&req, &grid.geometry)?;
    let vals = grid.values(eval.as_ref());
    seminorm_from_values(grid, &vals, eval.as_ref(), spec)
}

/// As [`seminorm_on_grid`] with precomputed grid values of the term.
pub fn seminorm_from_values(
    grid: &SampleGrid,
    vals: &[f64],
    eval: &dyn PointEval,
    spec: &SeminormSpec,
) -> Result<SeminormEstimate> {
    let ctx = Ctx::new(grid, vals, spec, eval);
    let ns = grid.n_spatial();
    let nt = grid.times.len();
    let (best, subsampled) = match spec.pairs {
        PairKind::Isotropic => {
            let total = (ns as u128) * (ns as u128 - 1) / 2 * nt as u128;
            let cap = grid.pair_cap.max(1) as u128;
            let stride = if total > cap { ((total + cap - 1) / cap) as usize } else { 1 };
            let max_stratum = grid.stratum.iter().copied().max().unwrap_or(0);
            let protect = (max_stratum / 4).max(2);
            let best = (0..nt * ns)
                .into_par_iter()
                .map(|job| {
                    let (ti, i) = (job / ns, job % ns);
                    let mut b = Best::none();
                    let pi = grid.stratum[i] <= protect;
                    for j in (i + 1)..ns {
                        if stride > 1 && !pi && grid.stratum[j] > protect && (i + j) % stride != 0 {
                            continue;
                        }
                        ctx.spatial(&mut b, ti, i, j);
                    }
                    b
                })
                .reduce(Best::none, Best::merge);
            (best, stride > 1)
        }
        PairKind::Directional { axis } => {
            let lat = grid
                .lattice
                .as_ref()
                .ok_or_else(|| Error::InvalidSpec("directional pairs need a lattice window".into()))?;
            if axis >= grid.dim {
                return Err(Error::InvalidSpec(format!("axis {axis} out of range")));
            }
            let lines = lat.lines(axis);
            let best = (0..nt * lines.len())
                .into_par_iter()
                .map(|job| {
                    let (ti, li) = (job / lines.len(), job % lines.len());
                    let line = &lines[li];
                    let mut b = Best::none();
                    for a in 0..line.len() {
                        for c in (a + 1)..line.len() {
                            ctx.spatial(&mut b, ti, line[a], line[c]);
                        }
                    }
                    b
                })
                .reduce(Best::none, Best::merge);
            (best, false)
        }
        PairKind::Tangential => {
            let lat = grid
                .lattice
                .as_ref()
                .ok_or_else(|| Error::InvalidSpec("tangential pairs need a lattice window".into()))?;
            let slices = lat.level_slices();
            let best = (0..nt * slices.len())
                .into_par_iter()
                .map(|job| {
                    let (ti, li) = (job / slices.len(), job % slices.len());
                    let sl = &slices[li];
                    let mut b = Best::none();
                    for a in 0..sl.len() {
                        for c in (a + 1)..sl.len() {
                            ctx.spatial(&mut b, ti, sl[a], sl[c]);
                        }
                    }
                    b
                })
                .reduce(Best::none, Best::merge);
            (best, false)
        }
        PairKind::Time => {
            let best = (0..ns)
                .into_par_iter()
                .map(|s| {
                    let mut b = Best::none();
                    for ta in 0..nt {
                        for tb in (ta + 1)..nt {
                            ctx.temporal(&mut b, s, ta, tb);
                        }
                    }
                    b
                })
                .reduce(Best::none, Best::merge);
            (best, false)
        }
    };
    Ok(finish(grid, best, subsampled))
}

/// sup |term| over the grid; non-finite values are reported as such.
pub fn sup_norm_on_grid(field: &dyn Field, req: &TermRequest, grid: &SampleGrid) -> Result<SeminormEstimate> {
    let eval = field.term(req, &grid.geometry)?;
    let vals = grid.values(eval.as_ref());
    Ok(sup_from_values(grid, &vals))
}

pub fn sup_from_values(grid: &SampleGrid, vals: &[f64]) -> SeminormEstimate {
    let ns = grid.n_spatial();
    let mut best = Best::none();
    for (k, &v) in vals.iter().enumerate() {
        let (ti, s) = ((k / ns) as u32, (k % ns) as u32);
        best.count += 1;
        if v.is_finite() {
            best.offer(v.abs(), (ti, s, ti, s), 0.0, false);
        } else {
            best.offer(f64::INFINITY, (ti, s, ti, s), 0.0, true);
        }
    }
    finish(grid, best, false)
}

fn symbolic(f: &Expr, window: &Window) -> Result<(SymbolicField, SampleGrid)> {
    let grid = SampleGrid::new(window)?;
    Ok((SymbolicField::new(f, grid.dim)?, grid))
}

/// First-difference weighted seminorm of an Expression on a window.
pub fn weighted_seminorm(f: &Expr, spec: &SeminormSpec, window: &Window) -> Result<SeminormEstimate> {
    if spec.order != 1 {
        return Err(Error::InvalidSpec("weighted_seminorm uses first differences (k = 1)".into()));
    }
    let (field, grid) = symbolic(f, window)?;
    seminorm_on_grid(&field, spec, &grid)
}

/// k-th difference seminorm (k > exponent) of an Expression on a window.
pub fn kth_difference_seminorm(f: &Expr, spec: &SeminormSpec, window: &Window) -> Result<SeminormEstimate> {
    if spec.order as f64 <= spec.exponent {
        return Err(Error::InvalidSpec("k-th difference seminorm needs k > exponent".into()));
    }
    let (field, grid) = symbolic(f, window)?;
    seminorm_on_grid(&field, spec, &grid)
}

/// sup over same-x time pairs of x_N^p |Δ_t f| / τ^β.
pub fn time_seminorm(f: &Expr, beta: f64, pre_weight: f64, window: &Window) -> Result<SeminormEstimate> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidSpec(format!("time exponent {beta} not in (0,1]")));
    }
    let (field, grid) = symbolic(f, window)?;
    let req = TermRequest::new(crate::field::MultiIndex::zeros(grid.dim), 0, pre_weight);
    let spec = SeminormSpec::new(req, PairKind::Time, beta, 0.0);
    seminorm_on_grid(&field, &spec, &grid)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZygmundVariant {
    /// |Δ²_{θ,x_N} Δ_{h,x'} f| / (θ |h|^{(1−ω)γ}).
    Tangential,
    /// |Δ²_{θ,x_N} Δ_{τ,t} f| / (θ τ^{γ/m}).
    Time,
}

/// Zygmund-type seminorm of `req` applied to `field`.
pub fn zygmund_on_grid(
    field: &dyn Field,
    req: &TermRequest,
    params: &SpaceParams,
    grid: &SampleGrid,
    variant: ZygmundVariant,
) -> Result<SeminormEstimate> {
    let lat = grid.lattice.as_ref().ok_or_else(|| Error::InvalidSpec("Zygmund seminorm needs a lattice window".into()))?;
    let eval = field.term(req, &grid.geometry)?;
    let dim = grid.dim;
    let levels = &lat.axes[dim - 1];
    let top = grid.top;
    let thetas: Vec<f64> = levels.iter().copied().filter(|&v| v > 0.0).collect();
    let exponent = match variant {
        ZygmundVariant::Tangential => (1.0 - params.omega()) * params.gamma,
        ZygmundVariant::Time => params.gamma / params.mf(),
    };
    // (spatial index a, spatial index b, time a, time b)
    let mut pairs: Vec<(usize, usize, usize, usize)> = Vec::new();
    match variant {
        ZygmundVariant::Tangential => {
            for axis in 0..dim - 1 {
                for line in lat.lines(axis) {
                    for a in 0..line.len() {
                        for c in (a + 1)..line.len() {
                            for ti in 0..grid.times.len() {
                                pairs.push((line[a], line[c], ti, ti));
                            }
                        }
                    }
                }
            }
        }
        ZygmundVariant::Time => {
            for s in 0..grid.n_spatial() {
                for ta in 0..grid.times.len() {
                    for tb in (ta + 1)..grid.times.len() {
                        pairs.push((s, s, ta, tb));
                    }
                }
            }
        }
    }
    let best = pairs
        .par_iter()
        .map(|&(a, b, ta, tb)| {
            let mut best = Best::none();
            let (xa, xb) = (grid.point(a), grid.point(b));
            let (t0, t1) = (grid.times[ta], grid.times[tb]);
            let h = match variant {
                ZygmundVariant::Tangential => grid.distance(a, b),
                ZygmundVariant::Time => (t1 - t0).abs(),
            };
            if h == 0.0 {
                return best;
            }
            let base_n = xa[dim - 1];
            let mut pa = xa.to_vec();
            let mut pb = xb.to_vec();
            for &th in &thetas {
                if base_n + 2.0 * th > top * (1.0 + 1e-12) {
                    continue;
                }
                best.count += 1;
                let (mut acc, mut mag) = (0.0, 0.0);
                for (r, c) in [(0usize, 1.0), (1, -2.0), (2, 1.0)] {
                    pa[dim - 1] = base_n + r as f64 * th;
                    pb[dim - 1] = base_n + r as f64 * th;
                    let (fa, fb) = (eval.eval(&pa, t0), eval.eval(&pb, t1));
                    acc += c * (fb - fa);
                    mag += f64::abs(c) * (fa.abs() + fb.abs());
                }
                let key = (ta as u32, a as u32, tb as u32, b as u32);
                if !acc.is_finite() {
                    best.offer(f64::INFINITY, key, th, true);
                    continue;
                }
                best.offer(below_roundoff(acc, mag) / (th * h.powf(exponent)), key, th, false);
            }
            best
        })
        .reduce(Best::none, Best::merge);
    Ok(finish(grid, best, false))
}

pub fn zygmund_seminorm(
    f: &Expr,
    params: &SpaceParams,
    window: &Window,
    variant: ZygmundVariant,
) -> Result<SeminormEstimate> {
    let (field, grid) = symbolic(f, window)?;
    zygmund_on_grid(&field, &TermRequest::value(grid.dim), params, &grid, variant)
}

/// Evaluates `compute` on every rung of `ladder`, recording the trail and the growth class.
pub fn on_ladder<F>(ladder: &Ladder, tol: &Tolerances, compute: F) -> Result<SeminormEstimate>
where
    F: Fn(&SampleGrid) -> Result<SeminormEstimate>,
{
    let rungs = ladder.windows()?;
    let mut trail = Vec::with_capacity(rungs.len());
    let mut last = SeminormEstimate::zero();
    for rw in &rungs {
        let grid = SampleGrid::new(&rw.window)?;
        let est = compute(&grid)?;
        trail.push(Rung { scale: rw.scale, level: rw.level, value: est.value });
        last = est;
    }
    let class = classify_growth(&trail.iter().map(|r| (r.scale, r.value)).collect::<Vec<_>>(), tol)?;
    last.trail = trail;
    last.classification = Some(class);
    Ok(last)
}

/// Seminorm of a field along a ladder.
pub fn seminorm_ladder(
    field: &dyn Field,
    spec: &SeminormSpec,
    ladder: &Ladder,
    tol: &Tolerances,
) -> Result<SeminormEstimate> {
    on_ladder(ladder, tol, |g| seminorm_on_grid(field, spec, g))
}

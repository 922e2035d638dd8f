//! Harmonic extension of compactly supported boundary data by the Poisson kernel.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::cutoff::RadialProfile;
use crate::field::fd::central_difference_fn;
use crate::field::multi_index::MultiIndex;
use crate::field::{cutoff, Expr, Poly};
use crate::geometry::DomainGeometry;
use crate::operators::quad::{breakpoints, gauss_legendre};
use crate::field::SpaceParams;
use crate::seminorm::composite::{evaluate_norm, NormBreakdown, NormTerm};
use crate::seminorm::field::{Field, PointEval, TermRequest};
use crate::seminorm::grid::SampleGrid;
use crate::seminorm::spec::{PairKind, SeminormSpec};
use crate::seminorm::window::Window;

/// Shape of the boundary data before the support window is applied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundaryProfile {
    Zero,
    Plateau { value: f64 },
    /// cos(ξ y_1).
    WindowedCosine { frequency: f64 },
    /// exp(−|y'|² / (2σ²)).
    Gaussian { sigma: f64 },
    /// |y_1|^l.
    AbsPower { power: f64 },
    /// Expression in (y', x_N, t) evaluated at x_N = 0.
    Symbolic { expr: Expr },
}

/// Radial window S(|y'|) with S ≡ 1 for |y'| ≤ r_inner and S ≡ 0 for |y'| ≥ r_outer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportSpec {
    pub r_inner: f64,
    pub r_outer: f64,
    pub order: u32,
}

/// v(y', t) = profile(y')·S(|y'|)·τ(t) with τ a polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFunction {
    pub profile: BoundaryProfile,
    pub support: SupportSpec,
    /// Coefficients of τ(t) = Σ c_k t^k.
    #[serde(default = "unit_time")]
    pub time_coeffs: Vec<f64>,
}

fn unit_time() -> Vec<f64> {
    vec![1.0]
}

impl BoundaryFunction {
    pub fn new(profile: BoundaryProfile, r_inner: f64, r_outer: f64, order: u32) -> BoundaryFunction {
        BoundaryFunction { profile, support: SupportSpec { r_inner, r_outer, order }, time_coeffs: unit_time() }
    }

    pub fn validate(&self, tangent_dim: usize) -> Result<()> {
        let s = &self.support;
        if !(s.r_inner > 0.0 && s.r_outer > s.r_inner && s.r_outer.is_finite()) {
            return Err(Error::InvalidSpec("boundary support needs 0 < r_inner < r_outer".into()));
        }
        if self.time_coeffs.is_empty() {
            return Err(Error::InvalidSpec("time factor needs at least one coefficient".into()));
        }
        match &self.profile {
            BoundaryProfile::Gaussian { sigma } if !(*sigma > 0.0) => {
                Err(Error::InvalidSpec("Gaussian width must be positive".into()))
            }
            BoundaryProfile::AbsPower { power } if !(*power >= 0.0) => {
                Err(Error::InvalidSpec("power must be nonnegative".into()))
            }
            BoundaryProfile::Symbolic { expr } => expr.to_poly(tangent_dim + 1).map(|_| ()),
            _ => Ok(()),
        }
    }

    /// Hölder exponent of the data: the power of |y_1|^l, else the smoothness of the window.
    pub fn regularity(&self) -> f64 {
        let window = self.support.order as f64;
        match self.profile {
            BoundaryProfile::AbsPower { power } => power.min(window),
            _ => window,
        }
    }

    pub fn support_radius(&self) -> f64 {
        self.support.r_outer
    }

    /// q-th derivative of τ.
    pub fn time_factor(&self, q: u32, t: f64) -> f64 {
        let mut s = 0.0;
        for (k, &c) in self.time_coeffs.iter().enumerate() {
            if k < q as usize {
                continue;
            }
            let mut f = 1.0;
            for i in 0..q as usize {
                f *= (k - i) as f64;
            }
            s += c * f * t.powi((k - q as usize) as i32);
        }
        s
    }
}

/// Evaluator of the spatial part profile·S for a fixed tangent dimension.
#[derive(Clone, Debug)]
struct Spatial {
    profile: BoundaryProfile,
    poly: Option<Poly>,
    window: RadialProfile,
    r_inner: f64,
    r_outer: f64,
}

impl Spatial {
    fn new(v: &BoundaryFunction, tangent_dim: usize) -> Result<Spatial> {
        let poly = match &v.profile {
            BoundaryProfile::Symbolic { expr } => Some(expr.to_poly(tangent_dim + 1)?),
            _ => None,
        };
        Ok(Spatial {
            profile: v.profile.clone(),
            poly,
            window: RadialProfile::new(v.support.r_inner, v.support.r_outer, v.support.order),
            r_inner: v.support.r_inner,
            r_outer: v.support.r_outer,
        })
    }

    fn eval(&self, y: &[f64]) -> f64 {
        let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r >= self.r_outer {
            return 0.0;
        }
        let s = self.window.eval(0, r);
        let p = match &self.profile {
            BoundaryProfile::Zero => 0.0,
            BoundaryProfile::Plateau { value } => *value,
            BoundaryProfile::WindowedCosine { frequency } => (frequency * y[0]).cos(),
            BoundaryProfile::Gaussian { sigma } => (-r * r / (2.0 * sigma * sigma)).exp(),
            BoundaryProfile::AbsPower { power } => y[0].abs().powf(*power),
            BoundaryProfile::Symbolic { .. } => {
                let mut x = y.to_vec();
                x.push(0.0);
                self.poly.as_ref().map(|p| p.eval(&x, 0.0)).unwrap_or(0.0)
            }
        };
        p * s
    }

    fn breaks(&self) -> Vec<f64> {
        vec![-self.r_outer, -self.r_inner, self.r_inner, self.r_outer]
    }

    fn singular_point(&self) -> Option<f64> {
        match self.profile {
            BoundaryProfile::AbsPower { .. } => Some(0.0),
            _ => None,
        }
    }
}

/// Quadrature controls for the Poisson integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonQuadrature {
    /// Gauss points per panel.
    pub points: usize,
    /// Longest panel in y.
    pub max_panel: f64,
    /// Inner region half-width in units of x_N.
    pub inner: f64,
    /// Angular trapezoid nodes (tangent dimension 2).
    pub angles: usize,
}

impl Default for PoissonQuadrature {
    fn default() -> Self {
        PoissonQuadrature { points: 12, max_panel: 0.1, inner: 5.0, angles: 96 }
    }
}

/// w = η·P[v] on the half-space over ℝ^{N−1}, N − 1 ∈ {1, 2}.
#[derive(Clone, Debug)]
pub struct PoissonExtension {
    pub boundary: BoundaryFunction,
    pub tangent_dim: usize,
    pub quad: PoissonQuadrature,
    spatial: Spatial,
    eta: Option<Poly>,
}

/// Builds the extension with a spatial cutoff η ≡ 1 on |x| ≤ r_inner, or without one.
pub fn poisson_extend(
    v: &BoundaryFunction,
    tangent_dim: usize,
    eta: Option<(f64, f64, u32)>,
) -> Result<PoissonExtension> {
    if !(1..=2).contains(&tangent_dim) {
        return Err(Error::UnsupportedDimension(format!("tangent dimension {tangent_dim} (supported: 1, 2)")));
    }
    v.validate(tangent_dim)?;
    let dim = tangent_dim + 1;
    let eta = match eta {
        None => None,
        Some((ri, ro, order)) => {
            if ri < v.support_radius() {
                return Err(Error::InvalidSpec("extension cutoff must equal 1 on the support of v".into()));
            }
            let e = cutoff(vec![0.0; dim], ri, ro, order, 0)?;
            Some(e.to_poly(dim)?)
        }
    };
    Ok(PoissonExtension {
        boundary: v.clone(),
        tangent_dim,
        quad: PoissonQuadrature::default(),
        spatial: Spatial::new(v, tangent_dim)?,
        eta,
    })
}

impl PoissonExtension {
    pub fn with_quadrature(mut self, q: PoissonQuadrature) -> Self {
        self.quad = q;
        self
    }

    /// Spatial part of the boundary data.
    pub fn boundary_value(&self, y: &[f64]) -> f64 {
        self.spatial.eval(y)
    }

    fn panels_1d(&self, w: f64, s: f64) -> Vec<f64> {
        let r = self.spatial.r_outer;
        let mut pts = self.spatial.breaks();
        for k in -10..=10 {
            pts.push(w + k as f64 * 0.5 * s);
        }
        let mut d = self.quad.inner * s;
        while d < 2.0 * r + w.abs() {
            pts.push(w - d);
            pts.push(w + d);
            d *= 2.0;
        }
        if let Some(y0) = self.spatial.singular_point() {
            let mut e = 0.5;
            while e > 1e-14 {
                pts.push(y0 - e);
                pts.push(y0 + e);
                e *= 0.25;
            }
        }
        let b = breakpoints(-r, r, &pts);
        let mut out = vec![b[0]];
        for p in b.windows(2) {
            let len = p[1] - p[0];
            let pieces = (len / self.quad.max_panel).ceil().max(1.0) as usize;
            for i in 1..=pieces {
                out.push(if i == pieces { p[1] } else { p[0] + len * i as f64 / pieces as f64 });
            }
        }
        out
    }

    /// D_w^a D_s^b of P[v] at (w, s), tangent dimension 1.
    fn deriv_1d(&self, a: u32, b: u32, w: f64, s: f64) -> f64 {
        let k = a + b;
        let mut fact = 1.0;
        for i in 1..=k {
            fact *= i as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let rot = Complex64::new(0.0, -1.0).powu(b);
        let coef = rot * (sign * fact / PI);
        let (xg, wg) = gauss_legendre(self.quad.points);
        let mut acc = 0.0;
        for p in self.panels_1d(w, s).windows(2) {
            let (c, h) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
            for (xi, wi) in xg.iter().zip(&wg) {
                let y = c + h * xi;
                let v = self.spatial.eval(&[y]);
                if v == 0.0 {
                    continue;
                }
                let z = Complex64::new(w - y, -s);
                let kern = (coef * z.inv().powu(k + 1)).im;
                acc += wi * h * v * kern;
            }
        }
        acc
    }

    /// P[v] at (x', s), tangent dimension 2, by polar quadrature about x'.
    fn value_2d(&self, x: &[f64], s: f64) -> f64 {
        let r = self.spatial.r_outer;
        let rho_max = (x[0] * x[0] + x[1] * x[1]).sqrt() + r;
        let (xg, wg) = gauss_legendre(self.quad.points);
        let na = self.quad.angles;
        let ring = |rho: f64| -> f64 {
            let mut sum = 0.0;
            for k in 0..na {
                let th = 2.0 * PI * (k as f64 + 0.5) / na as f64;
                sum += self.spatial.eval(&[x[0] + rho * th.cos(), x[1] + rho * th.sin()]);
            }
            sum / na as f64
        };
        let mut acc = 0.0;
        // inner disk ρ = s·tan φ: the kernel becomes sin φ dφ
        let phi_max = self.quad.inner.min(rho_max / s).atan();
        let np = ((phi_max / 0.1).ceil() as usize).max(1);
        for i in 0..np {
            let (a, b) = (phi_max * i as f64 / np as f64, phi_max * (i + 1) as f64 / np as f64);
            let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
            for (xi, wi) in xg.iter().zip(&wg) {
                let phi = c + h * xi;
                acc += wi * h * phi.sin() * ring(s * phi.tan());
            }
        }
        let mut lo = self.quad.inner * s;
        while lo < rho_max {
            let hi = (2.0 * lo).min(rho_max);
            let pieces = ((hi - lo) / self.quad.max_panel).ceil().max(1.0) as usize;
            for p in 0..pieces {
                let a = lo + (hi - lo) * p as f64 / pieces as f64;
                let b = lo + (hi - lo) * (p + 1) as f64 / pieces as f64;
                let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
                for (xi, wi) in xg.iter().zip(&wg) {
                    let rho = c + h * xi;
                    let kern = s * rho / (rho * rho + s * s).powf(1.5);
                    acc += wi * h * kern * ring(rho);
                }
            }
            lo = hi;
        }
        acc
    }

    /// D^α P[v] at x (x_N > 0), without η and τ.
    pub fn harmonic_derivative(&self, alpha: &MultiIndex, x: &[f64]) -> f64 {
        let s = x[x.len() - 1];
        if s <= 0.0 {
            return if alpha.is_zero() { self.spatial.eval(&x[..x.len() - 1]) } else { f64::NAN };
        }
        match self.tangent_dim {
            1 => self.deriv_1d(alpha.0[0], alpha.0[1], x[0], s),
            _ => {
                if alpha.is_zero() {
                    return self.value_2d(&x[..2], s);
                }
                let h = 0.05 * s;
                central_difference_fn(|q| self.value_2d(&q[..2], q[2]), alpha, x, h)
            }
        }
    }

    /// Leibniz plan for D^α(η·P[v]): (coefficient, D^β η, α − β).
    fn plan(&self, alpha: &MultiIndex) -> Vec<(f64, Option<Poly>, MultiIndex)> {
        match &self.eta {
            None => vec![(1.0, None, alpha.clone())],
            Some(eta) => alpha
                .sub_indices()
                .into_iter()
                .map(|beta| (alpha.binomial(&beta), Some(eta.derivative(&beta, 0)), alpha.sub(&beta)))
                .filter(|(_, e, _)| !e.as_ref().is_some_and(|p| p.is_zero()))
                .collect(),
        }
    }
}

struct ExtensionTerm<'a> {
    ext: &'a PoissonExtension,
    req: TermRequest,
    plan: Vec<(f64, Option<Poly>, MultiIndex)>,
}

impl PointEval for ExtensionTerm<'_> {
    /// D^α D_t^q (x_N^p · w) at (x, t).
    fn eval(&self, x: &[f64], t: f64) -> f64 {
        let tau = self.ext.boundary.time_factor(self.req.time_order, t);
        if tau == 0.0 {
            return 0.0;
        }
        let s = x[x.len() - 1];
        if s <= 0.0 && self.req.pre_weight > 0.0 && self.req.pre_weight > self.req.alpha.order() as f64 - self.ext.boundary.regularity() {
            return 0.0;
        }
        let wgt = if self.req.pre_weight == 0.0 { 1.0 } else { s.powf(self.req.pre_weight) };
        let mut total = 0.0;
        for (c, eta, rest) in &self.plan {
            let e = eta.as_ref().map_or(1.0, |p| p.eval(x, t));
            if e == 0.0 {
                continue;
            }
            total += c * e * self.ext.harmonic_derivative(rest, x);
        }
        wgt * tau * total
    }
}

impl Field for PoissonExtension {
    fn dim(&self) -> usize {
        self.tangent_dim + 1
    }

    fn term(&self, req: &TermRequest, geometry: &DomainGeometry) -> Result<Box<dyn PointEval + '_>> {
        if !matches!(geometry, DomainGeometry::HalfSpace) {
            return Err(Error::InvalidSpec("extensions live on the half-space".into()));
        }
        if req.alpha.dim() != self.dim() {
            return Err(Error::InvalidSpec("multi-index dimension mismatch".into()));
        }
        Ok(Box::new(ExtensionTerm { ext: self, req: req.clone(), plan: self.plan(&req.alpha) }))
    }

    fn is_time_independent(&self) -> bool {
        self.boundary.time_coeffs.iter().skip(1).all(|&c| c == 0.0)
    }
}

/// The boundary data as a field on ℝ^{N−1} × {0} × ℝ (values only, x_N ignored).
#[derive(Clone, Debug)]
pub struct BoundaryField {
    pub boundary: BoundaryFunction,
    tangent_dim: usize,
    spatial: Spatial,
}

impl BoundaryField {
    pub fn new(v: &BoundaryFunction, tangent_dim: usize) -> Result<BoundaryField> {
        v.validate(tangent_dim)?;
        Ok(BoundaryField { boundary: v.clone(), tangent_dim, spatial: Spatial::new(v, tangent_dim)? })
    }
}

struct BoundaryTerm<'a> {
    f: &'a BoundaryField,
    q: u32,
}

impl PointEval for BoundaryTerm<'_> {
    fn eval(&self, x: &[f64], t: f64) -> f64 {
        self.f.spatial.eval(&x[..self.f.tangent_dim]) * self.f.boundary.time_factor(self.q, t)
    }
}

impl Field for BoundaryField {
    fn dim(&self) -> usize {
        self.tangent_dim + 1
    }

    fn term(&self, req: &TermRequest, _geometry: &DomainGeometry) -> Result<Box<dyn PointEval + '_>> {
        if !req.alpha.is_zero() || req.pre_weight != 0.0 {
            return Err(Error::InvalidSpec("boundary fields provide values and time derivatives only".into()));
        }
        Ok(Box::new(BoundaryTerm { f: self, q: req.time_order }))
    }

    fn is_time_independent(&self) -> bool {
        self.boundary.time_coeffs.iter().skip(1).all(|&c| c == 0.0)
    }
}

/// Boundary regularity index l = m − n + (1 − ω)γ.
pub fn boundary_exponent(p: &SpaceParams) -> f64 {
    p.m_minus_n() + (1.0 - p.omega()) * p.gamma
}

/// The x_N = 0 slice of `window`.
pub fn boundary_slice(window: &Window) -> Window {
    let mut w = window.clone();
    w.boundary_extent = 0.0;
    w.include_boundary = true;
    w.levels_above = 0;
    w
}

/// sup|v| + ⟨v⟩_{x'}^{(l)} with k-th differences, k = [l] + 1, plus second differences of
/// exponent 1 + γ/m in t. Sampled on the x_N = 0 slice of `window`.
pub fn boundary_norm(v: &BoundaryFunction, tangent_dim: usize, p: &SpaceParams, window: &Window) -> Result<NormBreakdown> {
    let field = BoundaryField::new(v, tangent_dim)?;
    let grid = SampleGrid::new(&boundary_slice(window))?;
    if grid.dim != tangent_dim + 1 {
        return Err(Error::InvalidWindow("window dimension does not match the boundary data".into()));
    }
    let l = boundary_exponent(p);
    let value = TermRequest::value(grid.dim);
    let mut terms = vec![
        NormTerm::sup("sup", value.clone()),
        NormTerm::semi(
            "tangential",
            SeminormSpec::new(value.clone(), PairKind::Tangential, l, 0.0).with_order(l.floor() as u32 + 1),
        ),
    ];
    if !field.is_time_independent() && grid.times.len() > 1 {
        terms.push(NormTerm::semi(
            "time",
            SeminormSpec::new(value, PairKind::Time, 1.0 + p.gamma / p.mf(), 0.0).with_order(2),
        ));
    }
    evaluate_norm(&field, terms, &grid)
}

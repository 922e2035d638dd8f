//! Gauge polynomials: the boundary-singular part Q̃ and its Taylor completion Q.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::multi_index::factorial;
use crate::field::{Expr, MultiIndex, Poly, SpaceParams};
use crate::geometry::DomainGeometry;
use crate::operators::limit::{boundary_limit, LimitDiagnostics, LimitOptions};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeCoefficient {
    pub alpha: MultiIndex,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeResult {
    /// lim x_N^n D_{x_N}^m u at (0', 0, 0).
    pub a: f64,
    pub b: f64,
    pub q_tilde: Expr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Expr>,
    #[serde(default)]
    pub coefficients: Vec<GaugeCoefficient>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_time: Option<f64>,
    pub diagnostics: LimitDiagnostics,
}

/// b with x_N^n D_{x_N}^m (b·x_N^{m−n}) = 1, or with L_{m−n} in place of x_N^{m−n} for integer n.
pub fn gauge_normalization(p: &SpaceParams) -> f64 {
    if p.integer_n() {
        let k = p.floor_n();
        let sign = if (k - 1) % 2 == 0 { 1.0 } else { -1.0 };
        1.0 / (sign * factorial(k - 1))
    } else {
        let mmn = p.m_minus_n();
        1.0 / (0..p.m).map(|i| mmn - i as f64).product::<f64>()
    }
}

/// The profile x_N^{m−n} or L_{m−n}(x_N).
pub fn gauge_profile(p: &SpaceParams) -> Expr {
    if p.integer_n() {
        Expr::log(p.floor_m_minus_n())
    } else {
        Expr::xn(p.m_minus_n())
    }
}

fn ebar(dim: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[dim - 1] = 1.0;
    e
}

/// Extracts a along x_N → 0 at x' = 0, t = 0 and builds Q̃ = b·a·profile.
pub fn gauge_tilde(u: &Expr, p: &SpaceParams, dim: usize, opts: &LimitOptions) -> Result<GaugeResult> {
    if dim < 1 {
        return Err(Error::UnsupportedDimension("dimension must be positive".into()));
    }
    let poly = u.to_poly(dim)?;
    let g = poly
        .derivative(&MultiIndex::axis(dim, dim - 1, p.m), 0)
        .weighted(&DomainGeometry::HalfSpace, p.n);
    let probe = |s: f64| {
        let mut x = vec![0.0; dim];
        x[dim - 1] = s;
        g.eval(&x, 0.0)
    };
    let (mut a, diagnostics) = boundary_limit(probe, opts)?;
    let scale = diagnostics.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if a.abs() <= opts.tol * scale {
        a = 0.0;
    }
    let b = gauge_normalization(p);
    let q_tilde = if a == 0.0 { Expr::zero() } else { gauge_profile(p).scaled(a * b) };
    Ok(GaugeResult { a, b, q_tilde, q: None, coefficients: vec![], a_time: None, diagnostics })
}

/// (x − ē)^α as an expression.
fn shifted_monomial(alpha: &MultiIndex) -> Expr {
    let dim = alpha.dim();
    let mut factors = vec![];
    for (i, &k) in alpha.0.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let base = if i == dim - 1 { Expr::xn(1.0) - Expr::constant(1.0) } else { Expr::coord(i, 1) };
        factors.push(base.pow(k));
    }
    if factors.is_empty() {
        Expr::constant(1.0)
    } else {
        Expr::Product { factors }
    }
}

/// Q = Q̃ + Σ_{|α| ≤ [m−n]} a_α/α! (x − ē)^α + a⁽¹⁾ t with a_α = D^α(u − Q̃)(ē, 0).
pub fn gauge_full(u: &Expr, p: &SpaceParams, dim: usize, opts: &LimitOptions) -> Result<GaugeResult> {
    let mut res = gauge_tilde(u, p, dim, opts)?;
    let rest: Poly = (u.clone() - res.q_tilde.clone()).to_poly(dim)?;
    let e = ebar(dim);
    let mut terms = vec![res.q_tilde.clone()];
    for k in 0..=p.floor_m_minus_n() {
        for alpha in MultiIndex::all_of_order(dim, k) {
            let value = rest.derivative(&alpha, 0).eval(&e, 0.0);
            if !value.is_finite() {
                return Err(Error::Domain(format!("D^{} (u − Q̃) is not finite at ē", alpha.label())));
            }
            if value != 0.0 {
                terms.push(shifted_monomial(&alpha).scaled(value / alpha.factorial()));
            }
            res.coefficients.push(GaugeCoefficient { alpha, value });
        }
    }
    let a_time = rest.derivative(&MultiIndex::zeros(dim), 1).eval(&e, 0.0);
    if a_time != 0.0 {
        terms.push(Expr::t(1).scaled(a_time));
    }
    res.a_time = Some(a_time);
    res.q = Some(Expr::Sum { terms });
    Ok(res)
}

/// Max over probe points of the spread of x_N^{n−j} D^α Q, j ≤ n, |α| = m − j, α_N < m − n,
/// together with the spread of D_t Q.
pub fn gauge_constancy_residual(q: &Expr, p: &SpaceParams, dim: usize) -> Result<f64> {
    let poly = q.to_poly(dim)?;
    let probes = crate::field::fd::probe_points(dim);
    let spread = |f: &Poly| {
        let vals: Vec<f64> = probes.iter().map(|x| f.eval(x, 0.3)).collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    let mut worst = spread(&poly.derivative(&MultiIndex::zeros(dim), 1));
    for j in 0..=p.floor_n() {
        for alpha in MultiIndex::all_of_order(dim, p.m - j) {
            if alpha.normal() as f64 >= p.m_minus_n() {
                continue;
            }
            let f = poly.derivative(&alpha, 0).weighted(&DomainGeometry::HalfSpace, p.n - j as f64);
            worst = worst.max(spread(&f));
        }
    }
    Ok(worst)
}

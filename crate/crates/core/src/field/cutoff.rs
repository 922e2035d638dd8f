use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::multi_index::binomial;

/// Radial piecewise-polynomial cutoff: 1 for r ≤ r_inner, 0 for r ≥ r_outer,
/// a smoothstep of degree 2·order+1 in between (C^order globally).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    /// Center, one coordinate per spatial axis.
    pub center: Vec<f64>,
    /// Spatial axes entering the radius; `None` means all.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axes: Option<Vec<usize>>,
    /// If set, the radius also includes `t − time_center`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_center: Option<f64>,
    pub r_inner: f64,
    pub r_outer: f64,
    pub order: u32,
}

impl CutoffSpec {
    pub fn validate(&self, dim: usize) -> Result<()> {
        if !(self.r_inner > 0.0 && self.r_outer > self.r_inner) {
            return Err(Error::InvalidExpression(format!(
                "cutoff radii must satisfy 0 < r_inner < r_outer, got {} / {}",
                self.r_inner, self.r_outer
            )));
        }
        if self.center.len() != dim {
            return Err(Error::InvalidExpression(format!(
                "cutoff center has {} coordinates, expected {dim}",
                self.center.len()
            )));
        }
        if let Some(ax) = &self.axes {
            if ax.iter().any(|&a| a >= dim) {
                return Err(Error::InvalidExpression("cutoff axis out of range".into()));
            }
        }
        Ok(())
    }

    pub fn uses_axis(&self, axis: usize) -> bool {
        match &self.axes {
            None => true,
            Some(ax) => ax.contains(&axis),
        }
    }

    pub fn uses_time(&self) -> bool {
        self.time_center.is_some()
    }

    pub fn radius(&self, x: &[f64], t: f64) -> f64 {
        let mut r2 = 0.0;
        for (i, (&xi, &ci)) in x.iter().zip(&self.center).enumerate() {
            if self.uses_axis(i) {
                r2 += (xi - ci) * (xi - ci);
            }
        }
        if let Some(t0) = self.time_center {
            r2 += (t - t0) * (t - t0);
        }
        r2.sqrt()
    }

    pub fn gap(&self) -> f64 {
        self.r_outer - self.r_inner
    }
}

/// Coefficients of the smoothstep P_p(s) = s^{p+1} Σ_{i=0}^{p} C(p+i,i) C(2p+1,p−i) (−s)^i.
pub fn smoothstep_coeffs(p: u32) -> Vec<f64> {
    let mut c = vec![0.0; (2 * p + 2) as usize];
    for i in 0..=p {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        c[(p + 1 + i) as usize] = sign * binomial(p + i, i) * binomial(2 * p + 1, p - i);
    }
    c
}

fn poly_derivative(c: &[f64]) -> Vec<f64> {
    if c.len() <= 1 {
        return vec![0.0];
    }
    c.iter().enumerate().skip(1).map(|(i, &a)| a * i as f64).collect()
}

fn horner(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * s + a)
}

/// Radial profile of a cutoff with all its r-derivatives tabulated.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    r_inner: f64,
    gap: f64,
    /// derivs[k] = coefficients of d^k/ds^k P_p, up to the polynomial degree.
    derivs: Vec<Vec<f64>>,
}

impl RadialProfile {
    pub fn new(r_inner: f64, r_outer: f64, order: u32) -> Self {
        let mut derivs = vec![smoothstep_coeffs(order)];
        for k in 0..(2 * order + 1) as usize {
            let d = poly_derivative(&derivs[k]);
            derivs.push(d);
        }
        RadialProfile { r_inner, gap: r_outer - r_inner, derivs }
    }

    pub fn from_spec(spec: &CutoffSpec) -> Self {
        RadialProfile::new(spec.r_inner, spec.r_outer, spec.order)
    }

    /// k-th derivative in r of S(r) = 1 − P((r − r_inner)/gap); piecewise, zero beyond the degree.
    pub fn eval(&self, k: usize, r: f64) -> f64 {
        let s = (r - self.r_inner) / self.gap;
        if s <= 0.0 {
            return if k == 0 { 1.0 } else { 0.0 };
        }
        if s >= 1.0 || k >= self.derivs.len() {
            return 0.0;
        }
        let v = horner(&self.derivs[k], s) / self.gap.powi(k as i32);
        if k == 0 {
            1.0 - v
        } else {
            -v
        }
    }
}

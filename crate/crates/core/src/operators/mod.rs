//! Constructive operators: mollification, gauges, extension, traces.

pub mod gauge;
pub mod limit;
pub mod mollify;
pub mod poisson;
pub mod quad;
pub mod trace;

pub use gauge::{gauge_full, gauge_tilde, GaugeResult};
pub use limit::{boundary_limit, LimitDiagnostics, LimitOptions};
pub use mollify::{mollify, Kernel1d, Mollified};
pub use poisson::{
    boundary_norm, boundary_slice, poisson_extend, BoundaryField, BoundaryFunction, BoundaryProfile, PoissonExtension, SupportSpec,
};
pub use trace::{trace_expr, trace_field, TraceSample};

use crate::error::{Error, Result};
use crate::field::poly::log_k;
use crate::field::SpaceParams;
use crate::geometry::DomainGeometry;

/// L_k(x) with L_0 = ln; the limit 0 at x = 0 for k ≥ 1.
pub fn iterated_log(k: u32, x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(log_k(k, x))
    } else if x == 0.0 && k >= 1 {
        Ok(0.0)
    } else {
        Err(Error::Domain(format!("L_{k} is undefined at {x}")))
    }
}

/// Growth profile of D^j of a function with finite top-order weighted norm, up to a constant.
pub fn derivative_envelope(j: u32, x_n: f64, p: &SpaceParams) -> Result<f64> {
    if j > p.m {
        return Err(Error::Precondition(format!("derivative order {j} exceeds m = {}", p.m)));
    }
    if !(x_n > 0.0) {
        return Err(Error::Domain(format!("x_N = {x_n} must be positive")));
    }
    let jf = j as f64;
    Ok(if jf < p.n {
        x_n.powf(-(p.n - jf))
    } else if jf == p.n {
        1.0 + x_n.ln().abs()
    } else {
        1.0
    })
}

/// Boundary distance and its gradient.
pub fn domain_distance(geometry: &DomainGeometry, x: &[f64]) -> Result<(f64, Vec<f64>)> {
    geometry.distance(x)
}

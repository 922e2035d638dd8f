//! Boundary traces of normal derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Expr, MultiIndex, SpaceParams};
use crate::geometry::DomainGeometry;
use crate::operators::limit::{boundary_limit, LimitOptions};
use crate::seminorm::field::{Field, TermRequest};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    /// Tangential coordinates x'.
    pub x: Vec<f64>,
    pub t: f64,
    pub value: f64,
    /// Evaluated directly at x_N = 0 rather than extrapolated.
    pub direct: bool,
}

fn check_order(j: u32, p: &SpaceParams) -> Result<()> {
    if j as f64 > p.m_minus_n() {
        return Err(Error::Precondition(format!("trace order {j} exceeds m − n = {}", p.m_minus_n())));
    }
    Ok(())
}

/// D_{x_N}^j u(x', 0, t) at each (x', t), by extrapolation from x_N = start·ratio^i.
pub fn trace_field(
    u: &dyn Field,
    j: u32,
    p: &SpaceParams,
    points: &[(Vec<f64>, f64)],
    opts: &LimitOptions,
) -> Result<Vec<TraceSample>> {
    check_order(j, p)?;
    let dim = u.dim();
    let eval = u.term(&TermRequest::new(MultiIndex::axis(dim, dim - 1, j), 0, 0.0), &DomainGeometry::HalfSpace)?;
    points
        .iter()
        .map(|(xp, t)| {
            if xp.len() + 1 != dim {
                return Err(Error::InvalidSpec("trace point has the wrong number of tangential coordinates".into()));
            }
            let mut x = xp.clone();
            x.push(0.0);
            let g = |s: f64| {
                let mut y = x.clone();
                y[dim - 1] = s;
                eval.eval(&y, *t)
            };
            let (value, _) = boundary_limit(g, opts)?;
            Ok(TraceSample { x: xp.clone(), t: *t, value, direct: false })
        })
        .collect()
}

/// As [`trace_field`] for an expression, evaluating at x_N = 0 whenever the value there is finite.
pub fn trace_expr(
    u: &Expr,
    j: u32,
    p: &SpaceParams,
    points: &[(Vec<f64>, f64)],
    opts: &LimitOptions,
) -> Result<Vec<TraceSample>> {
    check_order(j, p)?;
    let dim = points.first().map_or(1, |(x, _)| x.len() + 1);
    let d = u.to_poly(dim)?.derivative(&MultiIndex::axis(dim, dim - 1, j), 0);
    points
        .iter()
        .map(|(xp, t)| {
            if xp.len() + 1 != dim {
                return Err(Error::InvalidSpec("trace points must share one dimension".into()));
            }
            let mut x = xp.clone();
            x.push(0.0);
            let v = d.eval(&x, *t);
            if v.is_finite() {
                return Ok(TraceSample { x: xp.clone(), t: *t, value: v, direct: true });
            }
            let g = |s: f64| {
                let mut y = x.clone();
                y[dim - 1] = s;
                d.eval(&y, *t)
            };
            let (value, _) = boundary_limit(g, opts)?;
            Ok(TraceSample { x: xp.clone(), t: *t, value, direct: false })
        })
        .collect()
}

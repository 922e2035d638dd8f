//! Boundary-adapted control distance and the Hölder constant measured in it.

use rayon::prelude::*;

use crate::error::Result;
use crate::seminorm::field::{Field, TermRequest};
use crate::seminorm::grid::SampleGrid;
use crate::seminorm::spec::{SeminormEstimate, Witness};

/// s(x, x̄) = |x − x̄| / (|x − x̄|^ω + x_N^ω + x̄_N^ω).
pub fn cc_distance(x: &[f64], x_bar: &[f64], omega: f64) -> f64 {
    let d = x.iter().zip(x_bar).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    if d == 0.0 {
        return 0.0;
    }
    let last = x.len() - 1;
    d / (d.powf(omega) + x[last].max(0.0).powf(omega) + x_bar[last].max(0.0).powf(omega))
}

/// sup |Δu| / s(x, x̄)^γ over equal-time pairs of the grid.
pub fn cc_seminorm_on_grid(field: &dyn Field, omega: f64, gamma: f64, grid: &SampleGrid) -> Result<SeminormEstimate> {
    let eval = field.term(&TermRequest::value(grid.dim), &grid.geometry)?;
    let vals = grid.values(eval.as_ref());
    let ns = grid.n_spatial();
    let nt = grid.times.len();
    let w = &grid.weight;
    // weights replace x_N so the distance follows the domain geometry
    let best = (0..nt * ns)
        .into_par_iter()
        .map(|job| {
            let (ti, i) = (job / ns, job % ns);
            let mut best: (f64, usize, usize) = (-1.0, usize::MAX, usize::MAX);
            for j in (i + 1)..ns {
                let d = grid.distance(i, j);
                if d == 0.0 {
                    continue;
                }
                let s = d / (d.powf(omega) + w[i].max(0.0).powf(omega) + w[j].max(0.0).powf(omega));
                let (a, b) = (vals[ti * ns + i], vals[ti * ns + j]);
                let q = if a.is_finite() && b.is_finite() { (a - b).abs() / s.powf(gamma) } else { f64::INFINITY };
                if q > best.0 {
                    best = (q, i, j);
                }
            }
            (best.0, ti, best.1, best.2)
        })
        .reduce(
            || (-1.0, usize::MAX, usize::MAX, usize::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2, b.3) < (a.1, a.2, a.3)) {
                    b
                } else {
                    a
                }
            },
        );
    if best.2 == usize::MAX {
        return Ok(SeminormEstimate::zero());
    }
    let (v, ti, i, j) = best;
    Ok(SeminormEstimate {
        value: v,
        non_finite: !v.is_finite(),
        witness: Some(Witness {
            x: grid.point(i).to_vec(),
            t: grid.times[ti],
            x_bar: grid.point(j).to_vec(),
            t_bar: grid.times[ti],
            step: grid.distance(i, j),
        }),
        pairs: (nt * ns * (ns - 1) / 2) as u64,
        subsampled: false,
        trail: vec![],
        classification: None,
    })
}

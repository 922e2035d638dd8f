//! Boundary limits along geometric sequences with Aitken acceleration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitOptions {
    /// First sample height.
    pub start: f64,
    pub ratio: f64,
    /// Cauchy tolerance, relative to max(1, |limit|).
    pub tol: f64,
    /// Consecutive agreeing extrapolants required.
    pub confirm: usize,
    pub max_samples: usize,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions { start: 0.25, ratio: 0.5, tol: 1e-8, confirm: 3, max_samples: 60 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitDiagnostics {
    pub heights: Vec<f64>,
    pub samples: Vec<f64>,
    pub extrapolants: Vec<f64>,
    pub converged: bool,
    /// Spread of the confirming extrapolants.
    pub spread: f64,
}

fn aitken(a: f64, b: f64, c: f64) -> f64 {
    let d1 = b - a;
    let d2 = c - b;
    let den = d2 - d1;
    if den.abs() <= 1e-14 * (a.abs() + b.abs() + c.abs()) || den == 0.0 {
        c
    } else {
        c - d2 * d2 / den
    }
}

/// lim_{s→0} g(s) sampled at s = start·ratio^j.
pub fn boundary_limit<G: Fn(f64) -> f64>(g: G, opts: &LimitOptions) -> Result<(f64, LimitDiagnostics)> {
    if !(opts.ratio > 0.0 && opts.ratio < 1.0 && opts.start > 0.0 && opts.confirm >= 1) {
        return Err(Error::InvalidSpec("limit options: need 0 < ratio < 1, start > 0".into()));
    }
    let mut diag = LimitDiagnostics { heights: vec![], samples: vec![], extrapolants: vec![], converged: false, spread: f64::INFINITY };
    let mut s = opts.start;
    for _ in 0..opts.max_samples {
        let v = g(s);
        diag.heights.push(s);
        diag.samples.push(v);
        s *= opts.ratio;
        if !v.is_finite() {
            return Err(Error::NoLimit(format!("non-finite sample {v} at height {}", diag.heights.last().unwrap())));
        }
        let k = diag.samples.len();
        if k < 3 {
            continue;
        }
        let (a, b, c) = (diag.samples[k - 3], diag.samples[k - 2], diag.samples[k - 1]);
        let scale = a.abs().max(b.abs()).max(c.abs());
        let shrinking = (c - b).abs() <= (b - a).abs() * (1.0 - 1e-3) || (c - b).abs() <= 1e-13 * scale.max(1e-300);
        diag.extrapolants.push(if shrinking { aitken(a, b, c) } else { f64::NAN });
        let e = &diag.extrapolants;
        if e.len() >= opts.confirm {
            let tail = &e[e.len() - opts.confirm..];
            if tail.iter().all(|x| x.is_finite()) {
                let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lim = *tail.last().unwrap();
                if hi - lo <= opts.tol * lim.abs().max(1.0) {
                    diag.converged = true;
                    diag.spread = hi - lo;
                    return Ok((lim, diag));
                }
            }
        }
    }
    Err(Error::NoLimit(format!(
        "extrapolants did not settle within {} samples (last {:?})",
        opts.max_samples,
        diag.extrapolants.last()
    )))
}

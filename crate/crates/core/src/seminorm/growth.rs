use crate::error::{Error, Result};
use crate::seminorm::spec::{Growth, Tolerances};

/// Least-squares slope of ln(value) against ln(scale).
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Classifies a ladder trail of (scale, value) as zero, bounded or diverging.
pub fn classify_growth(trail: &[(f64, f64)], tol: &Tolerances) -> Result<Growth> {
    if trail.len() < 3 {
        return Err(Error::TooFewRungs(trail.len()));
    }
    if trail.iter().any(|p| !p.1.is_finite()) {
        return Ok(Growth::Diverging { slope: f64::INFINITY });
    }
    if trail.iter().all(|p| p.1.abs() < tol.atol) {
        return Ok(Growth::Zero);
    }
    let pos: Vec<(f64, f64)> = trail.iter().copied().filter(|p| p.1 >= tol.atol).collect();
    let slope = if pos.len() >= 2 { loglog_slope(&pos) } else { 0.0 };
    let increasing = trail.windows(2).all(|w| w[1].1 > w[0].1);
    if slope > tol.slope_threshold && increasing {
        Ok(Growth::Diverging { slope })
    } else {
        Ok(Growth::Bounded { slope })
    }
}

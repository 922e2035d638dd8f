use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ball (a disk when N = 2) with the closed-form boundary distance d = (R² − |x−c|²)/(2R).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!("disk radius must be positive, got {radius}")));
        }
        Ok(Disk { center, radius })
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().zip(&self.center).map(|(a, c)| (a - c) * (a - c)).sum();
        (self.radius * self.radius - r2) / (2.0 * self.radius)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DomainGeometry {
    HalfSpace,
    Disk(Disk),
}

impl DomainGeometry {
    /// Boundary distance function d(x) and its gradient; errors outside the closed domain.
    pub fn distance(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        match self {
            DomainGeometry::HalfSpace => {
                let xn = *x.last().ok_or_else(|| Error::Domain("empty point".into()))?;
                if xn < 0.0 {
                    return Err(Error::Domain(format!("x_N = {xn} lies outside the half-space")));
                }
                let mut g = vec![0.0; x.len()];
                *g.last_mut().unwrap() = 1.0;
                Ok((xn, g))
            }
            DomainGeometry::Disk(d) => {
                if x.len() != d.center.len() {
                    return Err(Error::Domain("point dimension does not match disk".into()));
                }
                let v = d.distance(x);
                if v < -1e-14 * d.radius {
                    return Err(Error::Domain("point lies outside the disk".into()));
                }
                let g = x.iter().zip(&d.center).map(|(a, c)| -(a - c) / d.radius).collect();
                Ok((v.max(0.0), g))
            }
        }
    }
}

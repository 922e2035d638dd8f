use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used to decide whether a real exponent is an integer.
pub const INTEGER_TOL: f64 = 1e-12;

pub fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < INTEGER_TOL
}

/// Integer part and fractional part `{x}` with `{x} ∈ [0, 1)`, snapping near-integers.
pub fn split_int_frac(x: f64) -> (i64, f64) {
    if is_integer(x) {
        (x.round() as i64, 0.0)
    } else {
        let fl = x.floor();
        (fl as i64, x - fl)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpaceParams {
    pub m: u32,
    pub n: f64,
    pub gamma: f64,
}

#[derive(Deserialize)]
struct RawParams {
    m: u32,
    n: f64,
    gamma: f64,
}

impl<'de> Deserialize<'de> for SpaceParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawParams::deserialize(d)?;
        SpaceParams::new(raw.m, raw.n, raw.gamma).map_err(serde::de::Error::custom)
    }
}

impl SpaceParams {
    /// Validated constructor. `n = 0` is accepted as the unweighted limit.
    pub fn new(m: u32, n: f64, gamma: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParams("m must be a positive integer".into()));
        }
        if !(n.is_finite() && n >= 0.0 && n < m as f64) {
            return Err(Error::InvalidParams(format!("need 0 <= n < m, got n = {n}, m = {m}")));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidParams(format!("need gamma in (0,1), got {gamma}")));
        }
        let p = SpaceParams { m, n, gamma };
        if !p.integer_n() {
            let (_, fr) = split_int_frac(n);
            let lhs = (1.0 - p.omega()) * gamma;
            if lhs >= fr.min(1.0 - fr) {
                return Err(Error::InvalidParams(format!(
                    "(1-omega)*gamma = {lhs} must be below min({{n}}, 1-{{n}}) = {}",
                    fr.min(1.0 - fr)
                )));
            }
        }
        Ok(p)
    }

    pub fn defaults() -> Vec<SpaceParams> {
        vec![
            SpaceParams { m: 2, n: 0.5, gamma: 0.5 },
            SpaceParams { m: 2, n: 1.0, gamma: 0.25 },
            SpaceParams { m: 4, n: 1.0, gamma: 0.25 },
        ]
    }

    pub fn omega(&self) -> f64 {
        self.n / self.m as f64
    }

    /// Weight power ωγ.
    pub fn wg(&self) -> f64 {
        self.omega() * self.gamma
    }

    pub fn integer_n(&self) -> bool {
        is_integer(self.n)
    }

    pub fn mf(&self) -> f64 {
        self.m as f64
    }

    /// m − n.
    pub fn m_minus_n(&self) -> f64 {
        self.mf() - self.n
    }

    /// Largest integer j with j ≤ n.
    pub fn floor_n(&self) -> u32 {
        split_int_frac(self.n).0 as u32
    }

    /// Largest integer j with j ≤ m − n.
    pub fn floor_m_minus_n(&self) -> u32 {
        split_int_frac(self.m_minus_n()).0 as u32
    }

    pub fn label(&self) -> String {
        format!("m={},n={},gamma={}", self.m, self.n, self.gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        for p in SpaceParams::defaults() {
            SpaceParams::new(p.m, p.n, p.gamma).unwrap();
        }
    }

    #[test]
    fn rejects_technical_condition() {
        // m=2, n=0.9: {n}=0.9, 1-{n}=0.1, (1-0.45)*0.5 = 0.275 > 0.1
        assert!(SpaceParams::new(2, 0.9, 0.5).is_err());
        assert!(SpaceParams::new(2, 2.0, 0.5).is_err());
        assert!(SpaceParams::new(2, 0.5, 1.0).is_err());
    }

    #[test]
    fn serde_validates() {
        let ok: SpaceParams = serde_json::from_str(r#"{"m":2,"n":0.5,"gamma":0.5}"#).unwrap();
        assert_eq!(ok.omega(), 0.25);
        assert!(serde_json::from_str::<SpaceParams>(r#"{"m":2,"n":0.9,"gamma":0.5}"#).is_err());
    }
}

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::cutoff::CutoffSpec;
use crate::field::multi_index::MultiIndex;
use crate::field::poly::Poly;
use crate::geometry::Disk;

/// Symbolic scalar field on the closed half-space × time, closed under differentiation.
///
/// JSON form is a tagged term tree, e.g.
/// `{"kind":"product","factors":[{"kind":"coordinate","axis":0,"power":2},{"kind":"boundary_power","power":1.5}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expr {
    Constant {
        value: f64,
    },
    /// x_axis^power; axis N−1 is treated as a boundary power.
    Coordinate {
        axis: usize,
        power: u32,
    },
    /// x_N^power, real power.
    BoundaryPower {
        power: f64,
    },
    /// L_level(x_N), with L_0 = ln.
    IteratedLog {
        level: u32,
    },
    TimePower {
        power: u32,
    },
    /// S^{(derivative)}(r) · r^{−inverse_radius_power} for the radial cutoff profile S.
    Cutoff {
        cutoff: CutoffSpec,
        #[serde(default)]
        derivative: u32,
        #[serde(default)]
        inverse_radius_power: u32,
    },
    /// d(x)^power for the closed-form disk distance.
    DiskDistance {
        disk: Disk,
        power: f64,
    },
    Sum {
        terms: Vec<Expr>,
    },
    Product {
        factors: Vec<Expr>,
    },
    Scaled {
        factor: f64,
        expr: Box<Expr>,
    },
}

impl Expr {
    pub fn constant(value: f64) -> Expr {
        Expr::Constant { value }
    }

    pub fn zero() -> Expr {
        Expr::constant(0.0)
    }

    pub fn coord(axis: usize, power: u32) -> Expr {
        Expr::Coordinate { axis, power }
    }

    pub fn xn(power: f64) -> Expr {
        Expr::BoundaryPower { power }
    }

    pub fn log(level: u32) -> Expr {
        Expr::IteratedLog { level }
    }

    pub fn t(power: u32) -> Expr {
        Expr::TimePower { power }
    }

    pub fn disk_distance(disk: Disk, power: f64) -> Expr {
        Expr::DiskDistance { disk, power }
    }

    pub fn cutoff_raw(spec: CutoffSpec) -> Expr {
        Expr::Cutoff { cutoff: spec, derivative: 0, inverse_radius_power: 0 }
    }

    pub fn scaled(self, factor: f64) -> Expr {
        Expr::Scaled { factor, expr: Box::new(self) }
    }

    pub fn pow(self, k: u32) -> Expr {
        Expr::Product { factors: vec![self; k as usize] }
    }

    /// Canonical normal form in `dim` spatial variables.
    pub fn to_poly(&self, dim: usize) -> Result<Poly> {
        Poly::from_expr(self, dim)
    }

    /// Compact human-readable rendering.
    pub fn render(&self) -> String {
        match self {
            Expr::Constant { value } => format!("{value}"),
            Expr::Coordinate { axis, power } => format!("x{}^{}", axis + 1, power),
            Expr::BoundaryPower { power } => format!("xN^{power}"),
            Expr::IteratedLog { level } => format!("L{level}(xN)"),
            Expr::TimePower { power } => format!("t^{power}"),
            Expr::Cutoff { derivative, inverse_radius_power, .. } => {
                if *derivative == 0 && *inverse_radius_power == 0 {
                    "eta".to_string()
                } else {
                    format!("eta[{derivative},{inverse_radius_power}]")
                }
            }
            Expr::DiskDistance { power, .. } => format!("d^{power}"),
            Expr::Sum { terms } => {
                let p: Vec<String> = terms.iter().map(|e| e.render()).collect();
                format!("({})", p.join(" + "))
            }
            Expr::Product { factors } => {
                let p: Vec<String> = factors.iter().map(|e| e.render()).collect();
                p.join("*")
            }
            Expr::Scaled { factor, expr } => format!("{factor}*{}", expr.render()),
        }
    }
}

/// Validated radial cutoff; `order` must be at least m+1.
pub fn cutoff(center: Vec<f64>, r_inner: f64, r_outer: f64, order: u32, m: u32) -> Result<Expr> {
    if order < m + 1 {
        return Err(Error::InvalidExpression(format!(
            "cutoff order {order} below m+1 = {}",
            m + 1
        )));
    }
    let spec = CutoffSpec { center, axes: None, time_center: None, r_inner, r_outer, order };
    spec.validate(spec.center.len())?;
    Ok(Expr::cutoff_raw(spec))
}

/// Exact derivative D_x^α D_t^q e.
pub fn differentiate(e: &Expr, alpha: &MultiIndex, time_order: u32) -> Result<Expr> {
    let p = e.to_poly(alpha.dim())?;
    Ok(p.derivative(alpha, time_order).to_expr())
}

/// Point evaluation; non-finite return values mark boundary blow-up.
pub fn evaluate(e: &Expr, x: &[f64], t: f64) -> Result<f64> {
    Ok(e.to_poly(x.len())?.eval(x, t))
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match self {
            Expr::Sum { mut terms } => {
                terms.push(rhs);
                Expr::Sum { terms }
            }
            other => Expr::Sum { terms: vec![other, rhs] },
        }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + rhs.scaled(-1.0)
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match self {
            Expr::Product { mut factors } => {
                factors.push(rhs);
                Expr::Product { factors }
            }
            other => Expr::Product { factors: vec![other, rhs] },
        }
    }
}

impl Mul<Expr> for f64 {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        rhs.scaled(self)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scaled(-1.0)
    }
}

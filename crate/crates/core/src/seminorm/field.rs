use crate::error::Result;
use crate::field::{Expr, MultiIndex, Poly};
use crate::geometry::DomainGeometry;

/// Point-evaluation contract shared by symbolic fields and numerical evaluators.
pub trait PointEval: Send + Sync {
    fn eval(&self, x: &[f64], t: f64) -> f64;
}

impl PointEval for Poly {
    fn eval(&self, x: &[f64], t: f64) -> f64 {
        Poly::eval(self, x, t)
    }
}

impl<F: Fn(&[f64], f64) -> f64 + Send + Sync> PointEval for F {
    fn eval(&self, x: &[f64], t: f64) -> f64 {
        self(x, t)
    }
}

/// w^p · D^α D_t^q f, with w the boundary distance of the geometry.
#[derive(Clone, Debug, PartialEq)]
pub struct TermRequest {
    pub alpha: MultiIndex,
    pub time_order: u32,
    pub pre_weight: f64,
}

impl TermRequest {
    pub fn new(alpha: MultiIndex, time_order: u32, pre_weight: f64) -> Self {
        TermRequest { alpha, time_order, pre_weight }
    }

    pub fn value(dim: usize) -> Self {
        TermRequest { alpha: MultiIndex::zeros(dim), time_order: 0, pre_weight: 0.0 }
    }

    pub fn label(&self) -> String {
        let mut s = String::new();
        if self.pre_weight != 0.0 {
            s.push_str(&format!("w^{} ", fmt_real(self.pre_weight)));
        }
        if !self.alpha.is_zero() {
            s.push_str(&format!("D{} ", self.alpha.label()));
        }
        if self.time_order > 0 {
            s.push_str(&format!("Dt^{} ", self.time_order));
        }
        s.push('u');
        s
    }
}

pub fn fmt_real(x: f64) -> String {
    let r = (x * 1e9).round() / 1e9;
    format!("{r}")
}

/// A scalar field that can produce evaluators for weighted derivatives.
pub trait Field: Send + Sync {
    fn dim(&self) -> usize;
    fn term(&self, req: &TermRequest, geometry: &DomainGeometry) -> Result<Box<dyn PointEval + '_>>;
    fn is_time_independent(&self) -> bool {
        false
    }
}

/// Exact field backed by the canonical normal form.
#[derive(Clone, Debug)]
pub struct SymbolicField {
    poly: Poly,
}

impl SymbolicField {
    pub fn new(e: &Expr, dim: usize) -> Result<Self> {
        Ok(SymbolicField { poly: e.to_poly(dim)? })
    }

    pub fn from_poly(poly: Poly) -> Self {
        SymbolicField { poly }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// The normal form of the requested weighted derivative.
    pub fn term_poly(&self, req: &TermRequest, geometry: &DomainGeometry) -> Poly {
        self.poly.derivative(&req.alpha, req.time_order).weighted(geometry, req.pre_weight)
    }
}

impl Field for SymbolicField {
    fn dim(&self) -> usize {
        self.poly.dim()
    }

    fn term(&self, req: &TermRequest, geometry: &DomainGeometry) -> Result<Box<dyn PointEval + '_>> {
        Ok(Box::new(self.term_poly(req, geometry)))
    }

    fn is_time_independent(&self) -> bool {
        self.poly.is_time_independent()
    }
}

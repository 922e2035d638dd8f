//! Mollification in the tangential and time variables.

use crate::error::{Error, Result};
use crate::field::cutoff::RadialProfile;
use crate::geometry::DomainGeometry;
use crate::operators::quad::gauss_legendre;
use crate::seminorm::field::{Field, PointEval, TermRequest};

/// Even one-dimensional kernel φ(z) = c·S(|z|) on [−1, 1], S the cutoff profile
/// with S ≡ 1 on |z| ≤ 1/2. Tabulated as a quadrature rule.
#[derive(Clone, Debug)]
pub struct Kernel1d {
    pub order: u32,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Normalizing constant c.
    pub scale: f64,
}

const BREAKS: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

impl Kernel1d {
    pub fn new(order: u32) -> Kernel1d {
        let profile = RadialProfile::new(0.5, 1.0, order);
        let (xg, wg) = gauss_legendre(order as usize + 3);
        let mut nodes = vec![];
        let mut raw = vec![];
        for p in BREAKS.windows(2) {
            let (c, h) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
            for (xi, wi) in xg.iter().zip(&wg) {
                let z = c + h * xi;
                nodes.push(z);
                raw.push(wi * h * profile.eval(0, z.abs()));
            }
        }
        let mass: f64 = raw.iter().sum();
        let weights = raw.iter().map(|w| w / mass).collect();
        Kernel1d { order, nodes, weights, scale: 1.0 / mass }
    }

    /// φ(z).
    pub fn density(&self, z: f64) -> f64 {
        self.scale * RadialProfile::new(0.5, 1.0, self.order).eval(0, z.abs())
    }

    /// ∫ z^k φ(z) dz by the tabulated rule.
    pub fn moment(&self, k: u32) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(z, w)| w * z.powi(k as i32)).sum()
    }
}

/// u_ε(x, t) = ∫ u(x' − εz', x_N, t − εz_t) φ(z') φ(z_t) dz' dz_t with a tensor-product kernel.
pub struct Mollified<'a> {
    pub inner: &'a dyn Field,
    pub eps: f64,
    pub kernel: Kernel1d,
    /// Whether t is smoothed as well.
    pub smooth_time: bool,
}

/// Mollifies `u` at scale `eps`. The kernel is even in every variable, so affine functions are fixed.
pub fn mollify(u: &dyn Field, eps: f64, order: u32) -> Result<Mollified<'_>> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidSpec(format!("mollification scale must be positive, got {eps}")));
    }
    Ok(Mollified { inner: u, eps, kernel: Kernel1d::new(order), smooth_time: !u.is_time_independent() })
}

struct MollifiedTerm<'a> {
    inner: Box<dyn PointEval + 'a>,
    eps: f64,
    kernel: &'a Kernel1d,
    tangent_dim: usize,
    smooth_time: bool,
}

impl MollifiedTerm<'_> {
    fn sum(&self, x: &mut Vec<f64>, t: f64, axis: usize, weight: f64, acc: &mut f64) {
        if axis == self.tangent_dim {
            if self.smooth_time {
                for (z, w) in self.kernel.nodes.iter().zip(&self.kernel.weights) {
                    *acc += weight * w * self.inner.eval(x, t - self.eps * z);
                }
            } else {
                *acc += weight * self.inner.eval(x, t);
            }
            return;
        }
        let x0 = x[axis];
        for (z, w) in self.kernel.nodes.iter().zip(&self.kernel.weights) {
            x[axis] = x0 - self.eps * z;
            self.sum(x, t, axis + 1, weight * w, acc);
        }
        x[axis] = x0;
    }
}

impl PointEval for MollifiedTerm<'_> {
    fn eval(&self, x: &[f64], t: f64) -> f64 {
        let mut y = x.to_vec();
        let mut acc = 0.0;
        self.sum(&mut y, t, 0, 1.0, &mut acc);
        acc
    }
}

impl Mollified<'_> {
    /// u_ε at one point; errors if u is non-finite anywhere on the convolution slab.
    pub fn value(&self, x: &[f64], t: f64) -> Result<f64> {
        let term = self.term(&TermRequest::value(self.dim()), &DomainGeometry::HalfSpace)?;
        let v = term.eval(x, t);
        if !v.is_finite() {
            return Err(Error::Quadrature(format!("non-finite integrand near x = {x:?}, t = {t}")));
        }
        Ok(v)
    }
}

impl Field for Mollified<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Derivatives and x_N weights commute with the convolution, so the inner term is smoothed.
    fn term(&self, req: &TermRequest, geometry: &DomainGeometry) -> Result<Box<dyn PointEval + '_>> {
        if !matches!(geometry, DomainGeometry::HalfSpace) {
            return Err(Error::InvalidSpec("mollification is defined on the half-space".into()));
        }
        Ok(Box::new(MollifiedTerm {
            inner: self.inner.term(req, geometry)?,
            eps: self.eps,
            kernel: &self.kernel,
            tangent_dim: self.dim() - 1,
            smooth_time: self.smooth_time,
        }))
    }

    fn is_time_independent(&self) -> bool {
        self.inner.is_time_independent()
    }
}

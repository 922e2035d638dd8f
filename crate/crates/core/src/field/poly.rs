//! Canonical normal form: a sum of monomials
//! `c · Π x_i^{p_i} · x_N^a · Π L_k(x_N) · t^q · Π S^{(k)}(r)r^{−j} · Π d^b`.
//! Boundary exponents of a monomial are summed before evaluation, so products such
//! as `x_N^n · x_N^{−n}` never produce `0·∞`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::cutoff::{CutoffSpec, RadialProfile};
use crate::field::expr::Expr;
use crate::field::multi_index::{factorial, MultiIndex};
use crate::geometry::{Disk, DomainGeometry};

const SNAP_TOL: f64 = 1e-12;

fn snap(a: f64) -> f64 {
    let r = a.round();
    if (a - r).abs() < SNAP_TOL {
        r
    } else {
        a
    }
}

/// c_k of the iterated logarithm: c_0 = 0, c_k = c_{k−1}/k + 1/(k·k!).
pub fn log_constant(k: u32) -> f64 {
    let mut c = 0.0;
    for i in 1..=k {
        c = c / i as f64 + 1.0 / (i as f64 * factorial(i));
    }
    c
}

/// L_k(x) = x^k/k!·ln x − c_k x^k for x > 0.
pub fn log_k(k: u32, x: f64) -> f64 {
    if k == 0 {
        return x.ln();
    }
    let xk = x.powi(k as i32);
    xk * (x.ln() / factorial(k) - log_constant(k))
}

fn pow_real(x: f64, a: f64) -> f64 {
    if a == 0.0 {
        1.0
    } else if a == a.round() && a.abs() < 64.0 {
        x.powi(a as i32)
    } else {
        x.powf(a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CutoffFactor {
    pub spec: usize,
    pub deriv: u32,
    pub inv_r: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    /// Tangential exponents, length N−1.
    pub coords: Vec<u32>,
    pub xn: f64,
    pub logs: Vec<u32>,
    pub t: u32,
    pub cutoffs: Vec<CutoffFactor>,
    pub disks: Vec<(usize, f64)>,
}

impl Monomial {
    fn unit(dim: usize, coeff: f64) -> Self {
        Monomial {
            coeff,
            coords: vec![0; dim.saturating_sub(1)],
            xn: 0.0,
            logs: vec![],
            t: 0,
            cutoffs: vec![],
            disks: vec![],
        }
    }

    fn canon(&mut self) {
        self.xn = snap(self.xn);
        self.logs.sort_unstable();
        self.cutoffs.sort_unstable();
        self.disks.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(self.disks.len());
        for &(i, p) in &self.disks {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += p,
                _ => merged.push((i, p)),
            }
        }
        for d in merged.iter_mut() {
            d.1 = snap(d.1);
        }
        merged.retain(|d| d.1 != 0.0);
        self.disks = merged;
    }

    fn key_cmp(&self, o: &Monomial) -> Ordering {
        self.coords
            .cmp(&o.coords)
            .then(self.xn.total_cmp(&o.xn))
            .then(self.logs.cmp(&o.logs))
            .then(self.t.cmp(&o.t))
            .then(self.cutoffs.cmp(&o.cutoffs))
            .then_with(|| {
                for (a, b) in self.disks.iter().zip(&o.disks) {
                    let c = a.0.cmp(&b.0).then(a.1.total_cmp(&b.1));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                self.disks.len().cmp(&o.disks.len())
            })
    }

    fn times(&self, o: &Monomial) -> Monomial {
        let mut m = Monomial {
            coeff: self.coeff * o.coeff,
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
            xn: self.xn + o.xn,
            logs: self.logs.iter().chain(&o.logs).copied().collect(),
            t: self.t + o.t,
            cutoffs: self.cutoffs.iter().chain(&o.cutoffs).copied().collect(),
            disks: self.disks.iter().chain(&o.disks).copied().collect(),
        };
        m.canon();
        m
    }

    /// Multiplies by the coordinate x_axis (axis may be the normal one).
    fn times_coord(&mut self, axis: usize) {
        if axis < self.coords.len() {
            self.coords[axis] += 1;
        } else {
            self.xn = snap(self.xn + 1.0);
        }
    }
}

/// Canonical sum-of-monomials representation in a fixed spatial dimension.
#[derive(Clone, Debug)]
pub struct Poly {
    dim: usize,
    cutoffs: Vec<CutoffSpec>,
    profiles: Vec<RadialProfile>,
    disks: Vec<Disk>,
    terms: Vec<Monomial>,
}

impl Poly {
    pub fn zero(dim: usize) -> Poly {
        Poly { dim, cutoffs: vec![], profiles: vec![], disks: vec![], terms: vec![] }
    }

    pub fn constant(dim: usize, c: f64) -> Poly {
        let mut p = Poly::zero(dim);
        if c != 0.0 {
            p.terms.push(Monomial::unit(dim, c));
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_expr(e: &Expr, dim: usize) -> Result<Poly> {
        if dim == 0 {
            return Err(Error::InvalidExpression("dimension must be at least 1".into()));
        }
        Ok(match e {
            Expr::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::InvalidExpression("non-finite constant".into()));
                }
                Poly::constant(dim, *value)
            }
            Expr::Coordinate { axis, power } => {
                if *axis >= dim {
                    return Err(Error::InvalidExpression(format!(
                        "coordinate axis {axis} out of range for dimension {dim}"
                    )));
                }
                let mut m = Monomial::unit(dim, 1.0);
                if *axis + 1 == dim {
                    m.xn = *power as f64;
                } else {
                    m.coords[*axis] = *power;
                }
                Poly::single(dim, m)
            }
            Expr::BoundaryPower { power } => {
                if !power.is_finite() {
                    return Err(Error::InvalidExpression("non-finite boundary power".into()));
                }
                let mut m = Monomial::unit(dim, 1.0);
                m.xn = snap(*power);
                Poly::single(dim, m)
            }
            Expr::IteratedLog { level } => {
                let mut m = Monomial::unit(dim, 1.0);
                m.logs.push(*level);
                Poly::single(dim, m)
            }
            Expr::TimePower { power } => {
                let mut m = Monomial::unit(dim, 1.0);
                m.t = *power;
                Poly::single(dim, m)
            }
            Expr::Cutoff { cutoff, derivative, inverse_radius_power } => {
                cutoff.validate(dim)?;
                let mut p = Poly::zero(dim);
                let idx = p.intern_cutoff(cutoff);
                let mut m = Monomial::unit(dim, 1.0);
                m.cutoffs.push(CutoffFactor { spec: idx, deriv: *derivative, inv_r: *inverse_radius_power });
                p.terms.push(m);
                p
            }
            Expr::DiskDistance { disk, power } => {
                if disk.center.len() != dim || !(disk.radius > 0.0) {
                    return Err(Error::InvalidExpression("disk does not match dimension".into()));
                }
                let mut p = Poly::zero(dim);
                let idx = p.intern_disk(disk);
                let mut m = Monomial::unit(dim, 1.0);
                m.disks.push((idx, snap(*power)));
                m.canon();
                p.terms.push(m);
                p
            }
            Expr::Sum { terms } => {
                let mut acc = Poly::zero(dim);
                for t in terms {
                    acc = acc.add(&Poly::from_expr(t, dim)?);
                }
                acc
            }
            Expr::Product { factors } => {
                let mut acc = Poly::constant(dim, 1.0);
                for f in factors {
                    acc = acc.mul(&Poly::from_expr(f, dim)?);
                }
                acc
            }
            Expr::Scaled { factor, expr } => Poly::from_expr(expr, dim)?.scale(*factor),
        })
    }

    fn single(dim: usize, m: Monomial) -> Poly {
        let mut p = Poly::zero(dim);
        p.terms.push(m);
        p
    }

    fn intern_cutoff(&mut self, spec: &CutoffSpec) -> usize {
        if let Some(i) = self.cutoffs.iter().position(|s| s == spec) {
            return i;
        }
        self.cutoffs.push(spec.clone());
        self.profiles.push(RadialProfile::from_spec(spec));
        self.cutoffs.len() - 1
    }

    fn intern_disk(&mut self, disk: &Disk) -> usize {
        if let Some(i) = self.disks.iter().position(|d| d == disk) {
            return i;
        }
        self.disks.push(disk.clone());
        self.disks.len() - 1
    }

    /// Copies `other`'s tables into self and returns its terms with remapped indices.
    fn absorb(&mut self, other: &Poly) -> Vec<Monomial> {
        let cmap: Vec<usize> = other.cutoffs.iter().map(|s| self.intern_cutoff(s)).collect();
        let dmap: Vec<usize> = other.disks.iter().map(|d| self.intern_disk(d)).collect();
        other
            .terms
            .iter()
            .map(|m| {
                let mut m = m.clone();
                for c in m.cutoffs.iter_mut() {
                    c.spec = cmap[c.spec];
                }
                for d in m.disks.iter_mut() {
                    d.0 = dmap[d.0];
                }
                m.canon();
                m
            })
            .collect()
    }

    fn normalize(mut self) -> Poly {
        for m in self.terms.iter_mut() {
            m.canon();
        }
        self.terms.sort_by(|a, b| a.key_cmp(b));
        let mut out: Vec<Monomial> = Vec::with_capacity(self.terms.len());
        for m in self.terms.drain(..) {
            match out.last_mut() {
                Some(last) if last.key_cmp(&m) == Ordering::Equal => last.coeff += m.coeff,
                _ => out.push(m),
            }
        }
        out.retain(|m| m.coeff != 0.0);
        self.terms = out;
        self
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        let extra = p.absorb(other);
        p.terms.extend(extra);
        p.normalize()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut p = Poly { terms: vec![], ..self.clone() };
        let rhs = p.absorb(other);
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.len());
        for a in &self.terms {
            for b in &rhs {
                terms.push(a.times(b));
            }
        }
        p.terms = terms;
        p.normalize()
    }

    pub fn scale(&self, c: f64) -> Poly {
        let mut p = self.clone();
        for m in p.terms.iter_mut() {
            m.coeff *= c;
        }
        p.normalize()
    }

    /// Multiplies by w^p with w = x_N (half-space) or the disk distance d(x).
    pub fn weighted(&self, geometry: &DomainGeometry, p: f64) -> Poly {
        if p == 0.0 {
            return self.clone();
        }
        let mut out = self.clone();
        match geometry {
            DomainGeometry::HalfSpace => {
                for m in out.terms.iter_mut() {
                    m.xn += p;
                }
            }
            DomainGeometry::Disk(d) => {
                let idx = out.intern_disk(d);
                for m in out.terms.iter_mut() {
                    m.disks.push((idx, p));
                }
            }
        }
        out.normalize()
    }

    pub fn is_time_independent(&self) -> bool {
        self.terms.iter().all(|m| m.t == 0)
            && self.terms.iter().all(|m| m.cutoffs.iter().all(|c| !self.cutoffs[c.spec].uses_time()))
    }

    /// Smallest power of t over all monomials (time cutoffs count as t^0).
    pub fn min_time_power(&self) -> Option<u32> {
        self.terms.iter().map(|m| m.t).min()
    }

    /// Derivative along spatial axis `axis`.
    pub fn diff_axis(&self, axis: usize) -> Poly {
        let n = self.dim;
        let normal = axis + 1 == n;
        let mut out: Vec<Monomial> = Vec::new();
        for m in &self.terms {
            if normal {
                if m.xn != 0.0 {
                    let mut d = m.clone();
                    d.coeff *= m.xn;
                    d.xn = snap(m.xn - 1.0);
                    out.push(d);
                }
                for (li, &l) in m.logs.iter().enumerate() {
                    let mut d = m.clone();
                    if l == 0 {
                        d.logs.remove(li);
                        d.xn = snap(d.xn - 1.0);
                    } else {
                        d.logs[li] = l - 1;
                    }
                    out.push(d);
                }
            } else if m.coords[axis] > 0 {
                let mut d = m.clone();
                d.coeff *= m.coords[axis] as f64;
                d.coords[axis] -= 1;
                out.push(d);
            }
            for (fi, f) in m.cutoffs.iter().enumerate() {
                let spec = &self.cutoffs[f.spec];
                if !spec.uses_axis(axis) {
                    continue;
                }
                push_cutoff_derivative(&mut out, m, fi, *f, spec.center[axis], |d| d.times_coord(axis));
            }
            for (di, &(idx, a)) in m.disks.iter().enumerate() {
                let disk = &self.disks[idx];
                let c = disk.center[axis];
                let r = disk.radius;
                let mut base = m.clone();
                base.disks[di].1 = snap(a - 1.0);
                let mut d1 = base.clone();
                d1.coeff *= -a / r;
                d1.times_coord(axis);
                out.push(d1);
                if c != 0.0 {
                    let mut d2 = base;
                    d2.coeff *= a * c / r;
                    out.push(d2);
                }
            }
        }
        Poly { terms: out, ..self.clone() }.normalize()
    }

    pub fn diff_t(&self) -> Poly {
        let mut out: Vec<Monomial> = Vec::new();
        for m in &self.terms {
            if m.t > 0 {
                let mut d = m.clone();
                d.coeff *= m.t as f64;
                d.t -= 1;
                out.push(d);
            }
            for (fi, f) in m.cutoffs.iter().enumerate() {
                let spec = &self.cutoffs[f.spec];
                if let Some(t0) = spec.time_center {
                    push_cutoff_derivative(&mut out, m, fi, *f, t0, |d| d.t += 1);
                }
            }
        }
        Poly { terms: out, ..self.clone() }.normalize()
    }

    pub fn derivative(&self, alpha: &MultiIndex, time_order: u32) -> Poly {
        let mut p = self.clone();
        for (axis, &k) in alpha.0.iter().enumerate() {
            for _ in 0..k {
                p = p.diff_axis(axis);
            }
        }
        for _ in 0..time_order {
            p = p.diff_t();
        }
        p
    }

    pub fn to_expr(&self) -> Expr {
        let terms: Vec<Expr> = self.terms.iter().map(|m| self.monomial_expr(m)).collect();
        match terms.len() {
            0 => Expr::zero(),
            1 => terms.into_iter().next().unwrap(),
            _ => Expr::Sum { terms },
        }
    }

    fn monomial_expr(&self, m: &Monomial) -> Expr {
        let mut f = vec![Expr::constant(m.coeff)];
        for (i, &p) in m.coords.iter().enumerate() {
            if p > 0 {
                f.push(Expr::coord(i, p));
            }
        }
        if m.xn != 0.0 {
            f.push(Expr::xn(m.xn));
        }
        for &l in &m.logs {
            f.push(Expr::log(l));
        }
        if m.t > 0 {
            f.push(Expr::t(m.t));
        }
        for c in &m.cutoffs {
            f.push(Expr::Cutoff {
                cutoff: self.cutoffs[c.spec].clone(),
                derivative: c.deriv,
                inverse_radius_power: c.inv_r,
            });
        }
        for &(i, p) in &m.disks {
            f.push(Expr::disk_distance(self.disks[i].clone(), p));
        }
        if f.len() == 1 {
            f.pop().unwrap()
        } else {
            Expr::Product { factors: f }
        }
    }

    /// Evaluates at (x, t). Returns ±∞ or NaN when a monomial blows up at the boundary.
    pub fn eval(&self, x: &[f64], t: f64) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let mut rbuf = [0.0f64; 8];
        let mut dbuf = [0.0f64; 4];
        let mut rvec;
        let mut dvec;
        let radii: &mut [f64] = if self.cutoffs.len() <= 8 {
            &mut rbuf[..self.cutoffs.len()]
        } else {
            rvec = vec![0.0; self.cutoffs.len()];
            &mut rvec
        };
        for (r, s) in radii.iter_mut().zip(&self.cutoffs) {
            *r = s.radius(x, t);
        }
        let dists: &mut [f64] = if self.disks.len() <= 4 {
            &mut dbuf[..self.disks.len()]
        } else {
            dvec = vec![0.0; self.disks.len()];
            &mut dvec
        };
        for (d, s) in dists.iter_mut().zip(&self.disks) {
            let v = s.distance(x);
            *d = if v.abs() < 1e-14 * s.radius { 0.0 } else { v };
        }
        let mut sum = 0.0;
        for m in &self.terms {
            sum += self.eval_monomial(m, x, t, radii, dists);
        }
        sum
    }

    fn eval_monomial(&self, m: &Monomial, x: &[f64], t: f64, radii: &[f64], dists: &[f64]) -> f64 {
        let mut val = m.coeff;
        for (i, &p) in m.coords.iter().enumerate() {
            if p > 0 {
                val *= x[i].powi(p as i32);
            }
        }
        if m.t > 0 {
            val *= t.powi(m.t as i32);
        }
        for f in &m.cutoffs {
            let r = radii[f.spec];
            let s = self.profiles[f.spec].eval(f.deriv as usize, r);
            if s == 0.0 {
                return 0.0;
            }
            val *= s;
            if f.inv_r > 0 {
                val *= r.powi(-(f.inv_r as i32));
            }
        }
        let mut blow = false;
        for &(idx, a) in &m.disks {
            let d = dists[idx];
            if d > 0.0 {
                val *= pow_real(d, a);
            } else if d < 0.0 {
                return f64::NAN;
            } else if a > 0.0 {
                return 0.0;
            } else {
                blow = true;
            }
        }
        let xn = x[self.dim - 1];
        if xn > 0.0 {
            val *= pow_real(xn, m.xn);
            for &l in &m.logs {
                val *= log_k(l, xn);
            }
        } else if xn == 0.0 {
            let order = snap(m.xn + m.logs.iter().map(|&l| l as f64).sum::<f64>());
            if order > 0.0 {
                return 0.0;
            }
            if order < 0.0 || !m.logs.is_empty() {
                blow = true;
            }
        } else {
            if !m.logs.is_empty() || m.xn != m.xn.round() {
                return f64::NAN;
            }
            val *= pow_real(xn, m.xn);
        }
        if blow {
            if val == 0.0 {
                0.0
            } else {
                f64::INFINITY.copysign(val)
            }
        } else {
            val
        }
    }
}

fn push_cutoff_derivative<F: Fn(&mut Monomial)>(
    out: &mut Vec<Monomial>,
    m: &Monomial,
    fi: usize,
    f: CutoffFactor,
    center: f64,
    times_var: F,
) {
    // ∂ [S^{(k)}(r) r^{−j}] = (v − c)[S^{(k+1)} r^{−j−1} − j S^{(k)} r^{−j−2}]
    let j = f.inv_r as f64;
    let mut variants = vec![(CutoffFactor { deriv: f.deriv + 1, inv_r: f.inv_r + 1, ..f }, 1.0)];
    if f.inv_r > 0 {
        variants.push((CutoffFactor { inv_r: f.inv_r + 2, ..f }, -j));
    }
    for (nf, c) in variants {
        let mut base = m.clone();
        base.cutoffs[fi] = nf;
        base.coeff *= c;
        let mut a = base.clone();
        times_var(&mut a);
        out.push(a);
        if center != 0.0 {
            base.coeff *= -center;
            out.push(base);
        }
    }
}

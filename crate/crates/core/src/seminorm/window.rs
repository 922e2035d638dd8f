use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DomainGeometry;

fn yes() -> bool {
    true
}
fn default_point_cap() -> usize {
    1 << 22
}
fn default_pair_cap() -> usize {
    1 << 24
}

/// Truncated sampling region with geometric grading toward the boundary.
///
/// Half-space: x_N ∈ {0} ∪ {R_N ρ^j : −A ≤ j ≤ L}, tangential axes uniform on [c−R′, c+R′].
/// Disk: rings at boundary offsets δ ∈ {0} ∪ {R ρ^j} (δ = R is the center), `tangent_points`
/// angles per ring.
///
/// `expansion` E and `subdivision` S (a power of two) derive nested windows from a base one:
/// tangential and time axes get E times the extent at 1/S of the base spacing, and the grading
/// gets S sub-levels per factor ρ. Sample values are computed from base quantities only, so a
/// nested window reproduces its parent's samples bit for bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    #[serde(default = "half_space")]
    pub geometry: DomainGeometry,
    pub tangent_half_widths: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangent_center: Option<Vec<f64>>,
    pub boundary_extent: f64,
    #[serde(default)]
    pub t_min: f64,
    #[serde(default)]
    pub t_max: f64,
    pub grading_ratio: f64,
    pub levels: u32,
    pub tangent_points: usize,
    #[serde(default = "one")]
    pub time_points: usize,
    /// Grading levels above R_N (A).
    #[serde(default)]
    pub levels_above: u32,
    #[serde(default = "one_u32")]
    pub expansion: u32,
    #[serde(default = "one_u32")]
    pub subdivision: u32,
    #[serde(default = "yes")]
    pub include_boundary: bool,
    #[serde(default = "default_point_cap")]
    pub point_cap: usize,
    #[serde(default = "default_pair_cap")]
    pub pair_cap: usize,
}

fn half_space() -> DomainGeometry {
    DomainGeometry::HalfSpace
}
fn one() -> usize {
    1
}
fn one_u32() -> u32 {
    1
}

impl Window {
    /// Unit half-space window in dimension `dim` with the default grading ρ = 0.7, L = 24.
    pub fn unit(dim: usize) -> Window {
        Window {
            geometry: DomainGeometry::HalfSpace,
            tangent_half_widths: vec![1.0; dim - 1],
            tangent_center: None,
            boundary_extent: 1.0,
            t_min: 0.0,
            t_max: 0.0,
            grading_ratio: 0.7,
            levels: 24,
            tangent_points: 17,
            time_points: 1,
            levels_above: 0,
            expansion: 1,
            subdivision: 1,
            include_boundary: true,
            point_cap: default_point_cap(),
            pair_cap: default_pair_cap(),
        }
    }

    pub fn disk(disk: crate::geometry::Disk, angular_points: usize) -> Window {
        Window {
            tangent_half_widths: vec![],
            boundary_extent: disk.radius,
            geometry: DomainGeometry::Disk(disk),
            tangent_points: angular_points,
            ..Window::unit(1)
        }
    }

    pub fn with_time(mut self, t_min: f64, t_max: f64, points: usize) -> Window {
        self.t_min = t_min;
        self.t_max = t_max;
        self.time_points = points;
        self
    }

    pub fn with_grading(mut self, rho: f64, levels: u32) -> Window {
        self.grading_ratio = rho;
        self.levels = levels;
        self
    }

    pub fn with_tangent(mut self, half_width: f64, points: usize) -> Window {
        for w in self.tangent_half_widths.iter_mut() {
            *w = half_width;
        }
        self.tangent_points = points;
        self
    }

    pub fn interior(mut self) -> Window {
        self.include_boundary = false;
        self
    }

    pub fn dim(&self) -> usize {
        match &self.geometry {
            DomainGeometry::HalfSpace => self.tangent_half_widths.len() + 1,
            DomainGeometry::Disk(d) => d.center.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.grading_ratio > 0.0 && self.grading_ratio < 1.0) {
            return Err(Error::InvalidWindow(format!("grading ratio {} not in (0,1)", self.grading_ratio)));
        }
        if !(self.boundary_extent >= 0.0 && self.boundary_extent.is_finite()) {
            return Err(Error::InvalidWindow("boundary extent must be finite and nonnegative".into()));
        }
        if self.tangent_points == 0 || self.time_points == 0 {
            return Err(Error::InvalidWindow("point counts must be positive".into()));
        }
        if self.t_max < self.t_min {
            return Err(Error::InvalidWindow("t_max < t_min".into()));
        }
        if self.tangent_half_widths.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidWindow("negative tangential half-width".into()));
        }
        if let Some(c) = &self.tangent_center {
            if c.len() != self.tangent_half_widths.len() {
                return Err(Error::InvalidWindow("tangent center has wrong length".into()));
            }
        }
        if let DomainGeometry::Disk(d) = &self.geometry {
            if d.center.len() != 2 {
                return Err(Error::InvalidWindow("disk windows are two-dimensional".into()));
            }
        }
        if self.expansion == 0 || !self.subdivision.is_power_of_two() {
            return Err(Error::InvalidWindow("expansion must be positive and subdivision a power of two".into()));
        }
        if matches!(self.geometry, DomainGeometry::Disk(_)) && (self.levels_above > 0 || self.expansion > 1) {
            return Err(Error::InvalidWindow("disk windows cannot be expanded".into()));
        }
        if !self.include_boundary && self.boundary_extent == 0.0 {
            return Err(Error::InvalidWindow("window without boundary and without levels is empty".into()));
        }
        let pts = self.point_count();
        if pts > self.point_cap {
            return Err(Error::PointCap { points: pts, cap: self.point_cap });
        }
        Ok(())
    }

    /// Boundary-distance sample values in increasing order.
    pub fn normal_levels(&self) -> Vec<f64> {
        let mut v = Vec::new();
        if self.include_boundary {
            v.push(0.0);
        }
        if self.boundary_extent > 0.0 {
            let sub = self.subdivision as i64;
            let lo = -(self.levels_above as i64) * sub;
            let hi = self.levels as i64 * sub;
            for j in (lo..=hi).rev() {
                let (q, r) = (j.div_euclid(sub), j.rem_euclid(sub));
                let mut x = self.boundary_extent * self.grading_ratio.powi(q as i32);
                if r > 0 {
                    x *= self.grading_ratio.powf(r as f64 / sub as f64);
                }
                v.push(x);
            }
        }
        v
    }

    /// Samples per tangential axis.
    pub fn tangent_count(&self) -> usize {
        (self.tangent_points - 1) * (self.expansion * self.subdivision) as usize + 1
    }

    pub fn tangent_axis(&self, axis: usize) -> Vec<f64> {
        let c = self.tangent_center.as_ref().map(|c| c[axis]).unwrap_or(0.0);
        let r = self.tangent_half_widths[axis];
        if self.tangent_points == 1 {
            return vec![c];
        }
        let h = 2.0 * r / (self.tangent_points - 1) as f64;
        let n = self.tangent_count();
        let mid = (n - 1) as f64 / 2.0;
        let sub = self.subdivision as f64;
        (0..n).map(|i| c + ((i as f64 - mid) / sub) * h).collect()
    }

    pub fn times(&self) -> Vec<f64> {
        if self.time_points == 1 {
            return vec![0.5 * (self.t_min + self.t_max)];
        }
        let h = (self.t_max - self.t_min) / (self.time_points - 1) as f64;
        let n = (self.time_points - 1) * (self.expansion * self.subdivision) as usize + 1;
        let sub = self.subdivision as f64;
        (0..n).map(|i| self.t_min + (i as f64 / sub) * h).collect()
    }

    /// Largest sampled time.
    pub fn t_end(&self) -> f64 {
        *self.times().last().unwrap_or(&self.t_max)
    }

    pub fn point_count(&self) -> usize {
        let nl = self.normal_levels().len();
        let spatial = match &self.geometry {
            DomainGeometry::HalfSpace => self.tangent_count().pow(self.tangent_half_widths.len() as u32) * nl,
            DomainGeometry::Disk(_) => {
                let rings = nl.saturating_sub(1);
                1 + rings * self.tangent_count()
            }
        };
        let nt = if self.time_points == 1 { 1 } else { (self.time_points - 1) * (self.expansion * self.subdivision) as usize + 1 };
        spatial * nt
    }

    /// Smallest positive boundary distance sampled.
    pub fn finest_level(&self) -> f64 {
        self.boundary_extent * self.grading_ratio.powi(self.levels as i32)
    }

    /// Largest sampled boundary distance.
    pub fn top_level(&self) -> f64 {
        self.boundary_extent * self.grading_ratio.powi(-(self.levels_above as i32))
    }

    /// Homothety x ↦ s·x, t ↦ s^time_power·t (about the origin).
    pub fn scaled(&self, s: f64, time_power: f64) -> Window {
        let mut w = self.clone();
        for r in w.tangent_half_widths.iter_mut() {
            *r *= s;
        }
        if let Some(c) = w.tangent_center.as_mut() {
            for v in c.iter_mut() {
                *v *= s;
            }
        }
        w.boundary_extent *= s;
        let ts = s.powf(time_power);
        w.t_min *= ts;
        w.t_max *= ts;
        w
    }

    /// Nested enlargement by an integer factor: same spacing, extra grading levels on top.
    pub fn expanded(&self, factor: u32) -> Window {
        let mut w = self.clone();
        let f = factor.max(1);
        w.expansion *= f;
        let k = ((f as f64).ln() / (1.0 / w.grading_ratio).ln()).round() as u32;
        w.levels_above += k;
        w
    }

    /// Nested refinement: 2^r times finer tangential/time spacing and 2^r sub-levels per grading step.
    pub fn refined(&self, r: u32) -> Window {
        let mut w = self.clone();
        w.subdivision <<= r;
        w
    }

    /// `extra` additional grading levels toward the boundary.
    pub fn deepened(&self, extra: u32) -> Window {
        let mut w = self.clone();
        w.levels += extra;
        w
    }
}

/// How a ladder derives its rungs from the base window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LadderKind {
    /// Rung value s: `Window::scaled(s, time_power)`.
    Homothetic { time_power: f64 },
    /// Rung value s (integer): `Window::expanded(s)`.
    Expanding,
    /// Rung value r (integer): `Window::refined(r)`; reported scale 2^r.
    Refining,
    /// Rung value k (integer): `Window::deepened(k)`; reported scale 1/(finest level).
    Deepening,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ladder {
    pub base: Window,
    pub kind: LadderKind,
    pub rungs: Vec<f64>,
}

/// One rung: reported scale, grid level index, window.
#[derive(Clone, Debug)]
pub struct RungWindow {
    pub scale: f64,
    pub level: u32,
    pub window: Window,
}

impl Ladder {
    pub fn new(base: Window, kind: LadderKind, rungs: Vec<f64>) -> Ladder {
        Ladder { base, kind, rungs }
    }

    pub fn windows(&self) -> Result<Vec<RungWindow>> {
        let mut out = Vec::with_capacity(self.rungs.len());
        for (i, &r) in self.rungs.iter().enumerate() {
            let (scale, window) = match &self.kind {
                LadderKind::Homothetic { time_power } => (r, self.base.scaled(r, *time_power)),
                LadderKind::Expanding => (r, self.base.expanded(r.round() as u32)),
                LadderKind::Refining => (2f64.powf(r), self.base.refined(r.round() as u32)),
                LadderKind::Deepening => {
                    let w = self.base.deepened(r.round() as u32);
                    (1.0 / w.finest_level(), w)
                }
            };
            window.validate()?;
            out.push(RungWindow { scale, level: i as u32, window });
        }
        for pair in out.windows(2) {
            if pair[1].scale < pair[0].scale {
                return Err(Error::InvalidWindow("ladder scales must be nondecreasing".into()));
            }
        }
        Ok(out)
    }
}

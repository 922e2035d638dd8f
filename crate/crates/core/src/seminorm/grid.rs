use rayon::prelude::*;

use crate::error::Result;
use crate::geometry::DomainGeometry;
use crate::seminorm::field::PointEval;
use crate::seminorm::window::Window;

/// Tensor structure of a half-space sample set (x_N fastest).
#[derive(Clone, Debug)]
pub struct Lattice {
    pub shape: Vec<usize>,
    pub strides: Vec<usize>,
    pub axes: Vec<Vec<f64>>,
}

impl Lattice {
    pub fn index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    /// All lines along `axis`: each line is the list of spatial indices in axis order.
    pub fn lines(&self, axis: usize) -> Vec<Vec<usize>> {
        let n = self.shape.len();
        let mut out = Vec::new();
        let mut idx = vec![0usize; n];
        loop {
            if idx[axis] == 0 {
                let mut line = Vec::with_capacity(self.shape[axis]);
                let base = self.index(&idx);
                for k in 0..self.shape[axis] {
                    line.push(base + k * self.strides[axis]);
                }
                out.push(line);
            }
            // odometer over all axes except `axis`
            let mut a = n;
            loop {
                if a == 0 {
                    return out;
                }
                a -= 1;
                if a == axis {
                    continue;
                }
                idx[a] += 1;
                if idx[a] < self.shape[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
    }

    /// Groups of indices sharing the same x_N level (all tangential points at that level).
    pub fn level_slices(&self) -> Vec<Vec<usize>> {
        let n = self.shape.len();
        let nl = self.shape[n - 1];
        let tangential: usize = self.shape[..n - 1].iter().product();
        (0..nl)
            .map(|l| (0..tangential).map(|k| k * nl + l).collect())
            .collect()
    }
}

/// Structured sample set derived from a window.
#[derive(Clone, Debug)]
pub struct SampleGrid {
    pub dim: usize,
    pub geometry: DomainGeometry,
    pub points: Vec<f64>,
    /// Boundary distance (x_N or d(x)) per spatial point.
    pub weight: Vec<f64>,
    /// Rank of the point's boundary-distance level, 0 = closest to the boundary.
    pub stratum: Vec<u32>,
    pub times: Vec<f64>,
    pub lattice: Option<Lattice>,
    pub pair_cap: usize,
    /// Largest boundary distance sampled.
    pub top: f64,
}

impl SampleGrid {
    pub fn new(window: &Window) -> Result<SampleGrid> {
        window.validate()?;
        let levels = window.normal_levels();
        let times = window.times();
        let top = levels.last().copied().unwrap_or(0.0);
        match &window.geometry {
            DomainGeometry::HalfSpace => {
                let dim = window.dim();
                let mut axes: Vec<Vec<f64>> = (0..dim - 1).map(|a| window.tangent_axis(a)).collect();
                axes.push(levels.clone());
                let shape: Vec<usize> = axes.iter().map(|a| a.len()).collect();
                let mut strides = vec![1usize; dim];
                for a in (0..dim - 1).rev() {
                    strides[a] = strides[a + 1] * shape[a + 1];
                }
                let total: usize = shape.iter().product();
                let mut points = Vec::with_capacity(total * dim);
                let mut weight = Vec::with_capacity(total);
                let mut stratum = Vec::with_capacity(total);
                for s in 0..total {
                    let mut rem = s;
                    for a in 0..dim {
                        let i = rem / strides[a];
                        rem %= strides[a];
                        points.push(axes[a][i]);
                        if a == dim - 1 {
                            weight.push(axes[a][i]);
                            stratum.push(i as u32);
                        }
                    }
                }
                Ok(SampleGrid {
                    dim,
                    geometry: window.geometry.clone(),
                    points,
                    weight,
                    stratum,
                    times,
                    lattice: Some(Lattice { shape, strides, axes }),
                    pair_cap: window.pair_cap,
                    top,
                })
            }
            DomainGeometry::Disk(disk) => {
                let r = disk.radius;
                let (cx, cy) = (disk.center[0], disk.center[1]);
                let mut points = Vec::new();
                let mut weight = Vec::new();
                let mut stratum = Vec::new();
                // offsets δ ascending; δ = R is the center
                for (rank, &delta) in levels.iter().enumerate() {
                    let rho = r - delta;
                    if rho <= 1e-14 * r {
                        points.extend_from_slice(&[cx, cy]);
                        weight.push(disk.distance(&[cx, cy]));
                        stratum.push(rank as u32);
                        continue;
                    }
                    let np = window.tangent_count();
                    let offset = if rank % 2 == 0 { 0.0 } else { 0.5 };
                    for k in 0..np {
                        let th = 2.0 * std::f64::consts::PI * (k as f64 + offset) / np as f64;
                        let p = [cx + rho * th.cos(), cy + rho * th.sin()];
                        let d = disk.distance(&p);
                        points.extend_from_slice(&p);
                        weight.push(if d.abs() < 1e-14 * r { 0.0 } else { d });
                        stratum.push(rank as u32);
                    }
                }
                Ok(SampleGrid {
                    dim: 2,
                    geometry: window.geometry.clone(),
                    points,
                    weight,
                    stratum,
                    times,
                    lattice: None,
                    pair_cap: window.pair_cap,
                    top: r / 2.0,
                })
            }
        }
    }

    pub fn n_spatial(&self) -> usize {
        self.weight.len()
    }

    pub fn point(&self, s: usize) -> &[f64] {
        &self.points[s * self.dim..(s + 1) * self.dim]
    }

    /// Values at every (t, x) sample, laid out as `t_index * n_spatial + s`.
    pub fn values(&self, f: &dyn PointEval) -> Vec<f64> {
        let ns = self.n_spatial();
        (0..ns * self.times.len())
            .into_par_iter()
            .map(|k| {
                let (ti, s) = (k / ns, k % ns);
                f.eval(self.point(s), self.times[ti])
            })
            .collect()
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.point(a).iter().zip(self.point(b)).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    }
}

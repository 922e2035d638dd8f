use crate::field::expr::Expr;
use crate::field::multi_index::{binomial, MultiIndex};
use crate::field::poly::Poly;

/// Fixed probe points in the open half-space used by consistency checks.
pub fn probe_points(dim: usize) -> Vec<Vec<f64>> {
    (0..5)
        .map(|k| {
            let mut x: Vec<f64> = (0..dim - 1).map(|i| -0.6 + 0.37 * ((k + 2 * i) % 5) as f64).collect();
            x.push(0.8 + 0.3 * k as f64);
            x
        })
        .collect()
}

/// 1D central stencil for the a-th derivative: offsets (in units of h) and weights.
fn central_stencil(a: u32, h: f64) -> Vec<(i32, f64)> {
    let scale = (2.0 * h).powi(a as i32);
    (0..=a)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            (a as i32 - 2 * i as i32, sign * binomial(a, i) / scale)
        })
        .collect()
}

/// Tensor-product central difference approximation of D^α f at x.
pub fn central_difference(p: &Poly, alpha: &MultiIndex, x: &[f64], t: f64, h: f64) -> f64 {
    central_difference_fn(|q| p.eval(q, t), alpha, x, h)
}

/// As [`central_difference`] for an arbitrary spatial function.
pub fn central_difference_fn<F: Fn(&[f64]) -> f64>(f: F, alpha: &MultiIndex, x: &[f64], h: f64) -> f64 {
    let mut nodes: Vec<(Vec<f64>, f64)> = vec![(x.to_vec(), 1.0)];
    for (axis, &a) in alpha.0.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let st = central_stencil(a, h);
        let mut next = Vec::with_capacity(nodes.len() * st.len());
        for (pt, w) in &nodes {
            for &(off, sw) in &st {
                let mut q = pt.clone();
                q[axis] += off as f64 * h;
                next.push((q, w * sw));
            }
        }
        nodes = next;
    }
    nodes.iter().map(|(q, w)| w * f(q)).sum()
}

/// Max over the probe set of |central FD − symbolic derivative|. NaN if a stencil leaves x_N > 0.
pub fn fd_consistency(e: &Expr, alpha: &MultiIndex, h: f64) -> f64 {
    let dim = alpha.dim();
    let p = match e.to_poly(dim) {
        Ok(p) => p,
        Err(_) => return f64::NAN,
    };
    let d = p.derivative(alpha, 0);
    let t = 0.2;
    let mut err: f64 = 0.0;
    for x in probe_points(dim) {
        if x[dim - 1] - alpha.normal() as f64 * h <= 0.0 {
            return f64::NAN;
        }
        let approx = central_difference(&p, alpha, &x, t, h);
        let exact = d.eval(&x, t);
        err = err.max((approx - exact).abs());
    }
    err
}

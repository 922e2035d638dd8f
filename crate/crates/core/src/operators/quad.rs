//! Gauss–Legendre rules and panel quadrature.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&n) {
        return r.clone();
    }
    let r = compute_rule(n);
    cache.lock().unwrap().insert(n, r.clone());
    r
}

fn compute_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// ∫_a^b f with an n-point rule.
pub fn gauss<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for (xi, wi) in x.iter().zip(&w) {
        s += wi * f(c + h * xi);
    }
    s * h
}

/// ∫ over consecutive breakpoints, one n-point rule per panel.
pub fn panels<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], n: usize) -> f64 {
    breaks.windows(2).filter(|p| p[1] > p[0]).map(|p| gauss(&mut f, p[0], p[1], n)).sum()
}

/// Sorted, deduplicated breakpoints clipped to [a, b], with the endpoints included.
pub fn breakpoints(a: f64, b: f64, interior: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = interior.iter().copied().filter(|&x| x > a && x < b).collect();
    v.push(a);
    v.push(b);
    v.sort_by(|p, q| p.partial_cmp(q).unwrap());
    v.dedup_by(|p, q| (*p - *q).abs() <= 1e-15 * (1.0 + q.abs()));
    v
}

/// Adaptive bisection on 10-point Gauss–Legendre panels to absolute tolerance `tol`.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (l, r) = (gauss(f, a, m, 10), gauss(f, m, b, 10));
        if (l + r - whole).abs() <= tol || depth >= 50 {
            return l + r;
        }
        step(f, a, m, l, 0.5 * tol, depth + 1) + step(f, m, b, r, 0.5 * tol, depth + 1)
    }
    step(&f, a, b, gauss(&f, a, b, 10), tol, 0)
}

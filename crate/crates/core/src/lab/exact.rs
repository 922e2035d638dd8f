//! Exact identities: planted gauges are recovered, and the closed-form iterated logarithms
//! agree with quadrature of their integral representation.

use crate::error::{Error, Result};
use crate::field::{evaluate, Expr};
use crate::lab::model::{CheckCase, Recorder, Relation, VerificationReport};
use crate::operators::quad::adaptive;
use crate::operators::{gauge_tilde, iterated_log, LimitOptions};

/// Coefficient tolerance for the power branch and for the logarithmic branch.
const POWER_TOL: f64 = 1e-10;
const LOG_TOL: f64 = 1e-8;

/// Planted coefficient from a member named "planted-<c>", or the profile multiple.
fn planted(name: &str) -> Option<f64> {
    name.strip_prefix("planted-").and_then(|c| c.parse().ok())
}

pub fn check_gauge_exactness(case: &CheckCase) -> Result<VerificationReport> {
    let p = &case.params;
    let threshold = if p.integer_n() { LOG_TOL } else { POWER_TOL };
    let mut rec = Recorder::new();
    let dim = case.dim;
    for m in &case.family {
        let u = m.expression()?;
        let c = planted(&m.name)
            .ok_or_else(|| Error::MalformedCase(format!("member {}: expected a name planted-<coefficient>", m.name)))?;
        let mi = rec.member(m);
        let g = gauge_tilde(u, p, dim, &LimitOptions::default())?;
        let recovered = g.a * g.b;
        rec.sweep(mi, "recovered coefficient", &[(c, recovered)]);
        let rel = (recovered - c).abs() / c.abs().max(f64::MIN_POSITIVE);
        rec.check("coefficient relative error", Some(&m.name), rel, Relation::Below { bound: threshold });
        let worst = profile_mismatch(u, &g.q_tilde, dim)?;
        rec.sweep(mi, "relative mismatch of Q̃ and u", &[(c, worst)]);
        rec.check("Q̃ reproduces u", Some(&m.name), worst, Relation::Below { bound: threshold });
    }
    rec.note(if p.integer_n() { "logarithmic branch" } else { "power branch" });
    Ok(rec.finish(case))
}

fn profile_mismatch(u: &Expr, q: &Expr, dim: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for &s in &[1e-3, 0.05, 0.3, 0.9, 1.7] {
        for &y in &[-0.8, 0.0, 0.6] {
            let mut x = vec![y; dim];
            x[dim - 1] = s;
            let (a, b) = (evaluate(u, &x, 0.0)?, evaluate(q, &x, 0.0)?);
            worst = worst.max((a - b).abs() / a.abs().max(1e-300));
        }
    }
    Ok(worst)
}

/// L_k(x) = 1/(k−1)! ∫_0^x (x − ξ)^{k−1} ln ξ dξ, substituted ξ = x v².
pub fn iterated_log_by_quadrature(k: u32, x: f64) -> f64 {
    if k == 0 {
        return x.ln();
    }
    let fact: f64 = (1..k).map(f64::from).product();
    let f = |v: f64| {
        if v == 0.0 {
            return 0.0;
        }
        let xi = x * v * v;
        (x - xi).powi(k as i32 - 1) * xi.ln() * 2.0 * x * v
    };
    adaptive(f, 0.0, 1.0, 1e-14) / fact
}

fn level(name: &str) -> Option<u32> {
    name.strip_prefix('L').and_then(|k| k.parse().ok())
}

pub fn check_iterated_log(case: &CheckCase) -> Result<VerificationReport> {
    let xs = if case.sweep.is_empty() { vec![0.1, 0.5, 1.0, 2.0] } else { case.sweep.clone() };
    let mut rec = Recorder::new();
    for m in &case.family {
        let k = level(&m.name).ok_or_else(|| Error::MalformedCase(format!("member {}: expected a name L<k>", m.name)))?;
        let mi = rec.member(m);
        let mut errs = Vec::new();
        for &x in &xs {
            let closed = iterated_log(k, x)?;
            let quad = iterated_log_by_quadrature(k, x);
            let via_expr = evaluate(m.expression()?, &[x], 0.0)?;
            errs.push((x, (closed - quad).abs() / quad.abs().max(1.0)));
            rec.check(format!("L{k}({x}) expression"), Some(&m.name), (via_expr - closed).abs() / closed.abs().max(1.0), Relation::Below {
                bound: 1e-12,
            });
        }
        rec.sweep(mi, "closed form against quadrature", &errs);
        for (x, e) in errs {
            rec.check(format!("L{k}({x}) quadrature"), Some(&m.name), e, Relation::AtMost { bound: 1e-10 });
        }
    }
    Ok(rec.finish(case))
}

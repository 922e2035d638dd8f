//! Curated test functions and default windows.

use crate::error::Result;
use crate::field::cutoff::CutoffSpec;
use crate::field::{cutoff, Expr, SpaceParams};
use crate::geometry::Disk;
use crate::lab::model::Member;
use crate::operators::{BoundaryFunction, BoundaryProfile};
use crate::seminorm::{Ladder, LadderKind, Window};

/// Outer radius of the default bump.
pub const BUMP_RADIUS: f64 = 1.5;

/// η(x) ≡ 1 on |x| ≤ 1/2, supported in |x| ≤ 3/2, of class C^{m+2}.
pub fn bump(dim: usize, p: &SpaceParams) -> Result<Expr> {
    cutoff(vec![0.0; dim], 0.5, BUMP_RADIUS, p.m + 2, p.m)
}

/// η(x, t) with the radius taken over (x, t).
pub fn spacetime_bump(dim: usize, p: &SpaceParams) -> Result<Expr> {
    let spec = CutoffSpec {
        center: vec![0.0; dim],
        axes: None,
        time_center: Some(0.0),
        r_inner: 0.5,
        r_outer: BUMP_RADIUS,
        order: p.m + 2,
    };
    spec.validate(dim)?;
    Ok(Expr::cutoff_raw(spec))
}

/// Half-space window covering the bump, graded toward x_N = 0.
pub fn compact_window(dim: usize, tangent_points: usize, levels: u32) -> Window {
    let mut w = Window::unit(dim).with_tangent(1.6, tangent_points).with_grading(0.7, levels);
    w.boundary_extent = 1.6;
    w
}

pub fn deepening(base: Window, rungs: &[f64]) -> Ladder {
    Ladder::new(base, LadderKind::Deepening, rungs.to_vec())
}

fn x1() -> Expr {
    Expr::coord(0, 1)
}

pub fn embedding(p: &SpaceParams) -> Result<Vec<Member>> {
    let eta = bump(2, p)?;
    let crit = (1.0 - p.omega()) * p.gamma;
    Ok(vec![
        Member::expr("constant", "both seminorms vanish", Expr::constant(2.0)),
        Member::expr("bump-critical-power", "x_N^{(1−ω)γ} is the borderline boundary power", eta.clone() * Expr::xn(crit)),
        Member::expr("bump-linear", "smooth, compactly supported", eta * x1()),
    ])
}

pub fn kdiff(p: &SpaceParams) -> Result<Vec<Member>> {
    let eta = bump(2, p)?;
    let eta1 = bump(1, p)?;
    // γ' in [(1−ω)γ, γ) keeps D^m u in the weighted class
    let gp = p.gamma * (1.0 - 0.5 * p.omega());
    Ok(vec![
        Member::expr("constant", "all differences vanish", Expr::constant(1.0)),
        Member::expr("bump-gauge-power", "gauge profile x_N^{m−n}", eta.clone() * Expr::xn(p.m_minus_n())),
        Member::expr("bump-linear", "smooth, compactly supported", eta * x1()),
        Member::expr("line-power", "one-dimensional x^{m+γ'}·cutoff with γ' < γ", eta1 * Expr::xn(p.mf() + gp))
            .in_dim(1),
    ])
}

pub fn minmax(p: &SpaceParams) -> Result<Vec<Member>> {
    let eta = bump(2, p)?;
    Ok(vec![
        Member::expr("constant", "both seminorms vanish", Expr::constant(1.0)),
        Member::expr("bump-power-gamma", "x_N^γ", eta.clone() * Expr::xn(p.gamma)),
        Member::expr("bump-linear", "smooth, compactly supported", eta * x1()),
    ])
}

pub fn eps_restriction(p: &SpaceParams) -> Result<Vec<Member>> {
    embedding(p)
}

pub fn cc_metric(p: &SpaceParams) -> Result<Vec<Member>> {
    let eta = bump(2, p)?;
    let mut out = embedding(p)?;
    out.push(Member::expr("bump-gauge-power", "gauge profile x_N^{m−n}", eta * Expr::xn(p.m_minus_n())));
    Ok(out)
}

/// Six admissible members: four stationary, two space-time.
pub fn main_estimate(p: &SpaceParams) -> Result<Vec<Member>> {
    let eta = bump(2, p)?;
    let st = spacetime_bump(2, p)?;
    let mmn = p.m_minus_n();
    let crit = mmn + (1.0 - p.omega()) * p.gamma;
    Ok(vec![
        Member::expr("bump-tangential-power", "x_1^m, smooth", eta.clone() * x1().pow(p.m)),
        Member::expr("bump-gauge-power", "gauge profile x_N^{m−n}", eta.clone() * Expr::xn(mmn)),
        Member::expr("bump-critical-power", "x_N^{m−n+(1−ω)γ}, borderline boundary regularity", eta.clone() * Expr::xn(crit)),
        Member::expr("bump-mixed", "x_1·x_N^{m−n}", eta * x1() * Expr::xn(mmn)),
        Member::expr("spacetime-affine", "η(x,t)·(1 + x_1)", st.clone() * (Expr::constant(1.0) + x1())),
        Member::expr("spacetime-gauge-power", "η(x,t)·x_N^{m−n}", st * Expr::xn(mmn)),
    ])
}

/// u = x_1² x_2^{2−n}: zero right-hand side, unbounded mixed derivative seminorm.
pub fn counterexample(p: &SpaceParams) -> Vec<Member> {
    vec![Member::expr(
        "mixed-growth",
        "x_1²x_2^{2−n}; D_{x_1}² and D_{x_2}² terms are constant in the relevant variable",
        x1().pow(2) * Expr::xn(2.0 - p.n),
    )]
}

pub fn unit_disk() -> Disk {
    Disk { center: vec![0.0, 0.0], radius: 1.0 }
}

pub fn general_domain(p: &SpaceParams) -> Result<Vec<Member>> {
    let disk = unit_disk();
    let eta = cutoff(vec![1.0, 0.0], 0.3, 0.8, p.m + 2, p.m)?;
    let poly = if p.m_minus_n() > 1.0 {
        x1() + Expr::coord(1, 1).scaled(2.0)
    } else {
        Expr::constant(3.0)
    };
    Ok(vec![
        Member::expr("zero", "vacuous", Expr::zero()),
        Member::expr("boundary-bump-gauge", "bump at a boundary point times d(x)^{m−n}", eta * Expr::disk_distance(disk, p.m_minus_n())),
        Member::expr("low-degree-polynomial", "degree below m−n: top-order terms vanish", poly),
    ])
}

pub fn lower_order(p: &SpaceParams) -> Result<Vec<Member>> {
    let eta = bump(2, p)?;
    let mmn = p.m_minus_n();
    if p.integer_n() {
        let k = p.floor_m_minus_n();
        Ok(vec![
            Member::expr(
                "boundary-vanishing",
                "x_N^{m−n+1}: x_N^n D_{x_N}^m u vanishes on the boundary",
                eta.clone() * Expr::xn(mmn + 1.0),
            ),
            Member::expr(
                "log-gauge",
                "iterated-log gauge L_{m−n}(x_N): x_N^n D_{x_N}^m u = const on the boundary",
                eta * Expr::log(k),
            ),
        ])
    } else {
        Ok(vec![
            Member::expr("bump-gauge-power", "gauge profile x_N^{m−n}", eta.clone() * Expr::xn(mmn)),
            Member::expr("bump-mixed", "x_1·x_N^{m−n}", eta * x1() * Expr::xn(mmn)),
        ])
    }
}

pub fn trace_extension(p: &SpaceParams) -> Vec<Member> {
    let l = crate::operators::poisson::boundary_exponent(p);
    vec![
        Member::boundary("zero", "v ≡ 0", BoundaryFunction::new(BoundaryProfile::Zero, 1.0, 1.5, p.m + 2)),
        Member::boundary(
            "windowed-cosine",
            "cos(π y) on a wide window: P[v] ≈ cos(π x_1) e^{−π x_N} near the origin",
            BoundaryFunction::new(BoundaryProfile::WindowedCosine { frequency: std::f64::consts::PI }, 10.0, 20.0, p.m + 2),
        ),
        Member::boundary(
            "windowed-gaussian",
            "smooth, compactly supported",
            BoundaryFunction::new(BoundaryProfile::Gaussian { sigma: 0.5 }, 1.0, 1.5, p.m + 2),
        ),
        Member::boundary(
            "abs-power",
            "|y|^l with l = m − n + (1 − ω)γ: exactly C^l at the origin",
            BoundaryFunction::new(BoundaryProfile::AbsPower { power: l }, 0.5, 1.0, p.m + 2),
        ),
    ]
}

pub fn interpolation(p: &SpaceParams) -> Result<Vec<Member>> {
    let eta = bump(2, p)?;
    let st = spacetime_bump(2, p)?;
    let mmn = p.m_minus_n();
    let sum = x1().pow(p.m) + Expr::xn(mmn);
    Ok(vec![
        Member::expr("zero", "vacuous", Expr::zero()),
        Member::expr("bump-power-sum", "x_1^m + x_N^{m−n}", eta.clone() * sum.clone()),
        Member::expr("bump-mixed", "x_1^{m−1}x_N", eta * x1().pow(p.m - 1) * Expr::coord(1, 1)),
        Member::expr("spacetime-power-sum", "η(x,t)·(x_1^m + x_N^{m−n})", st * sum),
    ])
}

pub fn small_time(p: &SpaceParams) -> Result<Vec<Member>> {
    let eta = bump(2, p)?;
    let t2 = Expr::t(2);
    Ok(vec![
        Member::expr("t2-gauge-power", "t²·x_N^{m−n}", t2.clone() * eta.clone() * Expr::xn(p.m_minus_n())),
        Member::expr("t2-linear", "t²·x_1", t2.clone() * eta.clone() * x1()),
        Member::expr("t2-t3-power", "(t² + t³)·x_1^m", (t2 + Expr::t(3)) * eta * x1().pow(p.m)),
    ])
}

/// Planted gauges c·x_N^{m−n}, or c·L_{m−n}(x_N) for integer n.
pub fn gauge_exactness(p: &SpaceParams, coefficients: &[f64]) -> Vec<Member> {
    let profile = crate::operators::gauge::gauge_profile(p);
    coefficients
        .iter()
        .map(|&c| Member::expr(&format!("planted-{c}"), "exact gauge profile", profile.clone().scaled(c)))
        .collect()
}

pub fn iterated_log() -> Vec<Member> {
    (0..=4u32).map(|k| Member::expr(&format!("L{k}"), "iterated logarithm", Expr::log(k))).collect()
}

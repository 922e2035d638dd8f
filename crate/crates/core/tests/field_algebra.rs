mod common;

use proptest::prelude::*;
use wholder::field::{cutoff, differentiate, evaluate, fd_consistency, Expr, MultiIndex};

fn d1(dim: usize, axis: usize) -> MultiIndex {
    MultiIndex::unit(dim, axis)
}

// ---------------------------------------------------------------- differentiate

#[test]
fn power_rule_on_boundary_power() {
    let e = Expr::xn(2.5);
    let d = differentiate(&e, &d1(2, 1), 0).unwrap();
    for &x in &[0.3, 1.0, 2.7] {
        let v = evaluate(&d, &[0.4, x], 0.0).unwrap();
        assert!((v - 2.5 * x.powf(1.5)).abs() < 1e-13);
    }
}

#[test]
fn iterated_log_differentiates_to_previous_level() {
    let d = differentiate(&Expr::log(1), &d1(1, 0), 0).unwrap();
    assert_eq!(d, Expr::Product { factors: vec![Expr::constant(1.0), Expr::log(0)] });
    for &x in &[0.1, 1.0, 3.0] {
        assert!((evaluate(&d, &[x], 0.0).unwrap() - x.ln()).abs() < 1e-14);
    }
    let d3 = differentiate(&Expr::log(3), &MultiIndex::new(vec![2]), 0).unwrap();
    let l1 = Expr::log(1).to_poly(1).unwrap().to_expr();
    let d3p = d3.to_poly(1).unwrap().to_expr();
    assert_eq!(d3p, l1);
}

#[test]
fn second_tangential_derivative_of_counterexample() {
    let n = 0.5;
    let u = Expr::coord(0, 2) * Expr::xn(2.0 - n);
    let d = differentiate(&u, &MultiIndex::new(vec![2, 0]), 0).unwrap();
    for &(a, b) in &[(0.3, 0.7), (-1.2, 2.0)] {
        let v = evaluate(&d, &[a, b], 0.0).unwrap();
        assert!((v - 2.0 * f64::powf(b, 2.0 - n)).abs() < 1e-13);
    }
}

#[test]
fn time_derivatives() {
    let u = Expr::t(3) * Expr::coord(0, 1);
    let d = differentiate(&u, &MultiIndex::zeros(2), 2).unwrap();
    assert!((evaluate(&d, &[2.0, 1.0], 0.5).unwrap() - 6.0 * 0.5 * 2.0).abs() < 1e-14);
}

// ---------------------------------------------------------------- evaluate

#[test]
fn evaluate_examples() {
    assert_eq!(evaluate(&Expr::xn(0.5), &[0.0, 4.0], 0.0).unwrap(), 2.0);
    assert!((evaluate(&Expr::log(1), &[0.0, 1.0], 0.0).unwrap() + 1.0).abs() < 1e-15);
    let v = evaluate(&Expr::xn(-0.5), &[0.0, 0.0], 0.0).unwrap();
    assert!(!v.is_finite());
    assert_eq!(evaluate(&Expr::log(1), &[0.0, 0.0], 0.0).unwrap(), 0.0);
    assert!(!evaluate(&Expr::log(0), &[0.0, 0.0], 0.0).unwrap().is_finite());
}

#[test]
fn canonicalization_avoids_zero_times_infinity() {
    for &n in &[0.5, 1.0, 1.7] {
        let e = Expr::xn(n) * Expr::xn(-n) * Expr::constant(3.25);
        assert_eq!(evaluate(&e, &[0.2, 0.0], 0.0).unwrap(), 3.25);
    }
    // x_N^{1/2} · x_N^{3/2} and x_N^2 are the same monomial.
    let a = (Expr::xn(0.5) * Expr::xn(1.5)).to_poly(2).unwrap();
    let b = Expr::xn(2.0).to_poly(2).unwrap();
    assert_eq!(a.terms(), b.terms());
}

// ---------------------------------------------------------------- cutoff

#[test]
fn cutoff_basic_values() {
    let eta = cutoff(vec![0.3, 0.5], 0.5, 1.0, 3, 2).unwrap();
    assert_eq!(evaluate(&eta, &[0.3, 0.5], 0.0).unwrap(), 1.0);
    assert_eq!(evaluate(&eta, &[0.3, 1.6], 0.0).unwrap(), 0.0);
    assert!(cutoff(vec![0.0, 0.0], 0.5, 1.0, 2, 2).is_err());
    assert!(cutoff(vec![0.0, 0.0], 1.0, 0.5, 4, 2).is_err());
}

fn max_abs_derivative_along_x1(eta: &Expr, s: u32, r_outer: f64) -> f64 {
    let d = differentiate(eta, &MultiIndex::new(vec![s, 0]), 0).unwrap();
    let p = d.to_poly(2).unwrap();
    let n = 20000;
    (0..=n)
        .map(|i| {
            let x = r_outer * 1.05 * i as f64 / n as f64;
            p.eval(&[x, 0.0], 0.0).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn cutoff_derivatives_scale_with_gap() {
    let wide = cutoff(vec![0.0, 0.0], 1.0, 2.0, 4, 2).unwrap();
    let narrow = cutoff(vec![0.0, 0.0], 1.0, 1.5, 4, 2).unwrap();
    for s in 1..=3 {
        let a = max_abs_derivative_along_x1(&wide, s, 2.0);
        let b = max_abs_derivative_along_x1(&narrow, s, 1.5);
        let ratio = b / a;
        let expect = 2f64.powi(s as i32);
        assert!((ratio / expect - 1.0).abs() < 0.02, "s={s}: ratio {ratio}");
    }
}

#[test]
fn cutoff_is_smooth_to_its_order() {
    // order 3: derivatives up to order 3 are continuous across r_inner and r_outer
    let eta = cutoff(vec![0.0, 0.0], 1.0, 2.0, 3, 2).unwrap();
    for s in 0..=3u32 {
        let d = differentiate(&eta, &MultiIndex::new(vec![s, 0]), 0).unwrap().to_poly(2).unwrap();
        for &r in &[1.0, 2.0] {
            let jump = (d.eval(&[r + 1e-9, 0.0], 0.0) - d.eval(&[r - 1e-9, 0.0], 0.0)).abs();
            assert!(jump < 1e-5, "s={s} r={r} jump={jump}");
        }
    }
}

// ---------------------------------------------------------------- fd_consistency

#[test]
fn fd_constant_is_exact() {
    assert_eq!(fd_consistency(&Expr::constant(4.0), &MultiIndex::new(vec![1, 1]), 0.1), 0.0);
}

#[test]
fn fd_bilinear_is_exact() {
    let e = Expr::coord(0, 1) * Expr::xn(1.0);
    assert!(fd_consistency(&e, &MultiIndex::new(vec![1, 1]), 0.05) <= 1e-10);
}

#[test]
fn fd_second_order_rate() {
    // The symmetric stencil is exact on cubics (its error involves the fourth derivative),
    // so the rate is measured on x_N^4; x_N^3 is checked for exactness.
    let a = MultiIndex::new(vec![0, 2]);
    let e3 = Expr::xn(3.0);
    assert!(fd_consistency(&e3, &a, 0.1) < 1e-9);
    let e4 = Expr::xn(4.0);
    let r = fd_consistency(&e4, &a, 0.1) / fd_consistency(&e4, &a, 0.05);
    assert!((r / 4.0 - 1.0).abs() < 0.2, "ratio {r}");
}

#[test]
fn closure_agrees_with_fd_for_all_generators() {
    let eta = cutoff(vec![0.4, 1.2], 0.3, 1.4, 5, 2).unwrap();
    let gens = vec![
        Expr::coord(0, 3),
        Expr::xn(1.5),
        Expr::xn(-0.5),
        Expr::log(0),
        Expr::log(2),
        Expr::t(2) * Expr::coord(0, 1),
        eta.clone(),
        eta * Expr::xn(0.5) * Expr::log(1),
    ];
    for g in &gens {
        for k in 1..=3u32 {
            for alpha in MultiIndex::all_of_order(2, k) {
                let e1 = fd_consistency(g, &alpha, 2e-3);
                let e2 = fd_consistency(g, &alpha, 1e-3);
                assert!(e1.is_finite());
                // second order: halving h divides the error by ~4 unless already at rounding level
                assert!(e2 < 1e-5 || e2 <= 0.3 * e1, "{} {:?}: {e1} {e2}", g.render(), alpha);
            }
        }
    }
}

// ---------------------------------------------------------------- invariants

#[test]
fn leibniz_rule_pointwise() {
    let f = Expr::coord(0, 2) * Expr::xn(1.5) + Expr::log(1);
    let g = cutoff(vec![0.0, 0.5], 0.4, 1.5, 4, 2).unwrap() * Expr::t(1) + Expr::xn(0.25);
    for axis in 0..2 {
        let e = d1(2, axis);
        let lhs = differentiate(&(f.clone() * g.clone()), &e, 0).unwrap().to_poly(2).unwrap();
        let fp = differentiate(&f, &e, 0).unwrap().to_poly(2).unwrap();
        let gp = differentiate(&g, &e, 0).unwrap().to_poly(2).unwrap();
        let fpo = f.to_poly(2).unwrap();
        let gpo = g.to_poly(2).unwrap();
        for x in wholder::field::fd::probe_points(2) {
            let t = 0.3;
            let l = lhs.eval(&x, t);
            let r = fp.eval(&x, t) * gpo.eval(&x, t) + fpo.eval(&x, t) * gp.eval(&x, t);
            assert!((l - r).abs() <= 1e-12 * (1.0 + r.abs()), "{l} vs {r}");
        }
    }
}

#[test]
fn l1_closed_form() {
    let p = Expr::log(1).to_poly(1).unwrap();
    for i in 1..=1000 {
        let x = 10.0 * i as f64 / 1000.0;
        assert!((p.eval(&[x], 0.0) - (x * x.ln() - x)).abs() < 1e-12);
    }
}

#[test]
fn iterated_logs_match_quadrature_of_nested_integral() {
    for k in 1..=4u32 {
        let p = Expr::log(k).to_poly(1).unwrap();
        for &x in &[0.1, 0.5, 1.0, 2.0] {
            let q = common::iterated_log_quadrature(k, x);
            assert!((p.eval(&[x], 0.0) - q).abs() < 1e-10, "k={k} x={x}");
        }
    }
    let p2 = Expr::log(2).to_poly(1).unwrap();
    assert!((p2.eval(&[1.0], 0.0) + 0.75).abs() < 1e-15);
}

#[test]
fn json_round_trip() {
    let e = cutoff(vec![0.0, 0.0], 0.5, 1.0, 3, 2).unwrap() * Expr::coord(0, 2) * Expr::xn(1.5) + Expr::log(2);
    let s = serde_json::to_string(&e).unwrap();
    let back: Expr = serde_json::from_str(&s).unwrap();
    assert_eq!(back, e);
    let parsed: Expr = serde_json::from_str(
        r#"{"kind":"product","factors":[{"kind":"coordinate","axis":0,"power":2},{"kind":"boundary_power","power":1.5}]}"#,
    )
    .unwrap();
    assert!((evaluate(&parsed, &[2.0, 4.0], 0.0).unwrap() - 32.0).abs() < 1e-12);
}

#[test]
fn invalid_axis_rejected() {
    assert!(Expr::coord(3, 1).to_poly(2).is_err());
}

proptest! {
    #[test]
    fn prop_leibniz_on_random_monomials(
        p1 in 0u32..4, p2 in 0u32..4, a in -1.5f64..2.5, b in -1.5f64..2.5,
        c1 in -3.0f64..3.0, c2 in -3.0f64..3.0, axis in 0usize..2,
    ) {
        let f = Expr::constant(c1) * Expr::coord(0, p1) * Expr::xn(a);
        let g = Expr::constant(c2) * Expr::coord(0, p2) * Expr::xn(b) + Expr::log(1);
        let e = MultiIndex::unit(2, axis);
        let lhs = differentiate(&(f.clone() * g.clone()), &e, 0).unwrap().to_poly(2).unwrap();
        let fp = differentiate(&f, &e, 0).unwrap().to_poly(2).unwrap();
        let gp = differentiate(&g, &e, 0).unwrap().to_poly(2).unwrap();
        let (fo, go) = (f.to_poly(2).unwrap(), g.to_poly(2).unwrap());
        for x in wholder::field::fd::probe_points(2) {
            let l = lhs.eval(&x, 0.0);
            let r = fp.eval(&x, 0.0) * go.eval(&x, 0.0) + fo.eval(&x, 0.0) * gp.eval(&x, 0.0);
            prop_assert!((l - r).abs() <= 1e-11 * (1.0 + r.abs()));
        }
    }

    #[test]
    fn prop_pre_weight_cancels(n in 0.05f64..3.0, c in -5.0f64..5.0) {
        let e = Expr::xn(n) * Expr::xn(-n) * Expr::constant(c);
        prop_assert_eq!(evaluate(&e, &[0.1, 0.0], 0.0).unwrap(), c);
    }
}

mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use wholder::field::cutoff::RadialProfile;
use wholder::field::fd::{central_difference_fn, probe_points};
use wholder::field::{cutoff, Expr, MultiIndex, SpaceParams};
use wholder::geometry::{Disk, DomainGeometry};
use wholder::operators::gauge::gauge_constancy_residual;
use wholder::operators::poisson::boundary_exponent;
use wholder::operators::*;
use wholder::seminorm::growth::loglog_slope;
use wholder::seminorm::{Field, SymbolicField, TermRequest, Window};

fn params(m: u32, n: f64, g: f64) -> SpaceParams {
    SpaceParams::new(m, n, g).unwrap()
}

fn value_at(f: &dyn Field, x: &[f64], t: f64) -> f64 {
    f.term(&TermRequest::value(f.dim()), &DomainGeometry::HalfSpace).unwrap().eval(x, t)
}

fn deriv_at(f: &dyn Field, alpha: MultiIndex, x: &[f64], t: f64) -> f64 {
    f.term(&TermRequest::new(alpha, 0, 0.0), &DomainGeometry::HalfSpace).unwrap().eval(x, t)
}

#[test]
fn mollifier_fixes_constants_and_linear_functions() {
    let c = SymbolicField::new(&Expr::constant(2.5), 3).unwrap();
    let mc = mollify(&c, 0.3, 4).unwrap();
    assert!((mc.value(&[0.1, -0.4, 0.7], 0.0).unwrap() - 2.5).abs() < 1e-10);

    let lin = Expr::coord(0, 1).scaled(3.0) + Expr::t(1) + Expr::xn(2.0);
    let f = SymbolicField::new(&lin, 2).unwrap();
    let mf = mollify(&f, 0.5, 4).unwrap();
    for (x, t) in [(vec![0.2, 0.5], 0.1), (vec![-1.3, 0.05], 2.0)] {
        let exact = 3.0 * x[0] + t + x[1] * x[1];
        assert!((mf.value(&x, t).unwrap() - exact).abs() < 1e-10);
    }
}

#[test]
fn mollified_square_shifts_by_second_moment() {
    let order = 4;
    let s = RadialProfile::new(0.5, 1.0, order);
    let mass = common::adaptive(|z| s.eval(0, z.abs()), -1.0, 1.0, 1e-14);
    let mu2 = common::adaptive(|z| z * z * s.eval(0, z.abs()), -1.0, 1.0, 1e-14) / mass;
    let k = Kernel1d::new(order);
    assert!((k.moment(0) - 1.0).abs() < 1e-13);
    assert!(k.moment(1).abs() < 1e-14);
    assert!((k.moment(2) - mu2).abs() < 1e-12);

    let eps = 0.5;
    let f = SymbolicField::new(&Expr::coord(0, 2), 2).unwrap();
    let mf = mollify(&f, eps, order).unwrap();
    for x1 in [-0.7, 0.0, 0.4, 2.0] {
        let got = mf.value(&[x1, 0.3], 0.0).unwrap();
        assert!((got - (x1 * x1 + eps * eps * mu2)).abs() < 1e-10, "{got}");
    }
}

#[test]
fn mollification_commutes_with_tangential_derivatives() {
    let u = Expr::coord(0, 3) * Expr::xn(1.5) + Expr::coord(0, 2) * Expr::t(2);
    let f = SymbolicField::new(&u, 2).unwrap();
    let mf = mollify(&f, 0.2, 5).unwrap();
    let x = [0.3, 0.6];
    let t = 0.4;
    let direct = deriv_at(&mf, MultiIndex::unit(2, 0), &x, t);
    let fd = central_difference_fn(|q| mf.value(q, t).unwrap(), &MultiIndex::unit(2, 0), &x, 1e-4);
    assert!((direct - fd).abs() < 1e-6, "{direct} vs {fd}");
}

#[test]
fn mollified_weighted_derivatives_vanish_at_the_boundary() {
    // n = 1/2, j = 0: x_N^{1/2} D^α u_ε → 0 for |α| = 2, α_N < 2
    let u = Expr::xn(1.5) * Expr::coord(0, 2);
    let f = SymbolicField::new(&u, 2).unwrap();
    let mf = mollify(&f, 0.25, 4).unwrap();
    for alpha in [MultiIndex::new(vec![2, 0]), MultiIndex::new(vec![1, 1])] {
        let term = mf.term(&TermRequest::new(alpha, 0, 0.5), &DomainGeometry::HalfSpace).unwrap();
        let vals: Vec<f64> = (1..8).map(|k| term.eval(&[0.2, 0.5f64.powi(2 * k)], 0.0).abs()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert!(*vals.last().unwrap() < 1e-3);
    }
}

#[test]
fn mollify_rejects_bad_scale_and_flags_blow_up() {
    let f = SymbolicField::new(&Expr::xn(-0.5), 2).unwrap();
    assert!(mollify(&f, 0.0, 3).is_err());
    let mf = mollify(&f, 0.1, 3).unwrap();
    assert!(matches!(mf.value(&[0.0, 0.0], 0.0), Err(wholder::Error::Quadrature(_))));
}

#[test]
fn iterated_log_examples() {
    assert!((iterated_log(1, 1.0).unwrap() + 1.0).abs() < 1e-15);
    let oracle = common::adaptive(|x| x * x.ln() - x, 0.0, 1.0, 1e-14);
    assert!((iterated_log(2, 1.0).unwrap() - oracle).abs() < 1e-12);
    assert!((oracle + 0.75).abs() < 1e-12);
    assert_eq!(iterated_log(1, 0.0).unwrap(), 0.0);
    assert!(iterated_log(1, 1e-12).unwrap().abs() < 1e-10);
    assert!(iterated_log(0, 0.0).is_err());
    assert!(iterated_log(2, -1.0).is_err());
    assert!((iterated_log(0, 2.0).unwrap() - 2f64.ln()).abs() < 1e-15);
}

#[test]
fn derivative_envelope_examples() {
    let half = params(2, 0.5, 0.5);
    assert_eq!(derivative_envelope(1, 0.3, &half).unwrap(), 1.0);
    assert!((derivative_envelope(0, 0.25, &half).unwrap() - 2.0).abs() < 1e-15);
    let one = params(2, 1.0, 0.25);
    assert!((derivative_envelope(1, (-1f64).exp(), &one).unwrap() - 2.0).abs() < 1e-15);
    assert!(derivative_envelope(3, 0.5, &one).is_err());
}

#[test]
fn domain_distance_examples() {
    let (d, g) = domain_distance(&DomainGeometry::HalfSpace, &[0.7, 0.3]).unwrap();
    assert_eq!(d, 0.3);
    assert_eq!(g, vec![0.0, 1.0]);
    let disk = DomainGeometry::Disk(Disk::new(vec![0.0, 0.0], 1.0).unwrap());
    assert!(domain_distance(&disk, &[1.0, 0.0]).unwrap().0.abs() < 1e-15);
    let (d, _) = domain_distance(&disk, &[0.9, 0.0]).unwrap();
    assert!((d - 0.095).abs() < 1e-12);
    let ratio = d / 0.1;
    assert!((0.5..=2.0).contains(&ratio));
    assert!(domain_distance(&disk, &[1.5, 0.0]).is_err());
    assert!(domain_distance(&DomainGeometry::HalfSpace, &[0.0, -0.1]).is_err());
}

#[test]
fn gauge_tilde_power_profile() {
    let p = params(2, 0.5, 0.5);
    let u = Expr::xn(1.5).scaled(5.0);
    let g = gauge_tilde(&u, &p, 2, &LimitOptions::default()).unwrap();
    // (m−n)(m−n−1) = (3/2)(1/2)
    let product: f64 = (0..2).map(|i| 1.5 - i as f64).product();
    assert!((g.a - 5.0 * product).abs() < 1e-10);
    assert!((g.a - 3.75).abs() < 1e-10);
    let q = g.q_tilde.to_poly(2).unwrap();
    let u_poly = u.to_poly(2).unwrap();
    for x in probe_points(2) {
        assert!((q.eval(&x, 0.0) - u_poly.eval(&x, 0.0)).abs() < 1e-10);
    }
}

#[test]
fn gauge_tilde_zero_and_perturbation() {
    let p = params(2, 0.5, 0.5);
    let opts = LimitOptions::default();
    let z = gauge_tilde(&(Expr::xn(3.0) + Expr::coord(0, 2)), &p, 2, &opts).unwrap();
    assert_eq!(z.a, 0.0);
    assert_eq!(z.q_tilde.to_poly(2).unwrap().eval(&[0.3, 0.4], 0.0), 0.0);

    let pure = gauge_tilde(&Expr::xn(1.5), &p, 2, &opts).unwrap();
    let sum = gauge_tilde(&(Expr::xn(1.5) + Expr::xn(2.0)), &p, 2, &opts).unwrap();
    assert!((pure.a - sum.a).abs() < 1e-8);
    assert!(sum.diagnostics.converged);
}

#[test]
fn gauge_tilde_integer_n_uses_iterated_log() {
    let p = params(2, 1.0, 0.25);
    let g = gauge_tilde(&Expr::log(1).scaled(3.0), &p, 2, &LimitOptions::default()).unwrap();
    assert!((g.a - 3.0).abs() < 1e-10);
    assert_eq!(g.b, 1.0);
    // m = 4, n = 2: x_N² D⁴ L_2 = x_N² · (−1/x_N²)
    let p4 = params(4, 2.0, 0.25);
    let g4 = gauge_tilde(&Expr::log(2), &p4, 2, &LimitOptions::default()).unwrap();
    assert!((g4.a + 1.0).abs() < 1e-10);
    assert_eq!(g4.b, -1.0);
}

#[test]
fn gauge_tilde_reports_missing_limit() {
    let p = params(2, 0.5, 0.5);
    let r = gauge_tilde(&Expr::xn(1.25), &p, 2, &LimitOptions::default());
    assert!(matches!(r, Err(wholder::Error::NoLimit(_))));
}

#[test]
fn gauge_full_is_idempotent_on_gauge_forms() {
    let p = params(2, 0.5, 0.5);
    let opts = LimitOptions::default();
    let u = Expr::xn(1.5).scaled(2.0) + Expr::coord(0, 1) + Expr::xn(1.0).scaled(2.0) + Expr::t(1).scaled(-0.5);
    let q = gauge_full(&u, &p, 2, &opts).unwrap().q.unwrap();
    let q2 = gauge_full(&q, &p, 2, &opts).unwrap().q.unwrap();
    let (a, b) = (q.to_poly(2).unwrap(), q2.to_poly(2).unwrap());
    for x in probe_points(2) {
        assert!((a.eval(&x, 0.7) - b.eval(&x, 0.7)).abs() < 1e-10);
    }
    let up = u.to_poly(2).unwrap();
    for x in probe_points(2) {
        assert!((a.eval(&x, 0.7) - up.eval(&x, 0.7)).abs() < 1e-10);
    }
}

#[test]
fn gauge_full_matches_low_order_derivatives_at_ebar() {
    let p = params(2, 0.5, 0.5);
    let u = Expr::xn(1.5) + Expr::coord(0, 1);
    let g = gauge_full(&u, &p, 2, &LimitOptions::default()).unwrap();
    let slope = g.coefficients.iter().find(|c| c.alpha == MultiIndex::unit(2, 0)).unwrap();
    assert!((slope.value - 1.0).abs() < 1e-12);
    let r = (u - g.q.clone().unwrap()).to_poly(2).unwrap();
    for k in 0..=1 {
        for alpha in MultiIndex::all_of_order(2, k) {
            assert!(r.derivative(&alpha, 0).eval(&[0.0, 1.0], 0.0).abs() < 1e-10);
        }
    }
}

#[test]
fn gauge_full_time_coefficient() {
    let p = params(2, 0.5, 0.5);
    let bump = cutoff(vec![0.0, 0.0], 0.5, 2.0, 3, 2).unwrap();
    let u = Expr::t(1) * bump.clone();
    let g = gauge_full(&u, &p, 2, &LimitOptions::default()).unwrap();
    let direct = bump.to_poly(2).unwrap().eval(&[0.0, 1.0], 0.0);
    assert!((g.a_time.unwrap() - direct).abs() < 1e-14);
}

#[test]
fn poisson_kernel_has_unit_mass() {
    let v = BoundaryFunction::new(BoundaryProfile::Plateau { value: 0.75 }, 1.0, 2.0, 4);
    let ext = poisson_extend(&v, 1, None).unwrap();
    let u = value_at(&ext, &[0.1, 1e-7], 0.0);
    assert!((u / 0.75 - 1.0).abs() < 1e-6, "{u}");
    let ext2 = poisson_extend(&v, 2, None).unwrap();
    let u2 = value_at(&ext2, &[0.1, 0.05, 1e-7], 0.0);
    assert!((u2 / 0.75 - 1.0).abs() < 1e-6, "{u2}");
}

#[test]
fn poisson_extension_of_cosine_decays_exponentially() {
    let xi = PI;
    let v = BoundaryFunction::new(BoundaryProfile::WindowedCosine { frequency: xi }, 10.0, 20.0, 4);
    let ext = poisson_extend(&v, 1, None).unwrap();
    for (w, s) in [(0.3, 0.2), (-1.1, 0.5), (2.0, 0.05), (0.0, 1.0)] {
        let got = value_at(&ext, &[w, s], 0.0);
        let want = (xi * w).cos() * (-xi * s).exp();
        assert!((got - want).abs() < 1e-4 * want.abs(), "{w} {s}: {got} vs {want}");
    }
}

#[test]
fn poisson_values_match_direct_quadrature() {
    let v = BoundaryFunction::new(BoundaryProfile::Gaussian { sigma: 0.4 }, 1.0, 2.0, 4);
    let ext = poisson_extend(&v, 1, None).unwrap();
    let s_cut = RadialProfile::new(1.0, 2.0, 4);
    let data = |y: f64| (-y * y / 0.32).exp() * s_cut.eval(0, y.abs());
    for (w, s) in [(0.2, 0.3), (0.9, 0.02), (-1.5, 1.0)] {
        let oracle = common::adaptive(|y| s / PI / ((w - y) * (w - y) + s * s) * data(y), -2.0, 2.0, 1e-13);
        let got = value_at(&ext, &[w, s], 0.0);
        assert!((got - oracle).abs() < 1e-10, "{got} vs {oracle}");
        let d_oracle = common::adaptive(
            |y| {
                let z = w - y;
                -2.0 * s * z / PI / (z * z + s * s).powi(2) * data(y)
            },
            -2.0,
            2.0,
            1e-13,
        );
        let d = deriv_at(&ext, MultiIndex::unit(2, 0), &[w, s], 0.0);
        assert!((d - d_oracle).abs() < 1e-8, "{d} vs {d_oracle}");
    }
}

#[test]
fn poisson_extension_is_harmonic() {
    let v = BoundaryFunction::new(BoundaryProfile::Gaussian { sigma: 0.5 }, 1.0, 2.0, 4);
    let ext = poisson_extend(&v, 1, None).unwrap();
    let f = |q: &[f64]| value_at(&ext, q, 0.0);
    for x in [[0.1, 0.4], [0.8, 0.2], [-0.5, 1.0]] {
        let h = 1e-3;
        let lap = central_difference_fn(f, &MultiIndex::new(vec![2, 0]), &x, h)
            + central_difference_fn(f, &MultiIndex::new(vec![0, 2]), &x, h);
        assert!(lap.abs() < 1e-4, "{lap}");
    }
    let ext2 = poisson_extend(&v, 2, None).unwrap();
    let f2 = |q: &[f64]| value_at(&ext2, q, 0.0);
    let x = [0.2, -0.1, 0.5];
    let h = 1e-2;
    let lap: f64 = (0..3)
        .map(|i| central_difference_fn(f2, &MultiIndex::axis(3, i, 2), &x, h))
        .sum();
    assert!(lap.abs() < 1e-3, "{lap}");
}

#[test]
fn extension_with_cutoff_keeps_boundary_values() {
    let v = BoundaryFunction::new(BoundaryProfile::Gaussian { sigma: 0.5 }, 1.0, 2.0, 4);
    let ext = poisson_extend(&v, 1, Some((2.0, 4.0, 4))).unwrap();
    assert_eq!(value_at(&ext, &[0.3, 0.0], 0.0), ext.boundary_value(&[0.3]));
    assert_eq!(value_at(&ext, &[0.0, 5.0], 0.0), 0.0);
    assert!(poisson_extend(&v, 1, Some((1.5, 4.0, 4))).is_err());
    assert!(matches!(poisson_extend(&v, 3, None), Err(wholder::Error::UnsupportedDimension(_))));
}

#[test]
fn trace_of_extension_recovers_boundary_data() {
    let v = BoundaryFunction::new(BoundaryProfile::Gaussian { sigma: 0.5 }, 1.0, 2.0, 4);
    let ext = poisson_extend(&v, 1, None).unwrap();
    let p = params(2, 1.0, 0.25);
    let pts: Vec<(Vec<f64>, f64)> = [-0.6, 0.0, 0.3, 1.2].iter().map(|&y| (vec![y], 0.0)).collect();
    let tr = trace_field(&ext, 0, &p, &pts, &LimitOptions::default()).unwrap();
    for s in tr {
        let want = ext.boundary_value(&s.x);
        assert!((s.value - want).abs() < 1e-4 * want.abs(), "{} vs {want}", s.value);
    }
}

#[test]
fn trace_examples_for_expressions() {
    let p = params(2, 0.5, 0.5);
    let g = Expr::coord(0, 2) + Expr::t(1);
    let u = Expr::xn(1.0) * g;
    let pts = vec![(vec![0.5], 0.25), (vec![-1.0], 2.0)];
    let tr = trace_expr(&u, 1, &p, &pts, &LimitOptions::default()).unwrap();
    assert!((tr[0].value - 0.5).abs() < 1e-14);
    assert!((tr[1].value - 3.0).abs() < 1e-14);
    let bump = cutoff(vec![0.0, 0.0], 0.5, 1.0, 3, 2).unwrap();
    let w = Expr::xn(1.5) * bump;
    let tr0 = trace_expr(&w, 0, &p, &pts, &LimitOptions::default()).unwrap();
    assert!(tr0.iter().all(|s| s.value == 0.0));
    assert!(trace_expr(&w, 2, &p, &pts, &LimitOptions::default()).is_err());
}

#[test]
fn extension_derivatives_decay_at_the_boundary_rate() {
    let p = params(2, 1.0, 0.25);
    let l = boundary_exponent(&p);
    let v = BoundaryFunction::new(BoundaryProfile::AbsPower { power: l }, 1.0, 2.0, 4);
    let ext = poisson_extend(&v, 1, None).unwrap();
    let pts: Vec<(f64, f64)> = (4..12)
        .map(|k| {
            let s = 0.5f64.powi(k);
            (s, deriv_at(&ext, MultiIndex::new(vec![0, 2]), &[0.0, s], 0.0).abs())
        })
        .collect();
    let slope = loglog_slope(&pts);
    assert!((slope - (l - 2.0)).abs() < 0.05, "slope {slope}");
    // bounded after weighting by x_N^{m−l}
    let weighted: Vec<f64> = pts.iter().map(|(s, d)| d * s.powf(2.0 - l)).collect();
    let (lo, hi) = weighted.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &w| (a.min(w), b.max(w)));
    assert!(hi / lo < 1.2);
}

#[test]
fn boundary_norm_is_finite_for_smooth_data() {
    let p = params(2, 1.0, 0.25);
    let mut v = BoundaryFunction::new(BoundaryProfile::Gaussian { sigma: 0.5 }, 1.0, 2.0, 4);
    v.time_coeffs = vec![1.0, 0.5];
    let w = Window::unit(2).with_tangent(2.5, 41).with_time(0.0, 1.0, 5);
    let norm = boundary_norm(&v, 1, &p, &w).unwrap();
    assert!(!norm.non_finite);
    assert_eq!(norm.terms.len(), 3);
    assert!((norm.terms[0].estimate.value - 1.5).abs() < 1e-12);
    assert!(norm.total.is_finite() && norm.total > 1.5);
}

#[test]
fn boundary_profiles_validate() {
    let bad = BoundaryFunction::new(BoundaryProfile::Gaussian { sigma: 0.0 }, 1.0, 2.0, 4);
    assert!(poisson_extend(&bad, 1, None).is_err());
    let inverted = BoundaryFunction::new(BoundaryProfile::Zero, 2.0, 1.0, 4);
    assert!(poisson_extend(&inverted, 1, None).is_err());
    let json = serde_json::to_string(&BoundaryProfile::WindowedCosine { frequency: 2.0 }).unwrap();
    assert_eq!(json, r#"{"kind":"windowed-cosine","frequency":2.0}"#);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauge_forms_have_constant_weighted_derivatives(
        c0 in -3.0f64..3.0, c1 in -3.0f64..3.0, c2 in -3.0f64..3.0, c3 in -3.0f64..3.0, c4 in -2.0f64..2.0,
    ) {
        let p = params(2, 0.5, 0.5);
        let u = Expr::xn(1.5).scaled(c0)
            + Expr::coord(0, 2).scaled(c1)
            + (Expr::coord(0, 1) * Expr::xn(1.0)).scaled(c2)
            + Expr::xn(2.5).scaled(c3)
            + Expr::t(1).scaled(c4);
        let g = gauge_full(&u, &p, 2, &LimitOptions::default()).unwrap();
        let r = gauge_constancy_residual(g.q.as_ref().unwrap(), &p, 2).unwrap();
        prop_assert!(r < 1e-10, "residual {}", r);
    }

    #[test]
    fn mollifier_fixes_affine_functions(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0, eps in 0.01f64..2.0) {
        let u = Expr::constant(a) + Expr::coord(0, 1).scaled(b) + Expr::t(1).scaled(c);
        let f = SymbolicField::new(&u, 2).unwrap();
        let mf = mollify(&f, eps, 3).unwrap();
        let x = [0.37, 0.81];
        let got = mf.value(&x, 0.2).unwrap();
        prop_assert!((got - (a + b * 0.37 + c * 0.2)).abs() < 1e-10 * (1.0 + a.abs() + b.abs() + c.abs()));
    }
}

//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use wholder::field::SpaceParams;
use wholder::lab::{default_case, run_check, Assertion, CheckCase, VerificationReport};
use wholder::operators::iterated_log;

type Outcome = Result<String, String>;

fn params(m: u32, n: f64, g: f64) -> SpaceParams {
    SpaceParams::new(m, n, g).unwrap()
}

fn run(id: &str, p: Option<SpaceParams>) -> Result<(VerificationReport, Duration), String> {
    let case = default_case(id, p).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let r = run_check(&case).map_err(|e| e.to_string())?;
    Ok((r, start.elapsed()))
}

fn trail(r: &VerificationReport, member: &str, label: impl Fn(&str) -> bool) -> Vec<Vec<(f64, f64)>> {
    r.members
        .iter()
        .filter(|m| m.name == member)
        .flat_map(|m| m.terms.iter())
        .filter(|t| label(&t.label))
        .map(|t| t.trail.iter().map(|q| (q.scale, q.value)).collect())
        .collect()
}

fn fit(pts: &[(f64, f64)]) -> f64 {
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
    common::loglog_slope(&xs, &ys)
}

fn named<'a>(r: &'a VerificationReport, part: &str) -> Vec<&'a Assertion> {
    r.assertions.iter().filter(|a| a.name.contains(part)).collect()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within_time(d: Duration, limit: u64) -> Result<(), String> {
    ensure(d.as_secs_f64() < limit as f64, format!("runtime {:.1}s over {limit}s", d.as_secs_f64()))
}

fn counterexample() -> Outcome {
    let (r, d) = run("counterexample", Some(params(2, 0.5, 0.5)))?;
    within_time(d, 60)?;
    let member = &r.members[0].name;
    let rhs = trail(&r, member, |l| l.starts_with("rhs"));
    ensure(!rhs.is_empty(), "no right-hand side terms recorded")?;
    let rhs_max = rhs.iter().flatten().map(|p| p.1).fold(0.0, f64::max);
    ensure(rhs_max < 1e-10, format!("right-hand side reaches {rhs_max:e}"))?;
    let mixed = trail(&r, member, |l| l.contains("D(1,1)"));
    let pts = mixed.first().ok_or("no mixed term")?;
    let scales: Vec<f64> = pts.iter().map(|p| p.0).collect();
    ensure(scales == [1.0, 2.0, 4.0, 8.0], format!("scales {scales:?}"))?;
    let s = fit(pts);
    ensure((s - 1.625).abs() <= 0.15, format!("mixed slope {s:.4}"))?;
    Ok(format!("rhs max {rhs_max:e}, mixed slope {s:.4}, {:.2}s", d.as_secs_f64()))
}

fn main_estimate() -> Outcome {
    let mut total = Duration::ZERO;
    let mut worst_slope = f64::NEG_INFINITY;
    let mut worst_change = 0.0f64;
    for p in [params(2, 0.5, 0.5), params(2, 1.0, 0.25), params(4, 1.0, 0.25)] {
        let (r, d) = run("main-estimate", Some(p))?;
        total += d;
        ensure(r.members.len() == 6, format!("{} members", r.members.len()))?;
        for a in named(&r, ": slope") {
            worst_slope = worst_slope.max(a.observed);
            ensure(a.observed < 0.1, format!("{p:?} {} {:?}: slope {}", a.name, a.member, a.observed))?;
        }
        for a in named(&r, "max ratio change") {
            worst_change = worst_change.max(a.observed);
            ensure(a.observed <= 0.2, format!("{p:?} {:?}: ratio change {}", a.member, a.observed))?;
        }
        for a in named(&r, "max ratio finite") {
            ensure(a.observed.is_finite(), format!("{p:?} {:?}: ratio not finite", a.member))?;
        }
        ensure(r.passed(), format!("{p:?}: {:?}", r.failures()))?;
    }
    within_time(total, 600)?;
    Ok(format!("max slope {worst_slope:.3}, max ratio change {worst_change:.3}, {:.1}s", total.as_secs_f64()))
}

fn kdiff() -> Outcome {
    let (r, _) = run("kdiff-equivalence", None)?;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for a in named(&r, "direct/difference").into_iter().chain(named(&r, "difference/direct")) {
        lo = lo.min(a.observed);
        hi = hi.max(a.observed);
    }
    ensure(lo.is_finite(), "no two-sided constants recorded")?;
    ensure(lo >= 1e-2 && hi <= 1e2, format!("constants in [{lo:.3}, {hi:.3}]"))?;
    let change = named(&r, "refinement change").iter().map(|a| a.observed).fold(0.0, f64::max);
    ensure(change < 0.1, format!("refinement change {change:.3}"))?;
    Ok(format!("constants in [{lo:.3}, {hi:.3}], refinement change {change:.4}"))
}

fn gauge() -> Outcome {
    let mut worst = [0.0f64; 2];
    for (p, tol, slot) in [
        (params(2, 0.5, 0.5), 1e-10, 0),
        (params(4, 1.5, 0.25), 1e-10, 0),
        (params(2, 1.0, 0.5), 1e-8, 1),
    ] {
        let (r, _) = run("gauge-exactness", Some(p))?;
        let mut planted = vec![];
        for m in &r.members {
            for pts in trail(&r, &m.name, |l| l == "recovered coefficient") {
                for (c, got) in pts {
                    planted.push(c);
                    let e = (got - c).abs() / c.abs();
                    worst[slot] = worst[slot].max(e);
                    ensure(e < tol, format!("{p:?} c = {c}: relative error {e:e}"))?;
                }
            }
        }
        planted.sort_by(f64::total_cmp);
        ensure(planted == [-3.0, 1.0, 5.0], format!("planted {planted:?}"))?;
        ensure(r.passed(), format!("{p:?}: {:?}", r.failures()))?;
    }
    Ok(format!("power branch error {:e}, log branch error {:e}", worst[0], worst[1]))
}

fn iterated_logs() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..=4 {
        for x in [0.1, 0.5, 1.0, 2.0] {
            let closed = iterated_log(k, x).map_err(|e| e.to_string())?;
            let quad = common::iterated_log_quadrature(k, x);
            let e = (closed - quad).abs() / quad.abs().max(1.0);
            worst = worst.max(e);
            ensure(e <= 1e-10, format!("L{k}({x}): {closed} vs {quad}"))?;
        }
    }
    let (r, _) = run("iterated-log", None)?;
    ensure(r.passed(), format!("{:?}", r.failures()))?;
    Ok(format!("max error {worst:e}"))
}

fn poisson() -> Outcome {
    let (r, d) = run("trace-extension", None)?;
    within_time(d, 300)?;
    let repro = named(&r, "boundary reproduction").iter().map(|a| a.observed).fold(0.0, f64::max);
    ensure(repro < 1e-4, format!("reproduction error {repro:e}"))?;
    let cos = trail(&r, "windowed-cosine", |l| l.starts_with("decay error"));
    let cos_err = cos.iter().flatten().map(|p| p.1).fold(0.0, f64::max);
    let heights: Vec<f64> = cos.iter().flatten().map(|p| p.0).collect();
    ensure(heights == [0.1, 0.2, 0.4], format!("decay heights {heights:?}"))?;
    ensure(cos_err < 1e-3, format!("decay error {cos_err:e}"))?;
    let p = r.params;
    let l = p.m_minus_n() + (1.0 - p.omega()) * p.gamma;
    let decays = trail(&r, "abs-power", |t| t.starts_with("|D"));
    ensure(decays.len() == 2, "abs-power decay trails missing")?;
    let mut slopes = vec![];
    for pts in &decays {
        let s = fit(pts);
        slopes.push(s);
        ensure((s - (l - p.mf())).abs() <= 0.1, format!("decay slope {s:.3}, want {:.3}", l - p.mf()))?;
    }
    ensure(r.passed(), format!("{:?}", r.failures()))?;
    Ok(format!(
        "reproduction {repro:.1e}, cosine decay {cos_err:.1e}, slopes {:.3}/{:.3} vs {:.3}, {:.1}s",
        slopes[0],
        slopes[1],
        l - p.mf(),
        d.as_secs_f64()
    ))
}

fn integer_iff() -> Outcome {
    let (r, _) = run("lower-order", Some(params(2, 1.0, 0.5)))?;
    let split = |m: &str| trail(&r, m, |l| l.contains("D(0,1) u>") && l.contains("eps-")).into_iter().next();
    let vanishing = fit(&split("boundary-vanishing").ok_or("vanishing member trail missing")?);
    let gauge = fit(&split("log-gauge").ok_or("log-gauge trail missing")?);
    ensure(vanishing < 0.1, format!("vanishing member slope {vanishing:.3}"))?;
    ensure(gauge > 0.1, format!("log-gauge slope {gauge:.3}"))?;
    let z = trail(&r, "log-gauge", |l| l.starts_with("zygmund"));
    ensure(!z.is_empty(), "no zygmund trail")?;
    let mut zs = vec![];
    for pts in &z {
        ensure(pts.iter().all(|p| p.1.is_finite()), "zygmund seminorm not finite")?;
        zs.push(fit(pts));
    }
    let zmax = zs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    ensure(zmax < 0.1, format!("zygmund slope {zmax:.3}"))?;
    ensure(r.passed(), format!("{:?}", r.failures()))?;
    Ok(format!("vanishing slope {vanishing:.3}, log-gauge slope {gauge:.3}, zygmund slope {zmax:.3}"))
}

fn interpolation() -> Outcome {
    let (r, _) = run("interpolation", None)?;
    let case = default_case("interpolation", None).map_err(|e| e.to_string())?;
    let eps: Vec<f64> = (-6..=6).map(|k| 2f64.powi(k)).collect();
    ensure(case.sweep == eps, "ε grid is not 2^−6..2^6")?;
    let exps = named(&r, "eps-exponent");
    ensure(!exps.is_empty(), "no exponent fits")?;
    let mut worst = 0.0f64;
    for a in &exps {
        let wholder::lab::Relation::Near { target, tol } = a.relation else {
            return Err(format!("{}: unexpected relation", a.name));
        };
        ensure(tol <= 0.1, "exponent tolerance above 0.1")?;
        worst = worst.max((a.observed - target).abs());
        ensure((a.observed - target).abs() <= 0.1, format!("{} {:?}: {} vs {target}", a.name, a.member, a.observed))?;
    }
    for a in named(&r, "single constant") {
        ensure(a.observed.is_finite(), format!("{} {:?}: no single constant", a.name, a.member))?;
    }
    ensure(r.passed(), format!("{:?}", r.failures()))?;
    Ok(format!("{} exponent fits, max deviation {worst:.2e}, C = {:.3}", exps.len(), r.constant))
}

fn small_time() -> Outcome {
    let (r, _) = run("small-time", None)?;
    let case = default_case("small-time", None).map_err(|e| e.to_string())?;
    ensure(case.sweep == [1.0, 0.5, 0.25, 0.125], "T grid is not {1, 1/2, 1/4, 1/8}")?;
    let mut margin = f64::INFINITY;
    for a in named(&r, "T-slope") {
        let wholder::lab::Relation::AtLeast { bound } = a.relation else {
            return Err(format!("{}: unexpected relation", a.name));
        };
        let label = a.name.trim_end_matches(": T-slope");
        let pts = trail(&r, a.member.as_deref().unwrap_or(""), |l| l == label);
        let s = fit(pts.first().ok_or(format!("{label}: trail missing"))?);
        margin = margin.min(s - bound);
        ensure(s >= bound, format!("{label} {:?}: slope {s:.3} below {bound:.3}", a.member))?;
    }
    ensure(margin.is_finite(), "no T-slopes recorded")?;
    ensure(r.passed(), format!("{:?}", r.failures()))?;
    Ok(format!("smallest margin over the required exponent {margin:.3}"))
}

/// Every check of the shipped default suite config.
fn default_suite() -> Result<Vec<CheckCase>, String> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/default.json");
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let checks = v["checks"].as_array().ok_or("config has no checks")?;
    checks
        .iter()
        .map(|c| {
            let id = c["id"].as_str().ok_or("check without id")?;
            let p = match c.get("params") {
                Some(p) => Some(serde_json::from_value(p.clone()).map_err(|e| e.to_string())?),
                None => None,
            };
            default_case(id, p).map_err(|e| e.to_string())
        })
        .collect()
}

fn suite_json(cases: &[CheckCase], threads: usize) -> Result<Vec<String>, String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
    pool.install(|| {
        use rayon::prelude::*;
        cases
            .par_iter()
            .map(|c| run_check(c).and_then(|r| r.to_json()).map_err(|e| e.to_string()))
            .collect()
    })
}

fn determinism() -> Outcome {
    let cases = default_suite()?;
    let one = suite_json(&cases, 1)?;
    let eight = suite_json(&cases, 8)?;
    let differing: Vec<&str> = cases.iter().zip(one.iter().zip(&eight)).filter(|(_, (a, b))| a != b).map(|(c, _)| c.id.as_str()).collect();
    ensure(differing.is_empty(), format!("reports differ: {differing:?}"))?;
    let bytes: usize = one.iter().map(String::len).sum();
    Ok(format!("{} reports, {bytes} bytes identical under 1 and 8 threads", cases.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("counterexample reproduction", counterexample),
        ("main-estimate boundedness", main_estimate),
        ("k-difference equivalence", kdiff),
        ("gauge exactness", gauge),
        ("iterated-log oracle", iterated_logs),
        ("Poisson extension", poisson),
        ("integer-n iff", integer_iff),
        ("interpolation sweep", interpolation),
        ("small-time decay", small_time),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (status, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {status} {name}: {detail}", i + 1);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

//! Composite norms and the two sides of the main estimate as labeled term lists.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::params::split_int_frac;
use crate::field::{Expr, MultiIndex, SpaceParams};
use crate::seminorm::engine::{seminorm_from_values, sup_from_values};
use crate::seminorm::field::{Field, PointEval, SymbolicField, TermRequest};
use crate::seminorm::grid::SampleGrid;
use crate::seminorm::growth::classify_growth;
use crate::seminorm::spec::{
    Growth, PairKind, Rung, SeminormEstimate, SeminormSpec, TermRequestSpec, Tolerances,
};
use crate::seminorm::window::{Ladder, Window};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TermKind {
    Sup { term: TermRequestSpec },
    Seminorm { spec: SeminormSpec },
}

impl TermKind {
    fn request(&self) -> TermRequest {
        match self {
            TermKind::Sup { term } => term.into(),
            TermKind::Seminorm { spec } => spec.request(),
        }
    }
}

/// One labeled constituent of a norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormTerm {
    pub group: String,
    pub label: String,
    pub kind: TermKind,
}

impl NormTerm {
    pub fn sup(group: &str, req: TermRequest) -> NormTerm {
        NormTerm { group: group.into(), label: format!("sup|{}|", req.label()), kind: TermKind::Sup { term: (&req).into() } }
    }

    pub fn semi(group: &str, spec: SeminormSpec) -> NormTerm {
        NormTerm { group: group.into(), label: spec.label(), kind: TermKind::Seminorm { spec } }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormVariant {
    /// All weighted derivatives except D_{x_N}^{m−n} for integer n.
    Full,
    /// All weighted derivatives.
    Hat,
    /// Sup plus the pure directional seminorms.
    Tilde,
    /// Tilde plus ⟨D_{x_N}^{m−n} u⟩ for integer n.
    HatTilde,
    /// Boundary distance d(x) in place of x_N, top-order derivatives only.
    Domain,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermEstimate {
    pub group: String,
    pub label: String,
    pub kind: TermKind,
    pub estimate: SeminormEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormBreakdown {
    pub terms: Vec<TermEstimate>,
    #[serde(with = "crate::xreal")]
    pub total: f64,
    pub non_finite: bool,
}

impl NormBreakdown {
    pub fn from_terms(terms: Vec<TermEstimate>) -> NormBreakdown {
        let non_finite = terms.iter().any(|t| t.estimate.non_finite);
        let total = terms.iter().map(|t| t.estimate.value).sum();
        NormBreakdown { terms, total, non_finite }
    }
}

fn space(req: TermRequest, exponent: f64, weight: f64) -> SeminormSpec {
    SeminormSpec::new(req, PairKind::Isotropic, exponent, weight)
}

fn time(req: TermRequest, exponent: f64) -> SeminormSpec {
    SeminormSpec::new(req, PairKind::Time, exponent, 0.0)
}

/// |v|^{(γ)}_{ωγ}: sup, weighted spatial seminorm and, for parabolic norms, the time seminorm.
fn holder_norm(out: &mut Vec<NormTerm>, group: &str, req: TermRequest, p: &SpaceParams, weight: f64, parabolic: bool) {
    out.push(NormTerm::sup(group, req.clone()));
    out.push(NormTerm::semi(group, space(req.clone(), p.gamma, weight)));
    if parabolic {
        out.push(NormTerm::semi(group, time(req, p.gamma / p.mf())));
    }
}

fn pure_directional(out: &mut Vec<NormTerm>, p: &SpaceParams, dim: usize, parabolic: bool) {
    for i in 0..dim {
        let req = TermRequest::new(MultiIndex::axis(dim, i, p.m), 0, p.n);
        out.push(NormTerm::semi("pure", SeminormSpec::new(req, PairKind::Directional { axis: i }, p.gamma, p.wg())));
    }
    if parabolic {
        let req = TermRequest::new(MultiIndex::zeros(dim), 1, 0.0);
        out.push(NormTerm::semi("time", time(req, p.gamma / p.mf())));
    }
}

/// Constituent terms of a composite norm.
pub fn norm_terms(p: &SpaceParams, variant: NormVariant, dim: usize, parabolic: bool) -> Vec<NormTerm> {
    let mut out = vec![NormTerm::sup("sup", TermRequest::value(dim))];
    let top_n = p.integer_n().then(|| p.m_minus_n().round() as u32);
    match variant {
        NormVariant::Full | NormVariant::Hat => {
            for k in 1..p.m {
                if (k as f64) >= p.m_minus_n() {
                    break;
                }
                for a in MultiIndex::all_of_order(dim, k) {
                    holder_norm(&mut out, "lower-order", TermRequest::new(a, 0, 0.0), p, 0.0, parabolic);
                }
            }
            for j in 0..=p.floor_n() {
                for a in MultiIndex::all_of_order(dim, p.m - j) {
                    if variant == NormVariant::Full && Some(a.normal()) == top_n {
                        continue;
                    }
                    let group = format!("weighted-j{j}");
                    holder_norm(&mut out, &group, TermRequest::new(a, 0, p.n - j as f64), p, p.wg(), parabolic);
                }
            }
            if parabolic {
                let dt = TermRequest::new(MultiIndex::zeros(dim), 1, 0.0);
                holder_norm(&mut out, "time-derivative", dt, p, p.wg(), true);
            }
        }
        NormVariant::Tilde | NormVariant::HatTilde => {
            if variant == NormVariant::HatTilde {
                if let Some(k) = top_n {
                    let req = TermRequest::new(MultiIndex::axis(dim, dim - 1, k), 0, 0.0);
                    out.push(NormTerm::semi(
                        "normal",
                        SeminormSpec::new(req, PairKind::Directional { axis: dim - 1 }, p.gamma, p.wg()),
                    ));
                }
            }
            pure_directional(&mut out, p, dim, parabolic);
        }
        NormVariant::Domain => {
            for a in MultiIndex::all_of_order(dim, p.m) {
                out.push(NormTerm::semi("top", space(TermRequest::new(a, 0, p.n), p.gamma, p.wg())));
            }
            if parabolic {
                let req = TermRequest::new(MultiIndex::zeros(dim), 1, 0.0);
                out.push(NormTerm::semi("time", time(req, p.gamma / p.mf())));
            }
        }
    }
    out
}

/// Tangential fractional groups: D_{x'}^α D_{x_N}^j u with |α| + j = [s], exponent {s}.
fn tangential_group(out: &mut Vec<NormTerm>, group: &str, p: &SpaceParams, dim: usize, s: f64, weight: f64) {
    let (int, frac) = split_int_frac(s);
    // integer s: second differences of order s with exponent 1 on one derivative less
    let (top, exponent, order) = if frac == 0.0 { (int - 1, 1.0, 2) } else { (int, frac, 1) };
    if top < 0 || dim < 2 {
        return;
    }
    for j in 0..=p.floor_m_minus_n().min(top as u32) {
        for a in MultiIndex::tangential_with_normal(dim, top as u32 - j, j) {
            let spec = SeminormSpec::new(TermRequest::new(a, 0, 0.0), PairKind::Tangential, exponent, weight).with_order(order);
            out.push(NormTerm::semi(group, spec));
        }
    }
}

/// Group names of the left-hand side, in order.
pub const LHS_GROUPS: [&str; 6] = [
    "g1-weighted-derivatives",
    "g2-time-weighted-derivatives",
    "g3-time-derivative",
    "g4-tangential-unweighted",
    "g5-tangential-weighted",
    "g6-time-lower-derivatives",
];

/// Left-hand side terms of the main estimate, grouped; time groups only for parabolic fields.
pub fn theorem1_lhs_terms(p: &SpaceParams, dim: usize, parabolic: bool) -> Vec<NormTerm> {
    let mut out = Vec::new();
    let [g1, g2, g3, g4, g5, g6] = LHS_GROUPS;
    let tg = p.gamma / p.mf();
    for j in 0..=p.floor_n() {
        for a in MultiIndex::all_of_order(dim, p.m - j) {
            let req = TermRequest::new(a, 0, p.n - j as f64);
            out.push(NormTerm::semi(g1, space(req.clone(), p.gamma, p.wg())));
            if parabolic {
                out.push(NormTerm::semi(g1, time(req, tg)));
            }
        }
    }
    if parabolic {
        for j in 0..=p.floor_n() {
            for a in MultiIndex::all_of_order(dim, p.m - j) {
                let req = TermRequest::new(a, 0, p.n - j as f64 * p.omega());
                out.push(NormTerm::semi(g2, time(req, (p.gamma + j as f64) / p.mf())));
            }
        }
        let dt = TermRequest::new(MultiIndex::zeros(dim), 1, 0.0);
        out.push(NormTerm::semi(g3, space(dt.clone(), p.gamma, p.wg())));
        out.push(NormTerm::semi(g3, time(dt, tg)));
    }
    tangential_group(&mut out, g4, p, dim, p.m_minus_n() + (1.0 - p.omega()) * p.gamma, 0.0);
    tangential_group(&mut out, g5, p, dim, p.m_minus_n() + p.gamma, p.wg());
    if parabolic {
        for j in 1..=p.floor_m_minus_n() {
            for a in MultiIndex::all_of_order(dim, j) {
                let e = 1.0 - j as f64 / p.m_minus_n() + tg;
                out.push(NormTerm::semi(g6, time(TermRequest::new(a, 0, 0.0), e)));
            }
        }
    }
    out
}

/// Right-hand side: Σ_i ⟨x_N^n D_{x_i}^m u⟩_{ωγ,x_i} + ⟨D_t u⟩_t^{(γ/m)}.
pub fn theorem1_rhs_terms(p: &SpaceParams, dim: usize, parabolic: bool) -> Vec<NormTerm> {
    let mut out = Vec::new();
    pure_directional(&mut out, p, dim, parabolic);
    out
}

/// Left-hand side on a general domain: weighted and time groups plus lower-order norms.
pub fn domain_lhs_terms(p: &SpaceParams, dim: usize, parabolic: bool) -> Vec<NormTerm> {
    let mut out: Vec<NormTerm> = theorem1_lhs_terms(p, dim, parabolic)
        .into_iter()
        .filter(|t| t.group == LHS_GROUPS[0] || t.group == LHS_GROUPS[1] || t.group == LHS_GROUPS[5])
        .collect();
    for k in 0..p.m {
        if (k as f64) >= p.m_minus_n() {
            break;
        }
        for a in MultiIndex::all_of_order(dim, k) {
            holder_norm(&mut out, "lower-order", TermRequest::new(a, 0, 0.0), p, p.wg(), false);
        }
    }
    out
}

/// Evaluates all terms on one grid, sharing grid values between terms with the same request.
pub fn evaluate_terms(field: &dyn Field, terms: &[NormTerm], grid: &SampleGrid) -> Result<Vec<SeminormEstimate>> {
    let mut cache: BTreeMap<String, (Box<dyn PointEval + '_>, Vec<f64>)> = BTreeMap::new();
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let req = t.kind.request();
        let key = format!("{:?}|{}|{}", req.alpha.0, req.time_order, req.pre_weight.to_bits());
        if !cache.contains_key(&key) {
            let eval = field.term(&req, &grid.geometry)?;
            let vals = grid.values(eval.as_ref());
            cache.insert(key.clone(), (eval, vals));
        }
        let (eval, vals) = &cache[&key];
        let est = match &t.kind {
            TermKind::Sup { .. } => sup_from_values(grid, vals),
            TermKind::Seminorm { spec } => {
                spec.validate()?;
                seminorm_from_values(grid, vals, eval.as_ref(), spec)?
            }
        };
        out.push(est);
    }
    Ok(out)
}

/// Evaluates all terms on every rung; each estimate carries its trail and classification.
pub fn evaluate_terms_ladder(
    field: &dyn Field,
    terms: &[NormTerm],
    ladder: &Ladder,
    tol: &Tolerances,
) -> Result<Vec<TermEstimate>> {
    let rungs = ladder.windows()?;
    let mut per_rung = Vec::with_capacity(rungs.len());
    for rw in &rungs {
        let grid = SampleGrid::new(&rw.window)?;
        per_rung.push(evaluate_terms(field, terms, &grid)?);
    }
    let mut out = Vec::with_capacity(terms.len());
    for (k, t) in terms.iter().enumerate() {
        let trail: Vec<Rung> = rungs
            .iter()
            .zip(&per_rung)
            .map(|(rw, ests)| Rung { scale: rw.scale, level: rw.level, value: ests[k].value })
            .collect();
        let class = classify_growth(&trail.iter().map(|r| (r.scale, r.value)).collect::<Vec<_>>(), tol)?;
        let mut est = per_rung.last().map(|e| e[k].clone()).unwrap_or_else(SeminormEstimate::zero);
        est.trail = trail;
        est.classification = Some(class);
        out.push(TermEstimate { group: t.group.clone(), label: t.label.clone(), kind: t.kind.clone(), estimate: est });
    }
    Ok(out)
}

/// Sum of the member terms of a group along the ladder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupEstimate {
    pub group: String,
    pub trail: Vec<Rung>,
    pub classification: Growth,
    pub terms: Vec<TermEstimate>,
}

pub fn group_terms(terms: Vec<TermEstimate>, tol: &Tolerances) -> Result<Vec<GroupEstimate>> {
    let mut order: Vec<String> = Vec::new();
    let mut by: BTreeMap<String, Vec<TermEstimate>> = BTreeMap::new();
    for t in terms {
        if !by.contains_key(&t.group) {
            order.push(t.group.clone());
        }
        by.entry(t.group.clone()).or_default().push(t);
    }
    let mut out = Vec::new();
    for g in order {
        let members = by.remove(&g).unwrap_or_default();
        let trail = sum_trails(&members)?;
        let class = classify_growth(&trail.iter().map(|r| (r.scale, r.value)).collect::<Vec<_>>(), tol)?;
        out.push(GroupEstimate { group: g, trail, classification: class, terms: members });
    }
    Ok(out)
}

pub fn sum_trails(terms: &[TermEstimate]) -> Result<Vec<Rung>> {
    let first = terms.first().ok_or_else(|| Error::InvalidSpec("empty term group".into()))?;
    let mut trail = first.estimate.trail.clone();
    for t in &terms[1..] {
        for (a, b) in trail.iter_mut().zip(&t.estimate.trail) {
            a.value += b.value;
        }
    }
    Ok(trail)
}

/// Composite norm of an Expression on one window.
pub fn composite_norm(u: &Expr, p: &SpaceParams, variant: NormVariant, window: &Window) -> Result<NormBreakdown> {
    let grid = SampleGrid::new(window)?;
    let field = SymbolicField::new(u, grid.dim)?;
    composite_norm_field(&field, p, variant, &grid)
}

pub fn composite_norm_field(field: &dyn Field, p: &SpaceParams, variant: NormVariant, grid: &SampleGrid) -> Result<NormBreakdown> {
    let parabolic = !field.is_time_independent() && grid.times.len() > 1;
    evaluate_norm(field, norm_terms(p, variant, grid.dim, parabolic), grid)
}

/// Evaluates a list of terms on one grid and sums them.
pub fn evaluate_norm(field: &dyn Field, terms: Vec<NormTerm>, grid: &SampleGrid) -> Result<NormBreakdown> {
    let ests = evaluate_terms(field, &terms, grid)?;
    Ok(NormBreakdown::from_terms(
        terms
            .into_iter()
            .zip(ests)
            .map(|(t, e)| TermEstimate { group: t.group, label: t.label, kind: t.kind, estimate: e })
            .collect(),
    ))
}

/// Left-hand side groups of the main estimate along a ladder.
pub fn theorem1_lhs(u: &Expr, p: &SpaceParams, ladder: &Ladder, tol: &Tolerances) -> Result<Vec<GroupEstimate>> {
    let field = SymbolicField::new(u, ladder.base.dim())?;
    let parabolic = !field.is_time_independent();
    let terms = theorem1_lhs_terms(p, field.dim(), parabolic);
    group_terms(evaluate_terms_ladder(&field, &terms, ladder, tol)?, tol)
}

/// Right-hand side of the main estimate on one window.
pub fn theorem1_rhs(u: &Expr, p: &SpaceParams, window: &Window) -> Result<NormBreakdown> {
    let grid = SampleGrid::new(window)?;
    let field = SymbolicField::new(u, grid.dim)?;
    evaluate_norm(&field, theorem1_rhs_terms(p, grid.dim, !field.is_time_independent()), &grid)
}

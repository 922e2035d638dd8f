use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::MultiIndex;
use crate::seminorm::field::{fmt_real, TermRequest};

/// Which pairs enter the supremum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PairKind {
    /// All pairs of the spatial cloud at equal time.
    Isotropic,
    /// Pairs differing only along one spatial axis.
    Directional { axis: usize },
    /// Pairs at the same boundary level differing in tangential variables.
    Tangential,
    /// Same spatial point, different times.
    Time,
}

/// Which endpoint's boundary distance weights a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightConvention {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EpsRestriction {
    None,
    /// |h| ≤ ε·(lower endpoint's boundary distance).
    Below { eps: f64 },
    /// |h| ≥ ε·(lower endpoint's boundary distance).
    Above { eps: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormSpec {
    pub pairs: PairKind,
    pub exponent: f64,
    pub weight_power: f64,
    pub convention: WeightConvention,
    pub term: TermRequestSpec,
    pub order: u32,
    pub eps: EpsRestriction,
}

/// Serializable form of a term request.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRequestSpec {
    pub alpha: MultiIndex,
    #[serde(default)]
    pub time_order: u32,
    #[serde(default)]
    pub pre_weight: f64,
}

impl From<&TermRequestSpec> for TermRequest {
    fn from(s: &TermRequestSpec) -> TermRequest {
        TermRequest::new(s.alpha.clone(), s.time_order, s.pre_weight)
    }
}

impl From<&TermRequest> for TermRequestSpec {
    fn from(s: &TermRequest) -> TermRequestSpec {
        TermRequestSpec { alpha: s.alpha.clone(), time_order: s.time_order, pre_weight: s.pre_weight }
    }
}

impl SeminormSpec {
    /// First-difference seminorm of `term` over `pairs`, exponent `exponent`, weight power `wp`.
    pub fn new(term: TermRequest, pairs: PairKind, exponent: f64, weight_power: f64) -> SeminormSpec {
        SeminormSpec {
            pairs,
            exponent,
            weight_power,
            convention: WeightConvention::Max,
            term: (&term).into(),
            order: 1,
            eps: EpsRestriction::None,
        }
    }

    pub fn with_convention(mut self, c: WeightConvention) -> Self {
        self.convention = c;
        self
    }

    pub fn with_order(mut self, k: u32) -> Self {
        self.order = k;
        self
    }

    pub fn with_eps(mut self, e: EpsRestriction) -> Self {
        self.eps = e;
        self
    }

    pub fn request(&self) -> TermRequest {
        (&self.term).into()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.weight_power >= 0.0) {
            return Err(Error::InvalidSpec("weight power must be nonnegative".into()));
        }
        if self.order == 0 {
            return Err(Error::InvalidSpec("difference order must be at least 1".into()));
        }
        if self.order == 1 && !(self.exponent > 0.0 && self.exponent <= 1.0) {
            return Err(Error::InvalidSpec(format!(
                "first-difference exponent must lie in (0,1], got {}",
                self.exponent
            )));
        }
        if self.order > 1 && !(self.exponent > 0.0 && self.exponent <= self.order as f64) {
            return Err(Error::InvalidSpec(format!(
                "k-th difference exponent must lie in (0,k], got {} for k = {}",
                self.exponent, self.order
            )));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        let kind = match self.pairs {
            PairKind::Isotropic => "x".to_string(),
            PairKind::Directional { axis } => format!("x{}", axis + 1),
            PairKind::Tangential => "x'".to_string(),
            PairKind::Time => "t".to_string(),
        };
        let mut s = format!("<{}>_{}^({})", self.request().label(), kind, fmt_real(self.exponent));
        if self.weight_power > 0.0 {
            let conv = match self.convention {
                WeightConvention::Max => "",
                WeightConvention::Min => "min,",
            };
            s.push_str(&format!(" w[{}{}]", conv, fmt_real(self.weight_power)));
        }
        if self.order > 1 {
            s.push_str(&format!(" k={}", self.order));
        }
        match self.eps {
            EpsRestriction::None => {}
            EpsRestriction::Below { eps } => s.push_str(&format!(" eps-({})", fmt_real(eps))),
            EpsRestriction::Above { eps } => s.push_str(&format!(" eps+({})", fmt_real(eps))),
        }
        s
    }
}

/// Pair (or stencil) attaining the supremum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Vec<f64>,
    pub t: f64,
    pub x_bar: Vec<f64>,
    pub t_bar: f64,
    pub step: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rung {
    #[serde(with = "crate::xreal")]
    pub scale: f64,
    pub level: u32,
    #[serde(with = "crate::xreal")]
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Growth {
    Zero,
    Bounded {
        #[serde(with = "crate::xreal")]
        slope: f64,
    },
    Diverging {
        #[serde(with = "crate::xreal")]
        slope: f64,
    },
}

impl Growth {
    pub fn is_finite(&self) -> bool {
        !matches!(self, Growth::Diverging { .. })
    }

    pub fn slope(&self) -> Option<f64> {
        match self {
            Growth::Zero => None,
            Growth::Bounded { slope } | Growth::Diverging { slope } => Some(*slope),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Growth::Zero => "zero",
            Growth::Bounded { .. } => "bounded",
            Growth::Diverging { .. } => "diverging",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormEstimate {
    #[serde(with = "crate::xreal")]
    pub value: f64,
    pub non_finite: bool,
    pub witness: Option<Witness>,
    pub pairs: u64,
    pub subsampled: bool,
    #[serde(default)]
    pub trail: Vec<Rung>,
    #[serde(default)]
    pub classification: Option<Growth>,
}

impl SeminormEstimate {
    pub fn zero() -> Self {
        SeminormEstimate {
            value: 0.0,
            non_finite: false,
            witness: None,
            pairs: 0,
            subsampled: false,
            trail: vec![],
            classification: None,
        }
    }
}

/// Numerical thresholds for classification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    #[serde(default = "default_atol")]
    pub atol: f64,
    #[serde(default = "default_slope")]
    pub slope_threshold: f64,
}

fn default_atol() -> f64 {
    1e-10
}
fn default_slope() -> f64 {
    0.1
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { atol: default_atol(), slope_threshold: default_slope() }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.atol > 0.0 && self.slope_threshold > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        Ok(())
    }
}

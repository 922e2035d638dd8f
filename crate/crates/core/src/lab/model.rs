use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Expr, SpaceParams};
use crate::operators::BoundaryFunction;
use crate::seminorm::{Growth, Ladder, Rung, Tolerances};

pub const SCHEMA_VERSION: u32 = 1;

/// The rule a check applies to its recorded numbers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Expectation {
    RatioBounded,
    LhsDivergesRhsZero,
    IffSplit,
    SlopeAtLeast { delta: f64 },
    TwoSided,
    /// Identities checked to a fixed relative tolerance.
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MemberSource {
    Expression { expr: Expr },
    Boundary { boundary: BoundaryFunction },
}

/// One test function of a family, with a note on where it comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub name: String,
    #[serde(default)]
    pub note: String,
    /// Spatial dimension if different from the case's.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub source: MemberSource,
}

impl Member {
    pub fn expr(name: &str, note: &str, expr: Expr) -> Member {
        Member { name: name.into(), note: note.into(), dim: None, source: MemberSource::Expression { expr } }
    }

    pub fn boundary(name: &str, note: &str, boundary: BoundaryFunction) -> Member {
        Member { name: name.into(), note: note.into(), dim: None, source: MemberSource::Boundary { boundary } }
    }

    pub fn in_dim(mut self, dim: usize) -> Member {
        self.dim = Some(dim);
        self
    }

    pub fn expression(&self) -> Result<&Expr> {
        match &self.source {
            MemberSource::Expression { expr } => Ok(expr),
            MemberSource::Boundary { .. } => {
                Err(Error::MalformedCase(format!("member {} must be an expression", self.name)))
            }
        }
    }

    pub fn boundary_function(&self) -> Result<&BoundaryFunction> {
        match &self.source {
            MemberSource::Boundary { boundary } => Ok(boundary),
            MemberSource::Expression { .. } => {
                Err(Error::MalformedCase(format!("member {} must be boundary data", self.name)))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckCase {
    pub id: String,
    pub params: SpaceParams,
    #[serde(default = "two")]
    pub dim: usize,
    pub family: Vec<Member>,
    pub ladder: Ladder,
    pub lhs: String,
    pub rhs: String,
    pub expectation: Expectation,
    /// ε, T or k values, depending on the check.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<f64>,
    /// Secondary sweep (the h grid of the sup-norm bound).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux_sweep: Vec<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn two() -> usize {
    2
}

impl CheckCase {
    pub fn validate(&self) -> Result<()> {
        if self.family.is_empty() {
            return Err(Error::MalformedCase(format!("case {}: empty family", self.id)));
        }
        if self.ladder.rungs.len() < 3 {
            return Err(Error::TooFewRungs(self.ladder.rungs.len()));
        }
        if !(1..=3).contains(&self.dim) {
            return Err(Error::MalformedCase(format!("case {}: dimension {} not in 1..=3", self.id, self.dim)));
        }
        self.tolerances.validate()?;
        SpaceParams::new(self.params.m, self.params.n, self.params.gamma)?;
        Ok(())
    }
}

/// How an observed number is judged.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Relation {
    AtMost {
        #[serde(with = "crate::xreal")]
        bound: f64,
    },
    Below {
        #[serde(with = "crate::xreal")]
        bound: f64,
    },
    AtLeast {
        #[serde(with = "crate::xreal")]
        bound: f64,
    },
    Above {
        #[serde(with = "crate::xreal")]
        bound: f64,
    },
    Within {
        #[serde(with = "crate::xreal")]
        lo: f64,
        #[serde(with = "crate::xreal")]
        hi: f64,
    },
    Near {
        #[serde(with = "crate::xreal")]
        target: f64,
        #[serde(with = "crate::xreal")]
        tol: f64,
    },
}

impl Relation {
    /// NaN observations never pass.
    pub fn holds(&self, x: f64) -> bool {
        if x.is_nan() {
            return false;
        }
        match *self {
            Relation::AtMost { bound } => x <= bound,
            Relation::Below { bound } => x < bound,
            Relation::AtLeast { bound } => x >= bound,
            Relation::Above { bound } => x > bound,
            Relation::Within { lo, hi } => lo <= x && x <= hi,
            Relation::Near { target, tol } => (x - target).abs() <= tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub member: Option<String>,
    #[serde(with = "crate::xreal")]
    pub observed: f64,
    pub relation: Relation,
    pub passed: bool,
}

/// A recorded sequence of values, either along a ladder or along a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub label: String,
    pub trail: Vec<Rung>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<Growth>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberReport {
    pub name: String,
    #[serde(default)]
    pub note: String,
    pub terms: Vec<TermRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub caveats: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub case_id: String,
    pub params: SpaceParams,
    pub expectation: Expectation,
    pub lhs: String,
    pub rhs: String,
    pub members: Vec<MemberReport>,
    /// Largest measured ratio over the family.
    #[serde(with = "crate::xreal")]
    pub constant: f64,
    pub assertions: Vec<Assertion>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

impl VerificationReport {
    /// Verdict implied by the recorded observations alone.
    pub fn recomputed_verdict(&self) -> Verdict {
        if self.assertions.iter().all(|a| a.relation.holds(a.observed)) {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Re-judges every assertion and the verdict from the recorded numbers.
    pub fn rejudge(&mut self) {
        for a in self.assertions.iter_mut() {
            a.passed = a.relation.holds(a.observed);
        }
        self.verdict = self.recomputed_verdict();
    }

    pub fn is_consistent(&self) -> bool {
        self.schema_version == SCHEMA_VERSION
            && self.assertions.iter().all(|a| a.passed == a.relation.holds(a.observed))
            && self.verdict == self.recomputed_verdict()
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failures(&self) -> Vec<&Assertion> {
        self.assertions.iter().filter(|a| !a.passed).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::MalformedReport(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<VerificationReport> {
        let r: VerificationReport = serde_json::from_str(s).map_err(|e| Error::MalformedReport(e.to_string()))?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::MalformedReport(format!("unsupported schema version {}", r.schema_version)));
        }
        Ok(r)
    }
}

/// Accumulates members, assertions and notes while a check runs.
pub struct Recorder {
    pub members: Vec<MemberReport>,
    pub assertions: Vec<Assertion>,
    pub notes: Vec<String>,
    pub constant: f64,
}

impl Recorder {
    pub fn new() -> Recorder {
        Recorder { members: vec![], assertions: vec![], notes: vec![], constant: 0.0 }
    }

    pub fn member(&mut self, m: &Member) -> usize {
        self.members.push(MemberReport { name: m.name.clone(), note: m.note.clone(), terms: vec![], caveats: vec![] });
        self.members.len() - 1
    }

    pub fn term(&mut self, member: usize, label: impl Into<String>, trail: Vec<Rung>, classification: Option<Growth>) {
        self.members[member].terms.push(TermRecord { label: label.into(), trail, classification });
    }

    /// A sweep recorded as a trail with the swept value as scale.
    pub fn sweep(&mut self, member: usize, label: impl Into<String>, points: &[(f64, f64)]) {
        let trail = points
            .iter()
            .enumerate()
            .map(|(i, &(s, v))| Rung { scale: s, level: i as u32, value: v })
            .collect();
        self.term(member, label, trail, None);
    }

    pub fn caveat(&mut self, member: usize, text: impl Into<String>) {
        self.members[member].caveats.push(text.into());
    }

    pub fn check(&mut self, name: impl Into<String>, member: Option<&str>, observed: f64, relation: Relation) {
        let passed = relation.holds(observed);
        self.assertions.push(Assertion { name: name.into(), member: member.map(String::from), observed, relation, passed });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn constant(&mut self, c: f64) {
        if c > self.constant || c.is_nan() {
            self.constant = c;
        }
    }

    pub fn finish(self, case: &CheckCase) -> VerificationReport {
        let mut r = VerificationReport {
            schema_version: SCHEMA_VERSION,
            case_id: case.id.clone(),
            params: case.params,
            expectation: case.expectation,
            lhs: case.lhs.clone(),
            rhs: case.rhs.clone(),
            members: self.members,
            constant: self.constant,
            assertions: self.assertions,
            notes: self.notes,
            verdict: Verdict::Pass,
        };
        r.rejudge();
        r
    }
}

impl Default for Recorder {
    fn default() -> Self {
        Recorder::new()
    }
}

//! Suite configuration: which checks to run, overrides, tolerances and output location.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use wholder::field::SpaceParams;
use wholder::lab::{default_case, list_cases, CheckCase};
use wholder::seminorm::{Tolerances, Window};
use wholder::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteEntry {
    pub id: String,
    /// File stem for this entry's outputs; defaults to `<index>-<id>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<SpaceParams>,
}

/// Overrides applied to the base window of every ladder. Unset fields keep the check's own.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowDefaults {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangent_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_cap: Option<usize>,
}

impl WindowDefaults {
    fn apply(&self, w: &mut Window) {
        if let Some(r) = self.grading_ratio {
            w.grading_ratio = r;
        }
        if let Some(l) = self.levels {
            w.levels = l;
        }
        if let Some(p) = self.tangent_points {
            w.tangent_points = p;
        }
        if let Some(c) = self.point_cap {
            w.point_cap = c;
        }
        if let Some(c) = self.pair_cap {
            w.pair_cap = c;
        }
    }
}

fn default_out() -> PathBuf {
    PathBuf::from("reports")
}

fn default_threads() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub checks: Vec<SuiteEntry>,
    #[serde(default)]
    pub window: WindowDefaults,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
    #[serde(default = "default_threads")]
    pub threads: usize,
}

impl SuiteConfig {
    pub fn from_json(s: &str) -> Result<SuiteConfig> {
        let c: SuiteConfig = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<SuiteConfig> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        SuiteConfig::from_json(&s)
    }

    pub fn validate(&self) -> Result<()> {
        let known: HashSet<String> = list_cases().into_iter().map(|c| c.id).collect();
        let mut stems = HashSet::new();
        for (i, e) in self.checks.iter().enumerate() {
            if !known.contains(&e.id) {
                return Err(Error::Config(format!("unknown check id {:?}", e.id)));
            }
            let stem = self.stem(i);
            if stem.is_empty() || stem.contains(['/', '\\']) || !stems.insert(stem.clone()) {
                return Err(Error::Config(format!("bad or duplicate output name {stem:?}")));
            }
        }
        let t = &self.tolerances;
        if !(t.atol > 0.0 && t.atol.is_finite()) || !(t.slope_threshold > 0.0 && t.slope_threshold.is_finite()) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.threads == 0 {
            return Err(Error::Config("thread budget must be at least 1".into()));
        }
        if let Some(r) = self.window.grading_ratio {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::Config("grading ratio must lie in (0, 1)".into()));
            }
        }
        Ok(())
    }

    /// Output file stem of entry `i`.
    pub fn stem(&self, i: usize) -> String {
        let e = &self.checks[i];
        e.name.clone().unwrap_or_else(|| format!("{i:02}-{}", e.id))
    }

    /// The case for entry `i` with overrides applied.
    pub fn case(&self, i: usize) -> Result<CheckCase> {
        let e = &self.checks[i];
        let mut case = default_case(&e.id, e.params)?;
        case.tolerances = self.tolerances;
        self.window.apply(&mut case.ladder.base);
        Ok(case)
    }
}

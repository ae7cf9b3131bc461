//! Scenario documents: which fields to use, on which grid, and which checks to run.

use std::collections::BTreeMap;
use std::fmt;

use metriforms::surface::spec::Field;
use metriforms::surface::{random_smooth, FieldKind, FieldSpec, PeriodicGrid, RandomFieldOptions};
use serde::{Deserialize, Serialize};

use crate::checks::CheckName;

pub const DEFAULT_GRID: usize = 64;
pub const DEFAULT_SEED: u64 = 42;
pub const MIN_GRID: usize = 16;

/// Input document. Absent fields are drawn from `seed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<FieldSpec>,
    /// Third tangent direction, used by the closedness check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<FieldSpec>,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    pub x: Option<FieldSpec>,
    #[serde(default)]
    pub t: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "CheckName::all")]
    pub checks: Vec<CheckName>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<CheckName, f64>,
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            metric: None,
            h: None,
            k: None,
            l: None,
            x: None,
            t: 0.0,
            grid: DEFAULT_GRID,
            seed: DEFAULT_SEED,
            checks: CheckName::all(),
            tolerances: BTreeMap::new(),
        }
    }
}

/// Rejected scenario input, with the JSON path of the offending value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ScenarioError {}

fn invalid(path: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError {
        path: path.to_string(),
        message: message.into(),
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let scenario: Scenario = serde_path_to_error::deserialize(de)
        .map_err(|e| invalid(&e.path().to_string(), e.inner().to_string()))?;
    scenario.validate()?;
    Ok(scenario)
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.grid % 2 != 0 {
            return Err(invalid("grid", "grid size must be even"));
        }
        if self.grid < MIN_GRID {
            return Err(invalid(
                "grid",
                format!("grid size must be at least {MIN_GRID}"),
            ));
        }
        if !self.t.is_finite() {
            return Err(invalid("t", "must be finite"));
        }
        for (name, tol) in &self.tolerances {
            if !(*tol > 0.0 && tol.is_finite()) {
                return Err(invalid(
                    &format!("tolerances.{}", name.as_str()),
                    "tolerance must be positive",
                ));
            }
        }
        let slots: [(&str, &Option<FieldSpec>, &[&str]); 5] = [
            ("metric", &self.metric, &["conformal_metric", "metric"]),
            ("h", &self.h, &["sym2", "conformal_metric", "metric"]),
            ("k", &self.k, &["sym2", "conformal_metric", "metric"]),
            ("l", &self.l, &["sym2", "conformal_metric", "metric"]),
            ("X", &self.x, &["vector"]),
        ];
        for (path, spec, kinds) in slots {
            let Some(spec) = spec else { continue };
            let kind = kind_name(spec);
            if !kinds.contains(&kind) {
                return Err(invalid(
                    path,
                    format!("field of kind `{kind}` not allowed here"),
                ));
            }
            let field = spec.compile().map_err(|e| invalid(path, e.to_string()))?;
            if field.dim() != 2 {
                return Err(invalid(
                    path,
                    format!(
                        "fields must live on a 2-torus (got dimension {})",
                        field.dim()
                    ),
                ));
            }
        }
        Ok(())
    }

    /// `serialize(parse(text))`.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn tolerance(&self, check: CheckName) -> f64 {
        self.tolerances
            .get(&check)
            .copied()
            .unwrap_or_else(|| check.default_tolerance())
    }

    /// Compiles the given fields and draws the missing ones.
    pub fn prepare(&self) -> Result<Prepared, ScenarioError> {
        self.validate()?;
        let grid = PeriodicGrid::new(2, self.grid).map_err(|e| invalid("grid", e.to_string()))?;
        let pick = |path: &str, spec: &Option<FieldSpec>, offset: u64, kind: FieldKind| {
            let spec = match spec {
                Some(s) => s.clone(),
                None => default_field(self.seed.wrapping_add(offset), kind),
            };
            spec.compile().map_err(|e| invalid(path, e.to_string()))
        };
        Ok(Prepared {
            grid,
            g: pick("metric", &self.metric, 0, FieldKind::ConformalMetric)?,
            h: pick("h", &self.h, 1, FieldKind::Sym2)?,
            k: pick("k", &self.k, 2, FieldKind::Sym2)?,
            l: pick("l", &self.l, 3, FieldKind::Sym2)?,
            x: pick("X", &self.x, 4, FieldKind::Vector)?,
            t: self.t,
            seed: self.seed,
        })
    }
}

fn kind_name(spec: &FieldSpec) -> &'static str {
    match spec {
        FieldSpec::ConformalMetric { .. } => "conformal_metric",
        FieldSpec::Metric { .. } => "metric",
        FieldSpec::Sym2 { .. } => "sym2",
        FieldSpec::Vector { .. } => "vector",
    }
}

/// Seeded band-limited field on the 2-torus, as used for absent scenario entries.
pub fn default_field(seed: u64, kind: FieldKind) -> FieldSpec {
    let amplitude = match kind {
        FieldKind::ConformalMetric => 0.4,
        FieldKind::Metric => 0.1,
        FieldKind::Sym2 | FieldKind::Vector => 0.5,
    };
    let opts = RandomFieldOptions {
        dim: 2,
        max_mode: 3,
        amplitude,
        mode_count: Some(6),
    };
    random_smooth(seed, kind, 2.0, &opts).expect("decay above one")
}

/// Scenario with every field compiled.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub grid: PeriodicGrid,
    pub g: Field,
    pub h: Field,
    pub k: Field,
    pub l: Field,
    pub x: Field,
    pub t: f64,
    pub seed: u64,
}

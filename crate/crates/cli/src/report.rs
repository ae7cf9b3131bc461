//! Suite reports and their JSON/CSV renderings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::checks::CheckName;

/// Bumped whenever a default tolerance changes.
pub const TOLERANCE_TABLE_VERSION: u32 = 1;

pub const CSV_HEADER: &str = "name,residual,tolerance,pass,wall_ms";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub name: CheckName,
    /// `None` when the check failed with an error.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub wall_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Record {
    pub fn new(
        name: CheckName,
        outcome: Result<f64, String>,
        tolerance: f64,
        wall_ms: f64,
    ) -> Self {
        let (residual, error) = match outcome {
            Ok(r) if r.is_finite() => (Some(r), None),
            Ok(r) => (None, Some(format!("non-finite residual {r}"))),
            Err(e) => (None, Some(e)),
        };
        let pass = residual.is_some_and(|r| r < tolerance);
        Self {
            name,
            residual,
            tolerance,
            pass,
            wall_ms,
            error,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceTable {
    pub version: u32,
    pub entries: BTreeMap<CheckName, f64>,
}

impl ToleranceTable {
    pub fn defaults() -> Self {
        let entries = CheckName::ALL
            .iter()
            .map(|c| (*c, c.default_tolerance()))
            .collect();
        Self {
            version: TOLERANCE_TABLE_VERSION,
            entries,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub records: Vec<Record>,
    pub pass: bool,
    pub tool: String,
    pub version: String,
    /// SHA-256 of the canonical scenario JSON.
    pub input_digest: String,
    pub grid: usize,
    pub seed: u64,
    pub tolerances: ToleranceTable,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    /// Recomputes the summary flag from the records.
    pub fn summarize(&mut self) {
        self.pass = self.records.iter().all(|r| r.pass);
    }

    /// Records whose flag disagrees with `residual < tolerance`.
    pub fn inconsistent_records(&self) -> Vec<CheckName> {
        self.records
            .iter()
            .filter(|r| r.pass != r.residual.is_some_and(|v| v < r.tolerance))
            .map(|r| r.name)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownFormat(pub String);

impl fmt::Display for UnknownFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown report format `{}` (expected json or csv)",
            self.0
        )
    }
}

impl std::error::Error for UnknownFormat {}

impl FromStr for Format {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(UnknownFormat(other.to_string())),
        }
    }
}

pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(r).expect("report serializes");
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for rec in &r.records {
                let residual = rec.residual.map(|v| format!("{v:e}")).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{:e},{},{:.3}\n",
                    rec.name.as_str(),
                    residual,
                    rec.tolerance,
                    rec.pass,
                    rec.wall_ms
                ));
            }
            out
        }
    }
}

pub fn parse_report(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}

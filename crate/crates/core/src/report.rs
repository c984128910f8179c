//! Persisted experiment reports.
//!
//! A report is a pure function of its parameters and seed: floats are
//! rounded to 12 significant digits and no timestamp is written unless one
//! is supplied explicitly.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::seed::Seed;

/// Environment variable naming the default results directory.
pub const RESULTS_DIR_ENV: &str = "BELYI_RESULTS_DIR";
pub const DEFAULT_RESULTS_DIR: &str = "results";
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: Value,
    pub seed: Seed,
    pub summary: Value,
    pub samples: Vec<Value>,
    pub assertions: Vec<Assertion>,
    pub code_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, params: impl Serialize, seed: Seed) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            params: to_value(params),
            seed,
            summary: Value::Object(Map::new()),
            samples: Vec::new(),
            assertions: Vec::new(),
            code_version: crate::CODE_VERSION.to_string(),
            timestamp: None,
        }
    }

    pub fn with_summary(mut self, summary: impl Serialize) -> Self {
        self.summary = to_value(summary);
        self
    }

    pub fn push_sample(&mut self, sample: impl Serialize) {
        self.samples.push(to_value(sample));
    }

    pub fn assert(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn all_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    /// First 16 hex digits of SHA-256 over the canonical parameter JSON.
    pub fn params_hash(&self) -> String {
        let digest = Sha256::digest(self.params.to_string().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// Relative path `<experiment>/<seed>-<params-hash>.json`.
    pub fn relative_path(&self) -> PathBuf {
        Path::new(&self.experiment).join(format!("{}-{}.json", self.seed.value(), self.params_hash()))
    }

    /// Writes the JSON report under `root` and, when there are samples, a
    /// CSV extract next to it. Returns the JSON path.
    pub fn persist(&self, root: &Path) -> Result<PathBuf> {
        let path = root.join(self.relative_path());
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(&path, self.to_json())?;
        if !self.samples.is_empty() {
            fs::write(path.with_extension("csv"), self.samples_csv()?)?;
        }
        Ok(path)
    }

    /// Samples as CSV; columns are the union of top-level keys in sorted
    /// order, nested values are written as JSON.
    pub fn samples_csv(&self) -> Result<String> {
        rows_to_csv(&self.samples)
    }
}

/// Results directory from the environment, falling back to `results`.
pub fn results_dir() -> PathBuf {
    std::env::var_os(RESULTS_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_RESULTS_DIR))
}

/// Serializes and rounds every float to [`SIGNIFICANT_DIGITS`].
pub fn to_value(x: impl Serialize) -> Value {
    let mut v = serde_json::to_value(x).expect("value serializes");
    round_floats(&mut v);
    v
}

pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses")
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            if let Some(r) = Number::from_f64(round_sig(x)) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Formats a float with 12 significant digits for text output.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let r = round_sig(x);
    // shortest representation that round-trips the rounded value
    format!("{r}")
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => fmt_sig(x),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

/// Writes a list of JSON objects as CSV.
pub fn rows_to_csv(rows: &[Value]) -> Result<String> {
    let mut columns: Vec<String> = Vec::new();
    for row in rows {
        if let Value::Object(map) = row {
            for key in map.keys() {
                if !columns.contains(key) {
                    columns.push(key.clone());
                }
            }
        }
    }
    columns.sort();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&columns)?;
    for row in rows {
        let record: Vec<String> = columns.iter().map(|c| row.get(c).map(cell).unwrap_or_default()).collect();
        w.write_record(&record)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

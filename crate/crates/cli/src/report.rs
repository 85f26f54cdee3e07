//! Result file schema (`quadtrace-result`, version 1) and its writers.
//!
//! Everything except the `timing` object is a deterministic function of the
//! configuration.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use quadtrace_core::{Evaluator, SpectralInterval};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{Format, IntervalSource};
use crate::error::{CliError, Result};
use crate::functions::FunctionSpec;
use crate::paired::{Comparison, EvaluatorRun, PairedRun};

pub const SCHEMA: &str = "quadtrace-result";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum MatrixConfig {
    File { path: PathBuf },
    Synthetic { seed: u64 },
}

/// Echo of the run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub matrix: MatrixConfig,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients_file: Option<PathBuf>,
    pub degree: usize,
    pub probes: usize,
    pub probe_seed: u64,
    pub evaluators: Vec<Evaluator>,
    pub interval_source: IntervalSource,
    pub normalize: bool,
    pub terms: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactTraces {
    /// `sum f(lambda_i)`, when a function was given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_f: Option<f64>,
    /// `sum p(lambda_i)` for the polynomial actually evaluated.
    pub trace_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatorTiming {
    pub evaluator: Evaluator,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub execution: String,
    pub threads: usize,
    pub evaluators: Vec<EvaluatorTiming>,
    pub total_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub schema: String,
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    /// Interval the operator was mapped from onto [-1, 1].
    pub spectral_interval: SpectralInterval,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactTraces>,
    pub evaluators: Vec<EvaluatorRun>,
    pub comparisons: Vec<Comparison>,
    pub paired_probes: bool,
    pub timing: Timing,
}

impl BenchResult {
    pub fn new(
        command: &str,
        config: RunConfig,
        spectral_interval: SpectralInterval,
        exact: Option<ExactTraces>,
        paired: PairedRun,
        timing: Timing,
    ) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            config,
            spectral_interval,
            exact,
            evaluators: paired.runs,
            comparisons: paired.comparisons,
            paired_probes: paired.paired_probes,
            timing,
        }
    }

    pub fn run(&self, evaluator: Evaluator) -> Option<&EvaluatorRun> {
        self.evaluators.iter().find(|r| r.evaluator == evaluator)
    }

    pub fn comparison(&self, a: Evaluator, b: Evaluator) -> Option<&Comparison> {
        self.comparisons
            .iter()
            .find(|c| (c.first, c.second) == (a, b) || (c.first, c.second) == (b, a))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serialization cannot fail") + "\n"
    }

    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("result serialization cannot fail");
        let mut out = String::new();
        flatten("", &value, &mut out);
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }

    /// Per-probe table: index, then value and checksum for each evaluator.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("probe");
        for r in &self.evaluators {
            let _ = write!(out, ",{0}_value,{0}_checksum", r.evaluator);
        }
        out.push('\n');
        let m = self.evaluators.first().map_or(0, |r| r.estimate.m);
        for i in 0..m {
            let _ = write!(out, "{i}");
            for r in &self.evaluators {
                let _ = write!(
                    out,
                    ",{:e},{:016x}",
                    r.estimate.probe_values[i], r.probe_checksums[i]
                );
            }
            out.push('\n');
        }
        out
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        other => {
            let _ = writeln!(out, "{prefix} = {other}");
        }
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })
}

/// Removes the nondeterministic `timing` object, for comparing runs.
pub fn strip_timing(json: &str) -> Value {
    let mut v: Value = serde_json::from_str(json).expect("valid result JSON");
    if let Value::Object(map) = &mut v {
        map.remove("timing");
    }
    v
}

//! Named numerical scenarios, their JSON/CSV reports and SVG plots.

mod catalog;
mod plot;
mod report;

pub use catalog::{run_scenario, CATALOG};
pub use plot::{heatmap, line_plot, Heatmap, Series};
pub use report::{BoundCheck, Level, MeshStats, ScenarioReport, SCHEMA_VERSION};

use crate::error::{invalid, Error, Result};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Inputs shared by all scenarios.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    /// Scenario-specific `key=value` settings.
    pub values: BTreeMap<String, String>,
    /// Coarsest mesh size; each scenario has its own default.
    pub h: Option<f64>,
    pub tail_tol: f64,
    pub seed: u64,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self { values: BTreeMap::new(), h: None, tail_tol: 1e-10, seed: 0 }
    }
}

impl ScenarioParams {
    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.values.insert(key.into(), value.to_string());
        self
    }

    pub fn f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => v.trim().parse().map_err(|_| Error::Parse(format!("parameter {key}={v} is not a number"))),
        }
    }

    pub fn usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => v.trim().parse().map_err(|_| Error::Parse(format!("parameter {key}={v} is not a count"))),
        }
    }

    pub fn list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.values.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("parameter {key}={v} is not a number list"))))
                .collect(),
        }
    }

    pub fn text<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.values.get(key).map(String::as_str).unwrap_or(default)
    }
}

/// A finished scenario: the report plus fields for heat-map rendering.
#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub report: ScenarioReport,
    pub heatmaps: Vec<Heatmap>,
    /// Extra CSV artifacts by file stem (e.g. sampled extension fields).
    pub tables: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// SVG documents for every series and heat map, keyed by file stem.
pub fn emit_plots(output: &ScenarioOutput) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for s in &output.report.series {
        out.push((sanitize(&s.name), line_plot(s)?));
    }
    for h in &output.heatmaps {
        out.push((sanitize(&h.name), heatmap(h)?));
    }
    if out.is_empty() {
        return Err(invalid("report has no numeric series to plot"));
    }
    Ok(out)
}

fn sanitize(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

/// Writes the report, CSV tables and plots into `dir/<scenario_id>/`.
pub fn write_outputs(output: &ScenarioOutput, dir: &Path, format: ReportFormat) -> Result<Vec<PathBuf>> {
    let target = dir.join(sanitize(&output.report.scenario_id));
    let io = |e: std::io::Error| invalid(format!("cannot write to {}: {e}", target.display()));
    std::fs::create_dir_all(&target).map_err(io)?;
    let mut written = Vec::new();
    let mut put = |name: String, body: &str| -> Result<()> {
        let path = target.join(name);
        std::fs::write(&path, body).map_err(io)?;
        written.push(path);
        Ok(())
    };
    match format {
        ReportFormat::Json => put("report.json".into(), &output.report.to_json())?,
        ReportFormat::Csv => put("report.csv".into(), &output.report.to_csv())?,
    }
    for (stem, body) in &output.tables {
        put(format!("{stem}.csv"), body)?;
    }
    if let Ok(plots) = emit_plots(output) {
        for (stem, svg) in plots {
            put(format!("{stem}.svg"), &svg)?;
        }
    }
    Ok(written)
}

use std::fs;
use std::path::Path;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::Failure;

/// One line of samples.csv. Empty cells are written for fields that do not
/// apply to the experiment or to the row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub experiment: String,
    pub body_id: String,
    pub n: usize,
    pub beta_or_p: f64,
    pub t_or_delta: Option<f64>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub ratio: Option<f64>,
    pub fitted_limit: Option<f64>,
    pub fitted_exponent: Option<f64>,
    pub rel_err: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub experiment: String,
    pub body_id: String,
    pub n: usize,
    pub config: ExperimentConfig,
    pub grid: Vec<f64>,
    pub rows: Vec<Row>,
    pub limit: Option<f64>,
    pub fitted_exponent: Option<f64>,
    pub rhs: Option<f64>,
    pub rel_err: Option<f64>,
    pub tolerance: Option<f64>,
    pub passed: bool,
    pub seed: u64,
    pub threads: usize,
    pub wall_time_s: f64,
    pub details: serde_json::Value,
}

/// |limit − rhs| / |rhs|.
pub fn relative_error(limit: Option<f64>, rhs: Option<f64>) -> Option<f64> {
    match (limit, rhs) {
        (Some(l), Some(r)) => Some((l - r).abs() / r.abs()),
        _ => None,
    }
}

impl RunReport {
    /// Rows followed by the summary row.
    pub fn csv_rows(&self) -> Vec<Row> {
        let mut rows = self.rows.clone();
        rows.push(Row {
            experiment: self.experiment.clone(),
            body_id: self.body_id.clone(),
            n: self.n,
            beta_or_p: self.rows.first().map_or(f64::NAN, |r| r.beta_or_p),
            t_or_delta: None,
            lhs: None,
            rhs: self.rhs,
            ratio: None,
            fitted_limit: self.limit,
            fitted_exponent: self.fitted_exponent,
            rel_err: relative_error(self.limit, self.rhs),
        });
        rows
    }
}

fn io(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Validation(format!("{}: {e}", path.display()))
}

pub fn write_report(dir: &Path, value: &impl Serialize) -> Result<(), Failure> {
    let path = dir.join("report.json");
    let text = serde_json::to_string_pretty(value).map_err(|e| io(&path, e))?;
    fs::write(&path, text + "\n").map_err(|e| io(&path, e))
}

pub fn write_samples(dir: &Path, rows: &[Row]) -> Result<(), Failure> {
    let path = dir.join("samples.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| io(&path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| io(&path, e))?;
    }
    w.flush().map_err(|e| io(&path, e))
}

#[derive(Serialize)]
struct PlotPoint<'a> {
    curve: &'a str,
    x: f64,
    y: f64,
}

/// Long-format curve data: lhs, rhs and ratio against the grid parameter.
pub fn write_plot(dir: &Path, rows: &[Row]) -> Result<(), Failure> {
    let path = dir.join("plot.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| io(&path, e))?;
    for (curve, pick) in [
        ("lhs", (|r: &Row| r.lhs) as fn(&Row) -> Option<f64>),
        ("rhs", |r: &Row| r.rhs),
        ("ratio", |r: &Row| r.ratio),
    ] {
        for r in rows {
            if let (Some(x), Some(y)) = (r.t_or_delta, pick(r)) {
                w.serialize(PlotPoint { curve, x, y }).map_err(|e| io(&path, e))?;
            }
        }
    }
    w.flush().map_err(|e| io(&path, e))
}

//! `report.json` and CSV tables.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use semilab_core::{OperatorPair, C64};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::LabError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorInfo {
    pub dim: usize,
    pub structure: &'static str,
    /// name of the norm every reported quantity is measured in
    pub e0_norm: &'static str,
    pub operator_norm: f64,
}

impl OperatorInfo {
    pub fn of(op: &OperatorPair) -> Self {
        Self { dim: op.dim(), structure: op.structure().name(), e0_norm: op.e0().name(), operator_norm: op.operator_norm() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    #[serde(rename = "M_hat")]
    pub m_hat: Option<f64>,
    pub c2_hat: Option<f64>,
    pub omega1: Option<f64>,
    pub omega2: Option<f64>,
    /// `max(omega1, omega2)`
    pub omega: Option<f64>,
    #[serde(rename = "N")]
    pub n: Option<f64>,
    #[serde(rename = "s_A")]
    pub s_a: Option<f64>,
    pub max_identity_residual: Option<f64>,
    pub max_reconstruction_error: Option<f64>,
    pub max_neumann_terms: Option<usize>,
    /// experiment-specific values
    pub details: BTreeMap<String, Option<f64>>,
}

/// One `mu` of a scan-type experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub mu: [f64; 2],
    #[serde(rename = "V_norm")]
    pub v_norm: Option<f64>,
    pub identity_residual: Option<f64>,
    pub reconstruction_error: Option<f64>,
    #[serde(rename = "N_running")]
    pub n_running: Option<f64>,
}

impl Record {
    pub fn new(mu: C64) -> Self {
        Self { mu: [mu.re, mu.im], v_norm: None, identity_residual: None, reconstruction_error: None, n_running: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub experiment: Experiment,
    pub config: ExperimentConfig,
    pub operator: OperatorInfo,
    pub summary: Summary,
    /// every check of the run; the exit code is 0 iff all hold
    pub pass: BTreeMap<String, bool>,
    pub all_pass: bool,
    pub notes: Vec<String>,
    pub records: Vec<Record>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file: &'static str,
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file: &'static str, header: &'static [&'static str]) -> Self {
        Self { file, header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Shortest round-trip decimal form; empty for missing values.
pub fn num(v: impl Into<Option<f64>>) -> String {
    match v.into() {
        Some(x) => format!("{x}"),
        None => String::new(),
    }
}

pub fn write_outputs(dir: &Path, report: &Report, tables: &[Table]) -> Result<(), LabError> {
    let io = |context: String| move |source| LabError::Io { context, source };
    std::fs::create_dir_all(dir).map_err(io(format!("creating {}", dir.display())))?;
    let mut json = serde_json::to_string_pretty(report)?;
    json.push('\n');
    let path = dir.join("report.json");
    std::fs::write(&path, json).map_err(io(format!("writing {}", path.display())))?;
    for t in tables {
        let path = dir.join(t.file);
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(t.header)?;
        for row in &t.rows {
            w.write_record(row)?;
        }
        w.flush().map_err(io(format!("writing {}", path.display())))?;
    }
    Ok(())
}

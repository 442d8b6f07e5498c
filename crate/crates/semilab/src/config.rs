//! Experiment configuration: command-line values, an optional
//! `key = value` file, and defaults, resolved in that order of priority.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::LabError;
use crate::parse::{key_values, parse_mu_grid};

pub const DEFAULT_T: f64 = 1.0;
pub const DEFAULT_SIGMA: f64 = 0.5;
pub const DEFAULT_P: f64 = 2.0;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_PANELS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Spectrum,
    ResolventScan,
    MaxregEstimate,
    IdentityCheck,
    Reconstruct,
    Weighted,
    ThetaSweep,
    Verdict,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Spectrum,
        Experiment::ResolventScan,
        Experiment::MaxregEstimate,
        Experiment::IdentityCheck,
        Experiment::Reconstruct,
        Experiment::Weighted,
        Experiment::ThetaSweep,
        Experiment::Verdict,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Experiment::Spectrum => "spectrum",
            Experiment::ResolventScan => "resolvent-scan",
            Experiment::MaxregEstimate => "maxreg-estimate",
            Experiment::IdentityCheck => "identity-check",
            Experiment::Reconstruct => "reconstruct",
            Experiment::Weighted => "weighted",
            Experiment::ThetaSweep => "theta-sweep",
            Experiment::Verdict => "verdict",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.tag() == s)
    }
}

/// Fully resolved configuration; serialized into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub operator_file: PathBuf,
    pub probe_file: Option<PathBuf>,
    #[serde(rename = "T")]
    pub t_end: f64,
    pub sigma: f64,
    /// `None` sweeps `theta = 0.1, ..., 0.9`
    pub theta: Option<f64>,
    pub p: f64,
    /// `None` uses the experiment's default grid
    pub mu_grid: Option<String>,
    #[serde(skip)]
    pub output_dir: PathBuf,
    pub seed: u64,
    pub panels: usize,
}

/// Values that may be left unset; later sources only fill gaps.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigValues {
    pub experiment: Option<Experiment>,
    pub operator_file: Option<PathBuf>,
    pub probe_file: Option<PathBuf>,
    pub t_end: Option<f64>,
    pub sigma: Option<f64>,
    pub theta: Option<f64>,
    pub p: Option<f64>,
    pub mu_grid: Option<String>,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub panels: Option<usize>,
}

impl ConfigValues {
    /// Fills unset values from a `key = value` file. Relative paths in the
    /// file are taken relative to the file's directory.
    pub fn fill_from_file(&mut self, path: &Path) -> Result<(), LabError> {
        let text = std::fs::read_to_string(path).map_err(|source| LabError::Io { context: format!("reading {}", path.display()), source })?;
        let base = path.parent().unwrap_or(Path::new(""));
        let shown = path.display().to_string();
        for (line, key, value) in key_values(&text, &shown)? {
            let err = |msg: String| LabError::Parse { path: shown.clone(), line, msg };
            let real = |v: &str| v.parse::<f64>().map_err(|_| err(format!("`{key}` must be a number")));
            let file = |v: &str| base.join(v);
            match key.as_str() {
                "experiment" => {
                    let e = Experiment::from_tag(&value).ok_or_else(|| err(format!("unknown experiment `{value}`")))?;
                    self.experiment.get_or_insert(e);
                }
                "operator" => _ = self.operator_file.get_or_insert(file(&value)),
                "probes" => _ = self.probe_file.get_or_insert(file(&value)),
                "t" => _ = self.t_end.get_or_insert(real(&value)?),
                "sigma" => _ = self.sigma.get_or_insert(real(&value)?),
                "theta" => _ = self.theta.get_or_insert(real(&value)?),
                "p" => _ = self.p.get_or_insert(real(&value)?),
                "mu_grid" | "mu-grid" => _ = self.mu_grid.get_or_insert(value.clone()),
                "out" => _ = self.output_dir.get_or_insert(file(&value)),
                "seed" => _ = self.seed.get_or_insert(value.parse().map_err(|_| err("`seed` must be an integer".into()))?),
                "panels" => _ = self.panels.get_or_insert(value.parse().map_err(|_| err("`panels` must be an integer".into()))?),
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        Ok(())
    }

    pub fn resolve(self) -> Result<ExperimentConfig, LabError> {
        let c = ExperimentConfig {
            experiment: self.experiment.ok_or_else(|| LabError::usage("no experiment given"))?,
            operator_file: self.operator_file.ok_or_else(|| LabError::usage("--operator is required"))?,
            probe_file: self.probe_file,
            t_end: self.t_end.unwrap_or(DEFAULT_T),
            sigma: self.sigma.unwrap_or(DEFAULT_SIGMA),
            theta: self.theta,
            p: self.p.unwrap_or(DEFAULT_P),
            mu_grid: self.mu_grid,
            output_dir: self.output_dir.ok_or_else(|| LabError::usage("--out is required"))?,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            panels: self.panels.unwrap_or(DEFAULT_PANELS),
        };
        c.validate()?;
        Ok(c)
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), LabError> {
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(LabError::usage("T must be positive and finite"));
        }
        if !(self.sigma > 0.0 && self.sigma <= 1.0) {
            return Err(LabError::usage("sigma must lie in (0, 1]"));
        }
        if let Some(th) = self.theta {
            if !(th > 0.0 && th < 1.0) {
                return Err(LabError::usage("theta must lie in (0, 1)"));
            }
        }
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(LabError::usage("p must lie in (1, infinity)"));
        }
        if self.panels < 2 {
            return Err(LabError::usage("at least two panels are required"));
        }
        if let Some(g) = &self.mu_grid {
            parse_mu_grid(g).map_err(LabError::Usage)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(Experiment::from_tag(e.tag()), Some(e));
            assert_eq!(serde_json::to_string(&e).unwrap(), format!("\"{}\"", e.tag()));
        }
    }

    #[test]
    fn file_fills_gaps_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "experiment = verdict\noperator = op.txt\nT = 2\nseed = 5\nout = res\n").unwrap();
        let mut v = ConfigValues { seed: Some(9), ..Default::default() };
        v.fill_from_file(&path).unwrap();
        let c = v.resolve().unwrap();
        assert_eq!(c.experiment, Experiment::Verdict);
        assert_eq!(c.operator_file, dir.path().join("op.txt"));
        assert_eq!((c.t_end, c.seed, c.panels), (2.0, 9, DEFAULT_PANELS));
    }

    #[test]
    fn invalid_values_are_usage_errors() {
        let base = ConfigValues {
            experiment: Some(Experiment::Spectrum),
            operator_file: Some("a".into()),
            output_dir: Some("b".into()),
            ..Default::default()
        };
        assert!(base.clone().resolve().is_ok());
        for bad in [
            ConfigValues { t_end: Some(0.0), ..base.clone() },
            ConfigValues { sigma: Some(1.5), ..base.clone() },
            ConfigValues { theta: Some(1.0), ..base.clone() },
            ConfigValues { p: Some(1.0), ..base.clone() },
            ConfigValues { panels: Some(1), ..base.clone() },
            ConfigValues { mu_grid: Some("1:2".into()), ..base.clone() },
            ConfigValues { operator_file: None, ..base.clone() },
        ] {
            assert_eq!(bad.resolve().unwrap_err().exit_code(), 1);
        }
    }
}

use semilab_core::Error as CoreError;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SCIENTIFIC_FAIL: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl LabError {
    pub fn usage(msg: impl Into<String>) -> Self {
        LabError::Usage(msg.into())
    }

    /// Numerical breakdowns are scientific outcomes; everything else means
    /// the inputs were unusable.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Core(
                CoreError::QuadratureUnderResolved { .. }
                | CoreError::NeumannDivergence { .. }
                | CoreError::SlowConvergence { .. }
                | CoreError::SingularResolvent { .. }
                | CoreError::EigenFailure
                | CoreError::ContourCrossesSpectrum { .. },
            ) => EXIT_SCIENTIFIC_FAIL,
            _ => EXIT_USAGE,
        }
    }
}

use alloc::string::String;

use crate::scalar::C64;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("mu = {mu} is within {tol:e} of the spectrum")]
    SingularResolvent { mu: C64, tol: f64 },
    #[error("eigenvalue iteration did not converge")]
    EigenFailure,
    #[error("contour does not enclose eigenvalue {eigenvalue}")]
    ContourCrossesSpectrum { eigenvalue: C64 },
    #[error("operator does not have the declared structure: {0}")]
    InvalidStructure(&'static str),
    #[error("operator is not diagonal")]
    NotDiagonal,
    #[error("invalid time grid: {0}")]
    InvalidGrid(&'static str),
    #[error("grid function does not live on the requested grid")]
    GridMismatch,
    #[error("derivative samples are required")]
    MissingDerivative,
    #[error("quadrature under-resolved: refinement moved a sample by {deviation:e} (relative)")]
    QuadratureUnderResolved { deviation: f64 },
    #[error("probe set is empty")]
    EmptyProbeSet,
    #[error("probe {index} has zero data norm")]
    ZeroProbe { index: usize },
    #[error("{0} is not a panel breakpoint inside the grid")]
    BadEndpoint(f64),
    #[error("{0} is not an interior grid node")]
    NotANode(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("maximal-regularity constant must be positive, got {0}")]
    NonpositiveM(f64),
    #[error("Re mu must be positive, got {0}")]
    DegenerateReMu(f64),
    #[error("Neumann series diverges: |V| = {v_norm}")]
    NeumannDivergence { v_norm: f64 },
    #[error("Neumann series needs more than {terms} terms")]
    SlowConvergence { terms: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

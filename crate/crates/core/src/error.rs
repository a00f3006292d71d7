//! Solver error types.

use thiserror::Error;

/// Everything that can go wrong while building or running a simulation.
///
/// Diagnostics carry `f64` regardless of the solver's scalar type.
#[derive(Debug, Error)]
pub enum SolverError {
    /// A flux or eigenstructure was requested at a dry state.
    #[error("depth domain: h = {h} is dry or nonpositive")]
    DryState { h: f64 },

    /// An eigenvalue sits at (or within eigen_eps of) zero and the sonic
    /// regularization is disabled.
    #[error("sonic degeneracy: eigenvalue {lambda} within {eps} of zero")]
    SonicDegeneracy { lambda: f64, eps: f64 },

    /// CFL time step requested on a field with no wet cell.
    #[error("no wave speed: every cell is dry")]
    AllDry,

    /// A step produced a negative depth beyond the clipping tolerance.
    #[error("positivity failure: h = {h} at cell {cell}, t = {time}")]
    PositivityFailure { cell: usize, h: f64, time: f64 },

    /// Semi-implicit friction denominator dropped to or below zero.
    #[error("friction stability: denominator {denominator} at cell {cell}")]
    FrictionStability { cell: usize, denominator: f64 },

    /// A prescribed boundary surface lies below the ghost-cell bottom.
    #[error("boundary consistency: prescribed surface {surface} below bottom {bottom}")]
    BoundaryConsistency { surface: f64, bottom: f64 },

    /// Scenario has no analytic reference to compare against.
    #[error("scenario '{0}' has no analytic reference")]
    NoAnalyticReference(String),

    /// Grid construction rejected its inputs.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// Run configuration violates an invariant.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A bottom-profile or snapshot file failed to parse.
    #[error("malformed data in {path}: {reason}")]
    MalformedData { path: String, reason: String },

    /// I/O failure, annotated with the offending path.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, SolverError>;

impl SolverError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        SolverError::Io { path: path.into(), source }
    }
}

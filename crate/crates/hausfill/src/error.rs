//! Error types used across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the library.
///
/// Each variant carries a stable short code (see [`Error::code`]) that the
/// CLI prints and maps to its exit status.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A gauge evaluated to zero (or a non-finite value) at a positive
    /// argument, so ratio-based checks cannot proceed.
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),

    /// The requested scale is finer than the cell model supports.
    #[error("resolution exceeded: {0}")]
    ResolutionExceeded(String),

    /// Fewer positive-premeasure cells than requested disjoint subsets.
    #[error("insufficient mass: {0}")]
    InsufficientMass(String),

    #[error("undefined dimension: {0}")]
    UndefinedDimension(String),

    /// Connector endpoints farther apart than the path-length budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// The perfect set cannot host the separated ball family at some level.
    #[error("capacity exceeded at level {level}: {msg}")]
    CapacityExceeded { level: u32, msg: String },

    #[error("depth exceeded: {0}")]
    DepthExceeded(String),

    #[error("invalid radii: {0}")]
    InvalidRadii(String),

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("invalid config: {0}")]
    ConfigInvalid(String),
}

impl Error {
    /// Stable machine-readable code for this error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::InvalidGauge(_) => "invalid-gauge",
            Error::ResolutionExceeded(_) => "resolution-exceeded",
            Error::InsufficientMass(_) => "insufficient-mass",
            Error::UndefinedDimension(_) => "undefined-dimension",
            Error::BudgetExceeded(_) => "budget-exceeded",
            Error::CapacityExceeded { .. } => "capacity-exceeded",
            Error::DepthExceeded(_) => "depth-exceeded",
            Error::InvalidRadii(_) => "invalid-radii",
            Error::DegenerateCurve(_) => "degenerate-curve",
            Error::ConfigInvalid(_) => "config-invalid",
        }
    }
}

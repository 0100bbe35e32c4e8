use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SqueezeError {
    #[error("non-positive frequency: {name} = {value}")]
    NonPositiveFrequency { name: &'static str, value: f64 },

    #[error("negative coupling: {name} = {value}")]
    NegativeCoupling { name: &'static str, value: f64 },

    #[error("non-finite parameter: {name} = {value}")]
    NonFinite { name: &'static str, value: f64 },

    /// The drift determinant is not positive: second moments diverge at or
    /// beyond the superradiant transition.
    #[error("unstable system: drift determinant = {determinant}")]
    UnstableSystem { determinant: f64 },

    #[error("singular linear system in moment solve")]
    SingularSystem,

    #[error("frequency-domain system singular at omega = {omega}")]
    SingularAtFrequency { omega: f64 },

    #[error("empty range")]
    EmptyRange,

    #[error("division by zero in printed spectrum at omega = {omega}")]
    DivisionByZero { omega: f64 },

    #[error("integration step {dt} exceeds the limit {max}")]
    StepTooLarge { dt: f64, max: f64 },

    #[error("frequency spacing {spacing} is below the resolution {resolution}")]
    GridTooFine { spacing: f64, resolution: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("truncation too small: n_max = {n_max} (need at least 4)")]
    TruncationTooSmall { n_max: usize },

    #[error("steady state is not unique")]
    DegenerateSteadyState,

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("truncation leak: top-level population {population:e} exceeds {tolerance:e}")]
    TruncationLeak { population: f64, tolerance: f64 },
}

impl SqueezeError {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            SqueezeError::NonPositiveFrequency { .. } => "NonPositiveFrequency",
            SqueezeError::NegativeCoupling { .. } => "NegativeCoupling",
            SqueezeError::NonFinite { .. } => "NonFinite",
            SqueezeError::UnstableSystem { .. } => "UnstableSystem",
            SqueezeError::SingularSystem => "SingularSystem",
            SqueezeError::SingularAtFrequency { .. } => "SingularAtFrequency",
            SqueezeError::EmptyRange => "EmptyRange",
            SqueezeError::DivisionByZero { .. } => "DivisionByZero",
            SqueezeError::StepTooLarge { .. } => "StepTooLarge",
            SqueezeError::GridTooFine { .. } => "GridTooFine",
            SqueezeError::InvalidConfig(_) => "InvalidConfig",
            SqueezeError::TruncationTooSmall { .. } => "TruncationTooSmall",
            SqueezeError::DegenerateSteadyState => "DegenerateSteadyState",
            SqueezeError::NoConvergence(_) => "NoConvergence",
            SqueezeError::TruncationLeak { .. } => "TruncationLeak",
        }
    }
}

pub type Result<T> = std::result::Result<T, SqueezeError>;

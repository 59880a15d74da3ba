use thiserror::Error;

pub type Result<T> = std::result::Result<T, LandauError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LandauError {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("degree {degree} exceeds the supported cap {cap}")]
    CapExceeded { degree: usize, cap: usize },

    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("grid too small: {0}")]
    GridTooSmall(String),

    #[error("grid too coarse: spacing {spacing} exceeds {limit}")]
    GridTooCoarse { spacing: f64, limit: f64 },

    #[error("gauge mismatch: operator carries {operator}, field carries {field}")]
    GaugeMismatch { operator: String, field: String },

    #[error("operator {0} needs a gauge specification")]
    MissingGauge(String),

    #[error("operator {0} is only defined for a uniform magnetic field")]
    UniformFieldRequired(String),

    #[error("expectation values of plane-wave normalized states diverge; use a packet")]
    PlaneWaveExpectation,

    #[error("invalid gauge pair: {0}")]
    InvalidGaugePair(String),

    #[error("gauge function has degree {0}, maximum is 6")]
    GaugeDegree(usize),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("superposition residual stagnated at {residual:e} above tolerance {tolerance:e}")]
    Stagnated { residual: f64, tolerance: f64 },

    #[error("grid mismatch between fields")]
    GridMismatch,
}

impl LandauError {
    /// Stable kebab-case tag for machine-readable reporting.
    pub fn code(&self) -> &'static str {
        match self {
            LandauError::InvalidParams(_) => "invalid-params",
            LandauError::InvalidGrid(_) => "invalid-grid",
            LandauError::CapExceeded { .. } => "cap-exceeded",
            LandauError::InvalidQuantumNumbers(_) => "invalid-quantum-numbers",
            LandauError::GridTooSmall(_) => "grid-too-small",
            LandauError::GridTooCoarse { .. } => "grid-too-coarse",
            LandauError::GaugeMismatch { .. } => "gauge-mismatch",
            LandauError::MissingGauge(_) => "missing-gauge",
            LandauError::UniformFieldRequired(_) => "uniform-field-required",
            LandauError::PlaneWaveExpectation => "plane-wave-expectation",
            LandauError::InvalidGaugePair(_) => "invalid-gauge-pair",
            LandauError::GaugeDegree(_) => "gauge-degree",
            LandauError::Quadrature(_) => "quadrature",
            LandauError::WindowTooSmall(_) => "window-too-small",
            LandauError::Stagnated { .. } => "stagnated",
            LandauError::GridMismatch => "grid-mismatch",
        }
    }
}

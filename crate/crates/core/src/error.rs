use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("degree {degree} exceeds dimension {dim}")]
    DegreeTooLarge { degree: usize, dim: usize },

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("contraction of a 0-form is undefined")]
    ContractZeroForm,

    #[error("boundary of a 0-current is undefined")]
    BoundaryOfZeroCurrent,

    #[error("volume element vanishes at {point:?}")]
    DegenerateVolumeElement { point: Vec<f64> },

    #[error("point {point:?} lies outside the chart domain")]
    OutsideDomain { point: Vec<f64> },

    #[error("invalid chart domain: {0}")]
    InvalidDomain(String),

    #[error("invalid test form: {0}")]
    InvalidTestForm(String),

    #[error("invalid scenario parameters: {0}")]
    InvalidParameters(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("scenario `{0}` does not define {1}")]
    MissingScenarioPart(String, &'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

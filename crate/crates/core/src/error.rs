use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("periodic structure is empty")]
    EmptyStructure,
    /// 1-based level `j` with `m_j` not dividing `m_{j+1}`.
    #[error("level {0}: m_j does not divide m_(j+1)")]
    DivisibilityViolation(usize),
    #[error("level {0}: periodic structure entries must be positive")]
    NonPositiveLevel(usize),
    #[error("point does not belong to the system: {0}")]
    PointSystemMismatch(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("unsupported system: {0}")]
    UnsupportedSystem(String),
    #[error("pseudo-orbit defect {defect} exceeds the admissible {bound}")]
    DefectTooLarge { defect: String, bound: String },
    #[error("scan horizon of {0} steps exceeded")]
    HorizonExceeded(usize),
    #[error("tower level {level} invalid: {reason}")]
    TowerInvalid { level: usize, reason: String },
    #[error("no return within horizon at level {0}")]
    NoReturnWithinHorizon(u32),
    #[error("input is not minimal: {0}")]
    NotMinimalInput(String),
    #[error("no regular recurrence witness within horizon {0}")]
    NoWitness(usize),
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

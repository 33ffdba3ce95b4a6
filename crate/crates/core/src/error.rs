use thiserror::Error;

/// Failures raised by the model, solvers and regressor.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BalanceError {
    #[error("no loads given")]
    Empty,
    #[error("load count {0} is not a positive multiple of 3")]
    NotDivisibleByThree(usize),
    #[error("load {index} is negative or not finite: {value}")]
    InvalidCurrent { index: usize, value: String },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("load {index} has phase label {label}, expected 1, 2 or 3")]
    LabelOutOfRange { index: usize, label: u8 },
    #[error("assignment is not balanced: per-phase counts {counts:?}")]
    Unbalanced { counts: [usize; 3] },
    #[error("switch row {row} is invalid: {reason}")]
    InvalidSwitchRow { row: usize, reason: &'static str },
    #[error("a connection point holds {count} loads, at most 3 allowed")]
    TooManyLoads { count: usize },
    #[error("branch {branch} has zero voltage magnitude")]
    SingularVoltage { branch: usize },
    #[error("branch {branch} is invalid: {reason}")]
    InvalidBranch { branch: usize, reason: &'static str },
    #[error("exhaustive search supports at most {limit} loads, got {actual}")]
    Capacity { limit: usize, actual: usize },
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("spread must be positive and finite")]
    InvalidSpread,
    #[error("invalid experiment configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, BalanceError>;

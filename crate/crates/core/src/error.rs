use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("field element {value} is out of range for GF({p})")]
    ElementOutOfRange { value: u32, p: u32 },
    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u32, u32),
    #[error("vector length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("shift {shift} exceeds vector length {len}")]
    ShiftTooLarge { shift: usize, len: usize },
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("invalid channel gain: {0}")]
    InvalidGain(String),
    #[error("cooperation links disagree: |h12| = {h12}, |h21| = {h21}")]
    AsymmetricCooperation { h12: f64, h21: f64 },
    #[error("operation requires regime {expected}, got {got}")]
    WrongRegime { expected: &'static str, got: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unknown rate variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate rate variable `{0}`")]
    DuplicateVariable(String),
    #[error("swap map is not an involution at `{0}`")]
    NotInvolution(String),
    #[error("objective groups overlap at `{0}`")]
    OverlappingGroups(String),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("brute force limited to {max} variables, got {got}")]
    TooManyVariables { max: usize, got: usize },
    #[error("step must be positive")]
    NonPositiveStep,
    #[error("unknown model variable `{0}`")]
    UnknownModelVariable(String),
    #[error("covariance is not positive semidefinite (eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

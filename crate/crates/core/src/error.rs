use thiserror::Error;

use crate::scalar::ScalarKind;

#[derive(Debug, Error)]
pub enum Error {
    #[error("scalar kind mismatch: expected {expected}, got {got}")]
    KindMismatch { expected: ScalarKind, got: ScalarKind },

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cone is not sharp: dual has empty interior")]
    ConeNotSharp,

    #[error("point is outside the required region: {0}")]
    OutsideDomain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("sample budget exceeded ({0} elements)")]
    SampleBudget(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

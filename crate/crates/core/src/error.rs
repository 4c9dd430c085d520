use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NonSquare { rows: usize, row: usize, cols: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("operation undefined for the empty set")]
    EmptySet,
    #[error("invalid finite set: {0}")]
    InvalidSet(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operator image is not a polynomial (remainder {remainder})")]
    ImageNotPolynomial { remainder: String },
    #[error("inexact polynomial division (remainder {remainder})")]
    InexactDivision { remainder: String },
    #[error("result has nonzero imaginary part: {0}")]
    NonReal(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("requested tolerance unreachable: {0}")]
    ToleranceUnreachable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid recurrence family: {0}")]
    InvalidFamily(String),
    #[error("internal error: {0}")]
    Internal(String),
}

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),
    #[error("series exponential needs a zero constant term, found {0}")]
    NonzeroConstant(String),
    #[error("series logarithm/power needs constant term 1, found {0}")]
    ConstantNotOne(String),
    #[error("series is not hermitian (a_JI != conj(a_IJ))")]
    NonHermitian,
    #[error("forbidden monomials present ({0} found); the dual potential would not be real")]
    ForbiddenMonomials(usize),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inconsistent parameters: {0}")]
    InconsistentParameters(String),
    #[error("value must be nonnegative, got {0}")]
    NegativeValue(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("series truncated at order {have}, but order {needed} is required")]
    TruncationTooLow { needed: u32, have: u32 },
    #[error("metric is degenerate at the origin")]
    DegenerateMetric,
    #[error("expected a real result, found non-real coefficient {0}")]
    NonReal(String),
    #[error("no sign change found on {0}")]
    NoSignChange(String),
    #[error("identity check failed: {0}")]
    Mismatch(String),
    #[error("matrix is not nilpotent within {0} steps")]
    NotNilpotent(usize),
    #[error("index {0} out of range")]
    OutOfRange(usize),
    #[error("cross-validation disagreement: {0}")]
    Disagreement(String),
}

pub type Result<T> = std::result::Result<T, Error>;

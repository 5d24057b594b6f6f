use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different variable universes")]
    UniverseMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}` in universe")]
    DuplicateVariable(String),
    #[error("no value bound for variable `{0}`")]
    Unbound(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: {0} vanishes")]
    Pole(String),
    #[error("division is not exact")]
    InexactDivision,
    #[error("element is a zero divisor in the extension ring")]
    ZeroDivisor,
    #[error("extension contexts do not match")]
    ContextMismatch,
    #[error("duplicate square-root generator {0}")]
    DuplicateGenerator(String),
    #[error("non-generic curve parameters: {0}")]
    NonGenericParams(String),
    #[error("point belongs to the {found} chart, expected the {expected} chart")]
    ChartMismatch { expected: String, found: String },
    #[error("point is outside the affine chart: {0}")]
    OutsideChart(String),
    #[error("classifying map is indeterminate at the Gunning point {0}")]
    Indeterminate(String),
    #[error("no preimage: {0}")]
    NoPreimage(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("derivation failed: {0}")]
    Derivation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

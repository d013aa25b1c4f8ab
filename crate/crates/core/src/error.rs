use thiserror::Error;

#[derive(Debug, Error)]
pub enum SaftError {
    #[error("determinant ad-bc deviates from 1 by {residual:e} (tolerance {tol:e})")]
    DeterminantViolation { residual: f64, tol: f64 },
    #[error("parameter b must be nonzero")]
    ZeroB,
    #[error("parameter `{0}` is not finite")]
    NonFinite(&'static str),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("preset `{0}` has complex parameters, which are not supported")]
    ComplexParameterUnsupported(String),
    #[error("preset `{name}` expects {expected} argument(s), got {got}")]
    PresetArity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("grid is empty")]
    EmptyGrid,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite sample at index {0}")]
    NonFiniteSample(usize),
    #[error("reference norm is zero")]
    DivisionByZeroNorm,
    #[error("Riesz lower bound {0:e} is below 1e-12")]
    DegenerateGenerator(f64),
    #[error("this operation requires b > 0, got b = {0}")]
    NegativeB(f64),
    #[error("grid too narrow: {0}")]
    GridTooNarrow(String),
    #[error("integer-sample symbol vanishes near omega = {0}")]
    NonInvertibleSymbol(f64),
    #[error("delay {tau} outside [0, {period}]")]
    DelayOutOfRange { tau: f64, period: f64 },
    #[error("reference sequence is identically zero")]
    ZeroReference,
    #[error("empty sample window")]
    EmptyWindow,
    #[error("malformed CSV: {0}")]
    MalformedCsv(String),
    #[error("non-uniform grid at row {row}")]
    NonUniformGrid { row: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SaftError>;

use thiserror::Error;

/// Every failure the library can report.
///
/// Two variants are special: [`Error::CoverageViolation`] and
/// [`Error::Falsified`] mean a mathematical statement the crate relies on was
/// contradicted by a concrete input. They are never expected to fire.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in the supported range (< 2^64)")]
    NotPrime(String),
    #[error("precision must be at least 4 p-adic digits, got {0}")]
    InvalidPrecision(u32),
    #[error("input has negative p-adic valuation")]
    NegativeValuation,
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("operation is not defined for p = 2")]
    UnsupportedPrime,
    #[error("input is not a square in Q_p")]
    NotASquare,
    #[error("input is a square in Q_p; a nonsquare is required")]
    SquareDelta,
    #[error("not enough p-adic precision to certify the result; raise the precision")]
    PrecisionExhausted,
    #[error("operands carry different p-adic contexts")]
    ContextMismatch,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("normalizer of B is not computed")]
    UnsupportedTag,
    #[error("element is not split (tr^2 - 4 is not a nonzero square)")]
    NotSplit,
    #[error("element is not nonsplit")]
    NotNonsplit,
    #[error("element is not unipotent")]
    NotUnipotent,
    #[error("translate {index} is antidiagonal; diagonal witnesses cannot escape it")]
    AntidiagonalTranslate { index: usize },
    #[error("translate {index} has zero top-left entry; diagonal witnesses of positive valuation cannot escape it")]
    ZeroTopLeftTranslate { index: usize },
    #[error("translate family is empty")]
    EmptyFamily,
    #[error("no translate of the covering family contains the matrix: {matrix}")]
    CoverageViolation { matrix: String },
    #[error("matrix is not in W (v_p(trace) >= 0)")]
    NotInW,
    #[error("falsification event: {0}")]
    Falsified(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("determinant is {0}, expected 1")]
    Determinant(String),
    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),
    #[error("sample size must be at least 1")]
    EmptySample,
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

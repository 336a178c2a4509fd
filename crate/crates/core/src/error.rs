use thiserror::Error;

/// Errors raised by the exact kernels.
///
/// Verification outcomes (FAIL, INCONCLUSIVE) are not errors; they are
/// reported through [`crate::certificate::Certificate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("operation undefined on the zero polynomial: {0}")]
    ZeroPolynomial(&'static str),
    #[error("variable `{0}` has no assignment")]
    UnassignedVariable(String),
    #[error("center is not triangular: {0}")]
    NotTriangular(String),
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("transition matrix is not a cocycle: {0}")]
    NotCocycle(String),
    #[error("transition does not fix the curve: {0}")]
    CurveNotFixed(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistent(String),
    #[error("line is not contained in the quadric")]
    LineNotOnQuadric,
    #[error("no certified parameters found: {0}")]
    NotFound(String),
}

pub type Result<T> = std::result::Result<T, Error>;

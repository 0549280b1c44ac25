use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("block algebra needs at least one block, and every block dimension must be positive")]
    InvalidAlgebra,

    #[error("expected {expected} blocks, found {found}")]
    BlockCount { expected: usize, found: usize },

    #[error("block {block} must be {expected}x{expected}, found {rows}x{cols}")]
    ShapeMismatch {
        block: usize,
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("incompatible algebras: {left:?} vs {right:?}")]
    IncompatibleAlgebras { left: Vec<usize>, right: Vec<usize> },

    #[error("element is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("element is not positive (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("weight is not faithful (smallest density eigenvalue {min_eigenvalue:e})")]
    NotFaithful { min_eigenvalue: f64 },

    #[error("grading {grading} must be purely imaginary")]
    NotImaginary { grading: Complex64 },

    #[error("grading {grading} has negative real part")]
    NegativeGrading { grading: Complex64 },

    #[error("grading {grading} out of range: {requirement}")]
    GradingOutOfRange {
        grading: Complex64,
        requirement: &'static str,
    },

    #[error("gradings do not match: {expected} vs {found}")]
    GradingMismatch { expected: Complex64, found: Complex64 },

    #[error("real parts of gradings differ ({left} vs {right}) and the dividend is nonzero")]
    RealPartMismatch { left: f64, right: f64 },

    #[error("division is unsolvable: kernel of divisor not contained in kernel of dividend (residual {residual:e})")]
    Unsolvable { residual: f64 },

    #[error("x*x = y*y violated (residual {residual:e})")]
    ConditionViolated { residual: f64 },

    #[error("generator family is empty")]
    EmptyFamily,

    #[error("element is zero")]
    ZeroElement,

    #[error("threshold {c} must lie in [0, {norm})")]
    ThresholdTooLarge { c: f64, norm: f64 },

    #[error("map is not a right module map (worst residual {residual:e} at basis pair {pair:?})")]
    NotModuleMap {
        residual: f64,
        pair: (usize, usize),
    },

    #[error("linear map dimensions do not match: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("validation failed: {law} (residual {residual:e})")]
    ValidationFailed { law: String, residual: f64 },
}

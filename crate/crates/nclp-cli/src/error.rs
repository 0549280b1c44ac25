use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error(transparent)]
    Domain(#[from] nclp::Error),
}

impl CliError {
    /// 2 for configuration and input problems, 1 for domain errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }
}

/// Short machine-readable name of a library error.
pub fn error_kind(e: &nclp::Error) -> &'static str {
    use nclp::Error::*;
    match e {
        InvalidAlgebra => "invalid_algebra",
        BlockCount { .. } => "block_count",
        ShapeMismatch { .. } => "shape_mismatch",
        IncompatibleAlgebras { .. } => "incompatible_algebras",
        NotHermitian { .. } => "not_hermitian",
        NotPositive { .. } => "not_positive",
        NotFaithful { .. } => "not_faithful",
        NotImaginary { .. } => "not_imaginary",
        NegativeGrading { .. } => "negative_grading",
        GradingOutOfRange { .. } => "grading_out_of_range",
        GradingMismatch { .. } => "grading_mismatch",
        RealPartMismatch { .. } => "real_part_mismatch",
        Unsolvable { .. } => "unsolvable",
        ConditionViolated { .. } => "condition_violated",
        EmptyFamily => "empty_family",
        ZeroElement => "zero_element",
        ThresholdTooLarge { .. } => "threshold_too_large",
        NotModuleMap { .. } => "not_module_map",
        DimensionMismatch { .. } => "dimension_mismatch",
        ValidationFailed { .. } => "validation_failed",
    }
}

/// The residual carried by an error, if any.
pub fn error_residual(e: &nclp::Error) -> Option<f64> {
    use nclp::Error::*;
    match e {
        Unsolvable { residual }
        | ConditionViolated { residual }
        | NotModuleMap { residual, .. }
        | ValidationFailed { residual, .. } => Some(*residual),
        NotHermitian { asymmetry } => Some(*asymmetry),
        _ => None,
    }
}

/// `{"error": {"kind": ..., "message": ..., "residual": ...}}`.
pub fn error_json(e: &CliError) -> serde_json::Value {
    let (kind, residual) = match e {
        CliError::Domain(d) => (error_kind(d), error_residual(d)),
        CliError::Config(_) => ("config", None),
        CliError::Parse(_) => ("parse", None),
        CliError::Io(_) => ("io", None),
    };
    let mut obj = serde_json::json!({ "kind": kind, "message": e.to_string() });
    if let Some(r) = residual {
        obj["residual"] = serde_json::json!(r);
    }
    serde_json::json!({ "error": obj })
}

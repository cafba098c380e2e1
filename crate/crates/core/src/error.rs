use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },

    #[error("non-finite entry in matrix")]
    NonFinite,

    #[error("antilinear operator is not an isometry (|K K^T - 1| = {0:e})")]
    NotIsometry(f64),

    #[error("scalar-field mismatch between subspaces")]
    FieldMismatch,

    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("sign-indeterminate: neither sign fits `{relation}` (residuals {plus:e} / {minus:e})")]
    SignIndeterminate {
        relation: &'static str,
        plus: f64,
        minus: f64,
    },

    #[error("not-first-order: 1st order violation {0:e} exceeds tolerance")]
    NotFirstOrder(f64),

    #[error("order-conditions-violated: 0th order {zeroth:e}, 1st order {first:e}")]
    OrderConditionsViolated { zeroth: f64, first: f64 },

    #[error("operator is not Hermitian (|D - D*| = {0:e})")]
    NotHermitian(f64),

    #[error("grading is not a self-adjoint involution: {0}")]
    InvalidGrading(String),

    #[error("grading required for this operation")]
    GradingRequired,

    #[error("non-unitary group element ({0})")]
    NonUnitary(String),

    #[error("config error at line {line}, column {column}: {message}")]
    Config {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

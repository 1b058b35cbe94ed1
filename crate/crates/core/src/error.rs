use thiserror::Error;

/// Failures raised by the numerical routines.
///
/// Residuals and thresholds are reported in `f64` regardless of the working precision.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |H - H*| = {residual:e}")]
    NotHermitian { residual: f64 },

    #[error("operator is not positive semidefinite: eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    InvalidTrace { trace: f64 },

    #[error("state vector norm is {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("operator is not unitary: max |U*U - I| = {residual:e}")]
    NotUnitary { residual: f64 },

    #[error("operator is not an isometry: max |V*V - I| = {residual:e}")]
    NotIsometry { residual: f64 },

    #[error("Kraus completeness violated: max |sum V*V - I| = {residual:e}")]
    NotTracePreserving { residual: f64 },

    #[error("Choi partial trace over the output differs from the identity by {residual:e}")]
    ChoiNotTracePreserving { residual: f64 },

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid subsystem shape: {0}")]
    InvalidShape(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("eigenvalue iteration did not converge for a {dim}x{dim} matrix")]
    NoConvergence { dim: usize },

    #[error("certificate failed for {what}: gap {gap:e} exceeds {tolerance:e}")]
    CertificateFailed {
        what: String,
        gap: f64,
        tolerance: f64,
    },

    #[error("no preprocessing state found: {0}")]
    Infeasible(String),

    #[error("recovery leaks {leakage:e} of the code subspace; not a valid restriction")]
    Leakage { leakage: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn mismatch(context: &'static str, expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        context,
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

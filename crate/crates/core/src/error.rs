use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {0} entries")]
    NotSquare(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive definite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("function {0} is not regular (f(0) = 0)")]
    NotRegular(String),

    #[error("quadrature did not reach tolerance (estimated error {estimate:.3e} after {subdivisions} subdivisions)")]
    QuadratureFailure { estimate: f64, subdivisions: usize },

    #[error("integral of h(lambda)/lambda diverges near 0")]
    IntegrabilityFailure,

    #[error("no analytic continuation available for {0}")]
    UnsupportedAnalyticContinuation(String),

    #[error("argument tracking lost continuity at lambda = {lambda}")]
    BranchTrackingFailure { lambda: f64 },

    #[error("no weight function available for {0}")]
    WeightUnavailable(String),

    #[error("order methods disagree: weight comparison says {weight}, phi test says {phi}")]
    MethodDisagreement { weight: bool, phi: bool },

    #[error("result should be real but has imaginary part {imag:.3e}")]
    NumericalInconsistency { imag: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

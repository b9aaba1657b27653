use thiserror::Error;

/// Errors raised by the numerical routines and certifiers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |H - H†| = {deviation:.3e} exceeds {tol:.1e}")]
    NonHermitianInput { deviation: f64, tol: f64 },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("not a density matrix: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("function undefined at retained eigenvalue {eigenvalue:.6e}")]
    DomainError { eigenvalue: f64 },

    #[error("parameter point {theta:?} lies outside the model domain")]
    OutOfDomain { theta: Vec<f64> },

    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    #[error("Kraus operators are not normalized: residual {residual:.3e} exceeds {tol:.1e}")]
    NotNormalized { residual: f64, tol: f64 },

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("measurement is not pure")]
    NotPure,

    #[error("measurement is not reversible: smallest singular value {min_singular_value:.3e}")]
    NotReversible { min_singular_value: f64 },

    #[error("state is rank deficient (min eigenvalue {min_eigenvalue:.3e}) and the derivative has weight on its kernel")]
    RankDeficient { min_eigenvalue: f64 },

    #[error("outcome {outcome} has vanishing probability but non-vanishing derivative")]
    SingularDistribution { outcome: usize },

    #[error("not a probability distribution: {0}")]
    NotADistribution(String),

    #[error("sigma is singular (min eigenvalue {min_eigenvalue:.3e})")]
    SingularSigma { min_eigenvalue: f64 },

    #[error("unknown metric: {0}")]
    UnknownMetric(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

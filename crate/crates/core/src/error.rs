use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("integrand returned a non-finite value at {at}")]
    NonFiniteEvaluation { at: f64 },

    #[error(
        "quadrature did not converge: value {value}, error estimate {error_estimate} after {evaluations} evaluations"
    )]
    NonConvergence {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    #[error("integrand does not decay on the semi-infinite range (probe reached {at})")]
    TailNotDecaying { at: f64 },

    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("log-gamma pole at non-positive integer {0}")]
    PoleArgument(f64),

    #[error("ascending series not validated for tau = {tau}, x = {x}")]
    SeriesRangeExceeded { tau: f64, x: f64 },

    #[error("coefficient sequence fails the summability probe: {0}")]
    SummabilityViolation(String),

    #[error("kernel family mismatch: expected {expected}, got {found}")]
    FamilyMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),
}

use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("moment index {index} exceeds the cap {cap}")]
    MomentCap { index: usize, cap: usize },

    #[error("point {0} lies on the branch cut (-inf, 0]")]
    OnBranchCut(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("insufficient data: {0}")]
    Insufficient(String),

    #[error("measure is not Widom bounded (verdict {0})")]
    NotBounded(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} after {panels} panels")]
    Quadrature { estimate: f64, error: f64, panels: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

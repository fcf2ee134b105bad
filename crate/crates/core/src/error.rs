use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),
    #[error("unsupported period N = {0}; closed forms exist for N = 1 and N = 2 only")]
    UnsupportedPeriod(usize),
    #[error("invalid hierarchy: {0}")]
    InvalidSpec(String),
    #[error("state form does not match the operator: {0}")]
    FormMismatch(String),
    #[error("wavefunction is singular at the center u0 = {0}")]
    SingularPoint(f64),
    #[error("quadrature scheme mismatch: {0}")]
    SchemeMismatch(String),
    #[error("eigenvalue iteration failed: {0}")]
    Convergence(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("interpolation: {0}")]
    Interpolation(String),
    #[error("interpolation unstable for {what}: {detail}")]
    InterpolationUnstable { what: String, detail: String },
    #[error("could not pin the constant of P_{level}: {detail}")]
    Determination { level: usize, detail: String },
    #[error("invalid relation spec: {0}")]
    InvalidSpec(String),
    #[error("unstable moduli space (g={g}, n={n})")]
    Unstable { g: usize, n: usize },
    #[error("unimplemented: {0}")]
    Unimplemented(String),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("singular reduction matrix: {0}")]
    NonDegeneracy(String),
    #[error("reduction failed: {0}")]
    Reduction(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

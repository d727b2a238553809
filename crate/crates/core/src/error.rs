use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error("invalid stability vector: {0}")]
    InvalidOrbitPoint(String),
    #[error("not a proper orthochronous Lorentz matrix: {0}")]
    NotLorentz(String),
    #[error("matrix is not in SL(2,C): det = {0}")]
    NotUnimodular(String),
    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),
    #[error("{n_spins} spins exceed the state cap of {cap}")]
    CapExceeded { n_spins: usize, cap: usize },
    #[error("mismatched trees: {0}")]
    TreeMismatch(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("value is not a single signed radical")]
    NotSingleRadical,
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, OrbitError>;

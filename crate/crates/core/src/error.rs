use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QftError {
    #[error("radix must be at least 2, got {0}")]
    InvalidRadix(usize),
    #[error("digit count must be at least 1, got {0}")]
    InvalidDigits(usize),
    #[error("keep depth must be at least 1, got {0}")]
    InvalidKeepDepth(usize),
    #[error("denominator exponent {got} is below the minimum {min}")]
    InvalidDenominator { got: u32, min: u32 },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },
    #[error("register size {radix}^{digits} overflows")]
    Overflow { radix: usize, digits: usize },
    #[error("non-finite value at position {0}")]
    NonFinite(usize),
    #[error("state norm squared is {0}, expected 1")]
    NormViolation(f64),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("dropped count {m} exceeds fraction length {len}")]
    DroppedExceedsLength { m: usize, len: usize },
    #[error("iteration count must be at least 1")]
    InvalidIterations,
    #[error("simulated phase disagrees with dropped-gate exponent: {0}")]
    PhaseMismatch(String),
}

pub type Result<T> = std::result::Result<T, QftError>;

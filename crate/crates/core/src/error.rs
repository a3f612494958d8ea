use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus mismatch: Z_2^{left} vs Z_2^{right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("modulus exponent s={s} outside supported range 1..={max}")]
    UnsupportedModulus { s: u32, max: u32 },

    #[error("residue {value} does not fit in Z_2^{s}")]
    ResidueOutOfRange { value: u64, s: u32 },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid type: {0}")]
    InvalidType(String),

    #[error("t={t} exceeds the configured cap {cap}; pass the large-code override to proceed")]
    OverCap { t: u32, cap: u32 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

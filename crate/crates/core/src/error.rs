use thiserror::Error;

/// Errors raised by series arithmetic and model construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pi power mismatch: {left} vs {right}")]
    PiPowerMismatch { left: u32, right: u32 },

    #[error("series live over different variable tables")]
    TableMismatch,

    #[error("constant term is not invertible: {0}")]
    NonUnitConstant(String),

    #[error("exp needs a zero constant term")]
    NonZeroConstant,

    #[error("log needs constant term exactly 1")]
    LogConstant,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

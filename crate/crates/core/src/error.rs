use thiserror::Error;

/// Errors raised by the counting pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported zeta argument {0}: only positive even integers are supported")]
    UnsupportedZeta(i64),

    #[error("cannot add pi^{left} to pi^{right}")]
    MixedPiPower { left: u32, right: u32 },

    #[error("multinomial parts sum to {sum}, expected {top}")]
    MultinomialMismatch { top: u64, sum: u64 },

    #[error("dimension mismatch: expected at least {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("division by an identically zero rational function")]
    ZeroDenominator,

    #[error("invalid layer signature (m, n) = ({m}, {n}): {reason}")]
    InvalidSignature {
        m: u32,
        n: u32,
        reason: &'static str,
    },

    #[error("Kontsevich base case needs an even m >= 2, got {0}")]
    OddKontsevich(u32),

    #[error("zeta operator: {0}")]
    ZetaOperator(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("character size mismatch: irrep has size {irrep}, class has size {class}")]
    SizeMismatch { irrep: u32, class: u32 },

    #[error("naive enumeration is limited to degree <= {max}, got {got}")]
    DegreeTooLarge { max: u32, got: u32 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unknown entity `{0}`")]
    UnknownEntity(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QmodError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous: degrees {0} and {1} both present")]
    NonHomogeneous(u32, u32),
    #[error("theta component {index} has modulus {modulus}, not unimodular")]
    NonUnimodular { index: usize, modulus: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degree budget exceeded: {0}")]
    DegreeBudget(String),
    #[error("operator frames differ; cross-frame arithmetic is not supported")]
    FrameMismatch,
    #[error("ideal spec: {0}")]
    SpecParse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, QmodError>;

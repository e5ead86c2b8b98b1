use thiserror::Error;

#[derive(Debug, Error)]
pub enum SystoleError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cutoff {cutoff} too small: {reason}")]
    InsufficientCutoff { cutoff: String, reason: String },
    #[error("frontier still extendable at word length {max_word_length}")]
    CapExceeded { max_word_length: usize },
    #[error("could not certify comparison at {max_precision} bits: {what}")]
    UncertifiedComparison { what: String, max_precision: u32 },
    #[error("anchor check failed: {0}")]
    AnchorFailure(String),
    #[error("malformed cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl SystoleError {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            SystoleError::InvalidConfig(_) => "InvalidConfig",
            SystoleError::InsufficientCutoff { .. } => "InsufficientCutoff",
            SystoleError::CapExceeded { .. } => "CapExceeded",
            SystoleError::UncertifiedComparison { .. } => "UncertifiedComparison",
            SystoleError::AnchorFailure(_) => "AnchorFailure",
            SystoleError::Cache(_) => "Cache",
            SystoleError::Io(_) => "Io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            SystoleError::InvalidConfig(_) => 2,
            SystoleError::InsufficientCutoff { .. } => 3,
            SystoleError::CapExceeded { .. } => 4,
            SystoleError::UncertifiedComparison { .. } => 5,
            SystoleError::AnchorFailure(_) => 6,
            SystoleError::Cache(_) => 7,
            SystoleError::Io(_) => 8,
        }
    }
}

pub type Result<T, E = SystoleError> = std::result::Result<T, E>;

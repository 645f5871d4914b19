use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("element {element} does not belong to {group}")]
    GroupMismatch { element: String, group: String },

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("invalid register layout: {0}")]
    InvalidLayout(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("distribution is not normalized (sum {sum})")]
    Unnormalized { sum: f64 },

    #[error("oracle validation failed: {0}")]
    OracleValidation(String),

    #[error("factorization failed: {reason} (Bell-block fidelity {fidelity:.12})")]
    Factorization { reason: String, fidelity: f64 },

    #[error("insufficient battery: need {needed} depleted and fueled qubits, have {depleted} depleted and {fueled} fueled")]
    InsufficientBattery {
        needed: usize,
        depleted: usize,
        fueled: usize,
    },

    #[error("ladder truncation too narrow: {0}")]
    TruncationTooNarrow(String),

    #[error("too large: {0}")]
    TooLarge(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::OracleValidation(_) => 3,
            Error::Factorization { .. } => 4,
            _ => 2,
        }
    }
}

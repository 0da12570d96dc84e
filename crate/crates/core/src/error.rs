use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not square or has ragged rows")]
    NotSquare,

    #[error("invalid scalar literal `{0}`")]
    InvalidScalar(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown token `{token}` at position {pos}")]
    UnknownToken { pos: usize, token: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("field characteristic {characteristic} is not supported for dimension {n}")]
    UnsupportedCharacteristic { characteristic: u64, n: usize },

    #[error("scalar {0} is not representable in the target field")]
    NotRepresentable(String),

    #[error("subspace is not closed under the Hadamard product or does not contain J")]
    NotCircClosed,

    #[error("weak universal basis precondition violated: {0}")]
    WeakBasis(String),

    #[error("family member {0} is not symmetric")]
    NotSymmetric(usize),

    #[error("family is empty")]
    EmptyFamily,

    #[error("family members have different sizes")]
    MixedSizes,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph6: {0}")]
    Graph6(String),

    #[error("input too large: {0}")]
    TooLarge(String),

    #[error("trace arithmetic produced a non-integer value at stage {stage}")]
    NonIntegerTrace { stage: usize },

    #[error("merged spectrum does not match the merge plan: {0}")]
    Demerge(String),

    #[error("family fingerprint mismatch: expected {expected}, found {found}")]
    Fingerprint { expected: String, found: String },

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

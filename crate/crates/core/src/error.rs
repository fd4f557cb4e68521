use thiserror::Error;

/// Errors raised by the decision procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a topology: {0}")]
    NotATopology(String),
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown point label `{0}`")]
    UnknownLabel(String),
    #[error("point index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("operands belong to different spaces")]
    SpaceMismatch,
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("multimap has an empty value at `{0}`")]
    EmptyValue(String),
    #[error("search space of {size} candidates exceeds the cap of {cap}")]
    SearchSpaceTooLarge { size: u128, cap: u128 },
    #[error("candidate set of extended values is empty")]
    EmptyCandidate,
    #[error("codomain is not Hausdorff")]
    NotHausdorff,
    #[error("invalid choice: {0}")]
    InvalidChoice(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("internal mismatch: {0}")]
    InternalMismatch(String),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("bad size: {0}")]
    BadSize(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("reference to unknown {kind} `{name}`")]
    DanglingReference { kind: &'static str, name: String },
    #[error("a {kind} named `{name}` is already loaded")]
    DuplicateName { kind: &'static str, name: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

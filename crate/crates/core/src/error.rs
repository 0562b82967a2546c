use thiserror::Error;

/// Errors raised by the module, tensor and document layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live over different measure spaces")]
    SpaceMismatch,
    #[error("operands belong to different modules")]
    ModuleMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("invalid measure space: {0}")]
    InvalidSpace(String),
    #[error("invalid norm descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("unsupported norm kinds for {operation}: {detail}")]
    UnsupportedKinds {
        operation: &'static str,
        detail: String,
    },
    #[error("parts do not partition the atoms: {0}")]
    NotPartition(String),
    #[error("element is not on the unit sphere at atom `{0}`")]
    NotSphereMember(String),
    #[error("operator is not a quotient operator")]
    NotQuotient,
    #[error("functional is outside the dual unit disc at atom `{0}`")]
    OutsideDualDisc(String),
    #[error("family is not summable at atom `{0}`")]
    NotSummable(String),
    #[error("declared tail bound violated at atom `{atom}` (tail after {index} terms)")]
    BoundViolated { atom: String, index: u64 },
    #[error("summation needs more than {0} terms")]
    TooManyTerms(u64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unresolved reference `{0}`")]
    UnresolvedReference(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn unsupported(operation: &'static str, detail: impl Into<String>) -> Error {
    Error::UnsupportedKinds {
        operation,
        detail: detail.into(),
    }
}

use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("unbound variable x{0}")]
    UnboundVariable(usize),
    #[error("element {elem} out of range for universe of size {size}")]
    ElementOutOfRange { elem: usize, size: usize },
    #[error("closure cap exceeded after {0} functions")]
    CapExceeded(usize),
    #[error("partition is not a congruence of the algebra")]
    NotACongruence,
    #[error("expected a 2-element algebra, got size {0}")]
    SizeNot2(usize),
    #[error("congruences belong to different lattices")]
    LatticeMismatch,
    #[error("({0}) is not a covering pair")]
    NotACover(String),
    #[error("type labeling incomplete: {0}")]
    UntypedLattice(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("line {line}: gate `{gate}` referenced before definition")]
    ForwardReference { line: usize, gate: String },
    #[error("operation `{op}` expects {expected} operands, got {found}")]
    ArityMismatch { op: String, expected: usize, found: usize },
    #[error("input `{0}` has no value")]
    UnboundInput(String),
    #[error("instance shape: {0}")]
    InstanceShape(String),
    #[error("algebra is not DL-like")]
    NotDlLike,
    #[error("term is not a Malcev polynomial: {0}")]
    NotMalcev(String),
    #[error("algebra is not affine")]
    NotAffine,
    #[error("algebra is not supernilpotent")]
    NotSupernilpotent,
    #[error("linearity check failed: {0}")]
    LinearityCheckFailed(String),
    #[error("search budget exceeded ({0} evaluations)")]
    BudgetExceeded(u64),
    #[error("invalid type-3 witness: {0}")]
    InvalidWitness(String),
    #[error("unrecognized instance shape: {0}")]
    UnrecognizedShape(String),
    #[error("{0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    /// True for failures caused by a bounded search running out of room.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::CapExceeded(_) | Error::BudgetExceeded(_))
    }
}

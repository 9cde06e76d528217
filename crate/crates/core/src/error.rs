use thiserror::Error;

use crate::exactlin::{BasisLabel, FamilyId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("position {position} out of range for arity {arity}")]
    PositionOutOfRange { position: usize, arity: usize },

    #[error("expected an arity-{expected} tensor, got arity {found}")]
    WrongArity { expected: usize, found: usize },

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("label {label} lies outside the declared range of its family")]
    LabelOutOfRange { label: String },

    #[error("rule for {input} produced index {index} outside the range of family `{family}`")]
    RangeViolation { input: String, family: FamilyId, index: i64 },

    #[error("no rule entry covers {0}")]
    MissingRule(String),

    #[error("spec is not differential (no coderivation)")]
    NotDifferential,

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("identity is not multilinear: {0}")]
    NotMultilinear(String),

    #[error("unsupported identity: {0}")]
    Unsupported(String),

    #[error("construction not expressible as an index rule: {0}")]
    NotExpressible(String),

    #[error("construction precondition failed: {0}")]
    Precondition(String),

    #[error("dual window exceeded: need labels up to index {needed}, validated up to {validated}")]
    WindowExceeded { needed: u64, validated: u64 },

    #[error("shift bound {bound} violated at {label}: {detail}")]
    ShiftBound { bound: u64, label: String, detail: String },

    #[error("budget must be positive")]
    EmptyBudget,

    #[error("horizon {horizon} too small: {detail}")]
    HorizonTooSmall { horizon: u64, detail: String },

    #[error("need at least {needed} Grassmann generators, got {got}")]
    InsufficientGenerators { needed: usize, got: usize },

    #[error("graded algebra data missing: {0}")]
    MissingAlgebraData(String),

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
}

impl Error {
    pub(crate) fn out_of_range(label: &BasisLabel) -> Self {
        Error::LabelOutOfRange { label: label.to_string() }
    }
}

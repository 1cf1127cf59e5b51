use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    ZeroDivision,
    #[error("negative radicand under square root")]
    NegativeRadicand,
    #[error("square root of {0} is not a signed square root of a rational")]
    NonRadicalNorm(String),
    #[error("bilinear form is degenerate or indefinite on the supplied vectors")]
    DegenerateForm,
    #[error("malformed spin: j={j}, m={m}")]
    MalformedSpin { j: String, m: String },
    #[error("label out of range: {0}")]
    OutOfRange(String),
    #[error("SO(4) label {label} does not occur in the branching of {irrep}")]
    BranchingViolation { irrep: String, label: String },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("{g} is not contained in {g1} x {g2}")]
    NotInSeries { g1: String, g2: String, g: String },
    #[error("null space of dimension {found}, expected {expected}")]
    RankDefect { expected: usize, found: usize },
    #[error("normalization differs between SO(4) groups: {0}")]
    NormInconsistency(String),
    #[error("weight {0} does not occur in the irrep")]
    EmptySubspace(String),
    #[error("laddering annihilated a vector early: {0}")]
    LadderNullUnexpected(String),
    #[error("transformed coefficient depends on the projection used: {0}")]
    TransformInconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("store error: {0}")]
    Store(String),
}

pub type Result<T> = std::result::Result<T, Error>;

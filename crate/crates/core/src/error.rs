use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("length {0} exceeds the supported maximum of 128")]
    LengthTooLarge(usize),
    #[error("word has bits set beyond its length {len}")]
    BitsBeyondLength { len: usize },
    #[error("invalid symbol {0:?}, expected '0' or '1'")]
    BadSymbol(char),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("generator rows are linearly dependent (rank {rank} < {rows})")]
    DependentRows { rank: usize, rows: usize },
    #[error("rank zero")]
    RankZero,
    #[error("code has dimension zero")]
    EmptyCode,
    #[error("enumeration too large: dimension {k} exceeds {limit}")]
    EnumerationTooLarge { k: usize, limit: usize },
    #[error("code is not self-dual")]
    NotSelfDual,
    #[error("shadow undefined variant: code is doubly-even")]
    DoublyEven,
    #[error("malformed .gm2 input at line {line}: {msg}")]
    Format { line: usize, msg: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HermitianError {
    #[error("malformed entry at line {line}: {msg}")]
    MalformedEntry { line: usize, msg: String },
    #[error("wrong dimensions at line {line}: {msg}")]
    WrongDimensions { line: usize, msg: String },
    #[error("generator rows are linearly dependent")]
    DependentRows,
    #[error("matrix is not Hermitian self-dual")]
    NotSelfDual,
    #[error("distance below Singleton window: d = {0}, expected 4 or 5")]
    DistanceOutsideWindow(usize),
    #[error("zero diagonal entry in column {0}")]
    ZeroDiagonal(usize),
    #[error("permutation has degree {0}, expected 8")]
    BadPermutation(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("degenerate lift: rank {rank}, expected {expected}")]
    DegenerateLift { rank: usize, expected: usize },
    #[error("component code is not Hermitian self-dual")]
    ComponentNotSelfDual,
    #[error("C_pi is not a self-dual [12,6] code")]
    CpiNotSelfDual,
    #[error("invalid column split: {0}")]
    BadSplit(String),
    #[error("assembly violates duality")]
    AssemblyNotSelfDual,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixedPartError {
    #[error("group integrity check failed: expected {expected}, found {found}")]
    GroupIntegrity { expected: usize, found: usize },
    #[error("expected a permutation of degree 8, found degree {0}")]
    BadPermutation(usize),
    #[error("mu index {0} outside 0..420")]
    MuIndex(usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    FixedPart(#[from] FixedPartError),
    #[error("permutation: {0}")]
    Permutation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

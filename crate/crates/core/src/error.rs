use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("minimum distance is undefined for a code with a single codeword")]
    UndefinedDistance,
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("symbol {symbol} out of range for alphabet size {q}")]
    SymbolOutOfRange { symbol: usize, q: usize },
    #[error("duplicate codeword at index {index}")]
    DuplicateCodeword { index: usize },
    #[error("linear codes need a prime alphabet size, got {q}")]
    UnsupportedField { q: usize },
    #[error("generator rows are linearly dependent (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },
    #[error("code has {codewords} codewords but the POVM has {projectors} projectors")]
    CardinalityMismatch { codewords: usize, projectors: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("invalid quantum state: {0}")]
    InvalidState(String),
    #[error("classification is indeterminate for a vacuum amplitude")]
    IndeterminateClassification,
    #[error("operation is not applicable to this parameter family")]
    NotApplicable,
}

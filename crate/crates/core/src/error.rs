use thiserror::Error;

/// Failures while parsing a coded section. Each variant names the section
/// that was being read so callers can report where a stream went bad.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("{section}: stream truncated")]
    Truncated { section: &'static str },

    #[error("{section}: malformed data ({reason})")]
    Malformed {
        section: &'static str,
        reason: String,
    },

    #[error("topology: gap overflow, index {index} beyond {limit} upper-triangular slots")]
    GapOverflow { index: u64, limit: u64 },

    #[error("{section}: invalid Huffman code-length table")]
    BadTable { section: &'static str },

    #[error("{section}: codeword overrun")]
    CodewordOverrun { section: &'static str },

    #[error("header: bad magic bytes")]
    BadMagic,

    #[error("header: unsupported format version {0}")]
    UnsupportedVersion(u8),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("edge list parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("matrix is not symmetric (entry ({row}, {col}))")]
    NotSymmetric { row: usize, col: usize },

    #[error("adjacency has a negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },

    #[error("edge set is empty")]
    EmptyEdgeSet,

    #[error("power iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("filter design failed: {0}")]
    Design(String),

    #[error("quantized magnitude overflows 2^31-1 bins (value {0})")]
    QuantOverflow(f64),

    #[error("singular value decomposition failed")]
    SvdFailure,

    #[error("reference signal has zero norm")]
    ZeroReference,

    #[error(transparent)]
    Decode(#[from] DecodeError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("report serialization: {0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, Error>;

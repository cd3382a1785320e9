use thiserror::Error;

/// Error taxonomy shared by all modules.
///
/// `Input` covers malformed or out-of-range data handed to an operation,
/// `Precondition` a violated mathematical hypothesis, and `Integrity` an
/// internal contradiction (e.g. a verified pair whose Reeb system turns out
/// inconsistent). The distinction drives CLI exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("unsupported model: {0}")]
    Unsupported(String),

    /// Symbols are additive placeholders only; multiplying two genuinely
    /// symbolic values has no representation here.
    #[error("products of symbols are undefined over an additive symbol set")]
    SymbolProduct,
}

pub type Result<T> = std::result::Result<T, Error>;

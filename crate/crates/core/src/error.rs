use thiserror::Error;

/// Errors surfaced by construction and verification entry points.
///
/// `Config` and `Input` mean the caller asked for something malformed;
/// `WitnessImpossible` and `OracleMissing` mean a graph oracle cannot serve a
/// structurally valid request; `SearchExhausted` means a bounded search ran
/// out of budget, which signals a precondition violation in the input rather
/// than a bug in the search.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("witness impossible: {0}")]
    WitnessImpossible(String),

    #[error("oracle missing: {0}")]
    OracleMissing(String),

    #[error("search exhausted after {scanned} candidates (cap {cap}): {context}")]
    SearchExhausted {
        cap: u64,
        scanned: u64,
        context: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

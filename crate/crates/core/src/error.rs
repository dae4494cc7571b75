use thiserror::Error;

/// Errors surfaced by index construction, encryption, and the query protocol.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed edge list entry: {msg}")]
    Malformed { line: usize, msg: String },

    #[error("line {line}: self-loop on vertex {label:?}")]
    SelfLoop { line: usize, label: String },

    #[error("line {line}: negative weight {token:?}")]
    NegativeWeight { line: usize, token: String },

    #[error("no edge from {from} to {to} on the given path")]
    MissingEdge { from: String, to: String },

    #[error("unknown vertex label {0:?}")]
    UnknownVertex(String),

    #[error("arithmetic overflow while accumulating weights")]
    Overflow,

    #[error("invalid approximation ratio: {0}")]
    InvalidAlpha(String),

    #[error("tree depth {0} outside the supported range 1..=8")]
    DepthOutOfRange(u8),

    #[error("amplified value exceeds the 64-bit comparison domain")]
    DomainOverflow,

    #[error("amplification factor {phi} too small for tree depth {d_theta}")]
    PhiTooSmall { phi: u64, d_theta: u8 },

    #[error("ciphertext width mismatch: expected {expected} bytes, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("multiplication of a product-level ciphertext")]
    LevelViolation,

    #[error("operands have different ciphertext levels")]
    LevelMismatch,

    #[error("plaintext exceeds the backend message space")]
    MessageSpace,

    #[error("randomness source failure: {0}")]
    Randomness(String),

    #[error("dictionary key collision during index encryption")]
    KeyCollision,

    #[error("setup precondition violated: {0}")]
    Setup(String),

    #[error("leakage profile count mismatch: {0}")]
    CountMismatch(String),

    #[error("bad magic bytes (expected {expected:?})")]
    BadMagic { expected: &'static str },

    #[error("unsupported format version {0}")]
    BadVersion(u16),

    #[error("unsupported deployment widths (lambda={lambda}, z={z}, k={k} bits)")]
    UnsupportedWidths { lambda: u32, z: u32, k: u32 },

    #[error("file truncated or trailing garbage")]
    Truncated,

    #[error("value {0} does not fit the on-disk u32 field")]
    FieldOverflow(u64),

    #[error("decrypted result exceeds the message-space sanity bound")]
    CorruptResult,

    #[error("graph too sparse: could not sample {0} reachable query pairs")]
    SparseGraph(usize),

    #[error("remote error frame (code {code}): {msg}")]
    Frame { code: u8, msg: String },

    #[error("frame of {0} bytes exceeds the 16 MiB limit")]
    FrameTooLarge(u64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

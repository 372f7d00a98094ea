use thiserror::Error;

/// Errors produced by trie construction, enumeration, bitvector queries and
/// index (de)serialization.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no sentinel available")]
    NoSentinel,

    #[error("pattern contains sentinel")]
    PatternContainsSentinel,

    #[error("invalid trie: {0}")]
    InvalidTrie(String),

    #[error("matrix not in image of f")]
    NotInImage,

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("infeasible: sum != n-1")]
    Infeasible,

    #[error("enumeration too large")]
    EnumerationTooLarge,

    #[error("position out of range: {pos} (length {len})")]
    PositionOutOfRange { pos: u64, len: u64 },

    #[error("rank out of range: {rank} (ones {ones})")]
    RankOutOfRange { rank: u64, ones: u64 },

    #[error("not a valid XBWT: {0}")]
    NotValidXbwt(String),

    #[error("truncated")]
    Truncated,

    #[error("bad magic")]
    BadMagic,

    #[error("version mismatch: found {found}, expected {expected}")]
    VersionMismatch { found: u16, expected: u16 },

    #[error("checksum failure")]
    ChecksumFailure,

    #[error("malformed data: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

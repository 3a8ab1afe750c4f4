use thiserror::Error;

use crate::automaton::Violation;
use crate::Mode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate string: entries {first} and {second} are equal")]
    DuplicateString { first: usize, second: usize },

    #[error("entry {index} contains the reserved filler byte 0x00")]
    FillerByte { index: usize },

    #[error("invalid automaton: {}", .0.first().map(ToString::to_string).unwrap_or_default())]
    InvalidAutomaton(Vec<Violation>),

    #[error("automaton has a cycle through vertex {vertex}")]
    Cyclic { vertex: u32 },

    #[error("path count overflows 64 bits at vertex {vertex}")]
    CountOverflow { vertex: u32 },

    #[error("code {code} does not fit in {width} bits")]
    CodeOutOfRange { code: u16, width: u32 },

    #[error("heavy edges do not form disjoint paths at vertex {vertex}")]
    HeavyPathConflict { vertex: u32 },

    #[error("branch labels must be strictly increasing (position {index})")]
    UnsortedLabels { index: usize },

    #[error("branch weight at position {index} is zero")]
    ZeroWeight { index: usize },

    #[error("{labels} labels but {weights} weights")]
    LengthMismatch { labels: usize, weights: usize },

    #[error("select1({rank}) out of range: the bit string has {ones} ones")]
    SelectOutOfRange { rank: usize, ones: usize },

    #[error("operation needs a {expected} index, this one is {found}")]
    ModeMismatch { expected: Mode, found: Mode },

    #[error("byte mode supports at most 254 distinct characters, input has {sigma}")]
    AlphabetTooLarge { sigma: usize },

    #[error("automaton too large: {0}")]
    TooLarge(&'static str),

    #[error(transparent)]
    Format(#[from] FormatError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Index decoding failures. Each variant is a distinct condition so that
/// callers (and the C API) can tell them apart.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("not an index file (bad magic)")]
    BadMagic,

    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),

    #[error("index stream is truncated")]
    Truncated,

    #[error("checksum mismatch: stored {stored:08x}, computed {computed:08x}")]
    ChecksumMismatch { stored: u32, computed: u32 },

    #[error("corrupt index: {0}")]
    Corrupt(String),
}

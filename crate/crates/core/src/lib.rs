//! Packed acyclic deterministic finite automata.
//!
//! A dictionary (or the suffixes of a text) is compiled into a minimal
//! acyclic automaton, whose edges are split by a path decomposition into
//! heavy paths and light edges. Heavy paths are stored as one packed text
//! searched a machine word at a time; light edges sit in small per-vertex
//! branch structures found through a rank directory.
//!
//! ```
//! use padfa::{automaton::{build_trie, minimize, Dictionary}, BuildOptions, Padfa};
//!
//! let d = Dictionary::from_lines(b"ab\nabab\nbb").unwrap();
//! let a = minimize(&build_trie(&d).unwrap()).unwrap();
//! let p = Padfa::build(&a, BuildOptions::default()).unwrap();
//! assert!(p.contains(b"abab").unwrap());
//! assert!(!p.contains(b"aba").unwrap());
//! ```

pub mod alphabet;
pub mod cli;
pub mod automaton;
pub mod decompose;
pub mod error;
pub mod gen;
pub mod index;
pub mod packed;
pub mod succinct;

use std::fmt;

pub use alphabet::{CodeMap, Symbol};
pub use automaton::Adfa;
pub use error::{Error, FormatError, Result};
pub use index::{BuildOptions, Padfa, SpaceReport};
pub use packed::CharMode;
pub use succinct::Backend;

/// What a query asks of the automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Accepts `P·$`: the pattern is one of the stored strings.
    Membership,
    /// Consumes `P` from the root: on a suffix automaton, `P` is a substring.
    Reach,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Membership => "membership",
            Mode::Reach => "reach",
        })
    }
}

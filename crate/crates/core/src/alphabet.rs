//! Dense recoding of input bytes.
//!
//! Code 0 is the filler and never labels an edge. Input bytes take codes
//! `1..=sigma` in byte order and the terminator takes `sigma + 1`, so it
//! sorts after every real character.

use std::fmt;

/// The byte that may not appear in dictionaries or texts.
pub const FILLER_BYTE: u8 = 0x00;

/// A recoded character.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Symbol(pub u16);

impl Symbol {
    pub const FILLER: Symbol = Symbol(0);

    #[inline]
    pub const fn code(self) -> u16 {
        self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symbol({})", self.0)
    }
}

/// Bijection between the bytes used by an input and dense codes.
#[derive(Clone, PartialEq, Eq)]
pub struct CodeMap {
    // 0 = byte not in the alphabet
    to_code: [u8; 256],
    to_byte: Vec<u8>,
}

impl fmt::Debug for CodeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CodeMap")
            .field("sigma", &self.sigma())
            .field("bytes", &self.to_byte)
            .finish()
    }
}

impl CodeMap {
    /// Builds the map over every byte that occurs in `strings`.
    ///
    /// The filler byte is skipped; callers reject it before getting here.
    pub fn from_strings<'a, I>(strings: I) -> CodeMap
    where
        I: IntoIterator<Item = &'a [u8]>,
    {
        let mut seen = [false; 256];
        for s in strings {
            for &b in s {
                seen[b as usize] = true;
            }
        }
        seen[FILLER_BYTE as usize] = false;
        let bytes = (0..=255u8).filter(|&b| seen[b as usize]);
        CodeMap::from_bytes(bytes)
    }

    /// Builds the map from an ascending set of bytes.
    pub fn from_bytes<I: IntoIterator<Item = u8>>(bytes: I) -> CodeMap {
        let mut to_byte: Vec<u8> = bytes.into_iter().filter(|&b| b != FILLER_BYTE).collect();
        to_byte.sort_unstable();
        to_byte.dedup();
        let mut to_code = [0u8; 256];
        for (i, &b) in to_byte.iter().enumerate() {
            to_code[b as usize] = (i + 1) as u8;
        }
        CodeMap { to_code, to_byte }
    }

    /// Rebuilds the map from a serialized 256-entry table.
    ///
    /// Returns `None` unless the nonzero entries are exactly `1..=sigma`
    /// in increasing byte order.
    pub fn from_table(table: &[u8; 256]) -> Option<CodeMap> {
        let mut to_byte = Vec::new();
        for (b, &code) in table.iter().enumerate() {
            if code != 0 {
                if code as usize != to_byte.len() + 1 || b == FILLER_BYTE as usize {
                    return None;
                }
                to_byte.push(b as u8);
            }
        }
        Some(CodeMap {
            to_code: *table,
            to_byte,
        })
    }

    pub fn table(&self) -> &[u8; 256] {
        &self.to_code
    }

    /// Number of distinct input characters.
    #[inline]
    pub fn sigma(&self) -> usize {
        self.to_byte.len()
    }

    #[inline]
    pub fn terminator(&self) -> Symbol {
        Symbol(self.to_byte.len() as u16 + 1)
    }

    /// Largest code in use (the terminator).
    #[inline]
    pub fn max_code(&self) -> u16 {
        self.terminator().0
    }

    /// Bits per character: `ceil(log2(sigma + 2))`, at least 1.
    pub fn width_bits(&self) -> u32 {
        let symbols = self.sigma() as u32 + 2;
        (u32::BITS - (symbols - 1).leading_zeros()).max(1)
    }

    #[inline]
    pub fn encode(&self, byte: u8) -> Option<Symbol> {
        match self.to_code[byte as usize] {
            0 => None,
            c => Some(Symbol(c as u16)),
        }
    }

    /// Encodes a whole string, failing on the first byte outside the map.
    pub fn encode_all(&self, bytes: &[u8]) -> Option<Vec<Symbol>> {
        bytes.iter().map(|&b| self.encode(b)).collect()
    }

    pub fn decode(&self, s: Symbol) -> Option<u8> {
        match s.0 {
            0 => None,
            c => self.to_byte.get(c as usize - 1).copied(),
        }
    }

    /// Printable form of a symbol, with `#` for the filler and `$` for the
    /// terminator.
    pub fn display(&self, s: Symbol) -> String {
        if s == Symbol::FILLER {
            "#".into()
        } else if s == self.terminator() {
            "$".into()
        } else {
            match self.decode(s) {
                Some(b) if b.is_ascii_graphic() => (b as char).to_string(),
                Some(b) => format!("\\x{b:02x}"),
                None => format!("<{}>", s.0),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_follow_byte_order() {
        let cm = CodeMap::from_strings([&b"ba"[..], b"ab"]);
        assert_eq!(cm.sigma(), 2);
        assert_eq!(cm.encode(b'a'), Some(Symbol(1)));
        assert_eq!(cm.encode(b'b'), Some(Symbol(2)));
        assert_eq!(cm.terminator(), Symbol(3));
        assert_eq!(cm.encode(b'c'), None);
        assert_eq!(cm.width_bits(), 2);
    }

    #[test]
    fn width_rule() {
        let w = |sigma: usize| CodeMap::from_bytes((1..=sigma as u8).collect::<Vec<_>>()).width_bits();
        assert_eq!(w(0), 1);
        assert_eq!(w(1), 2);
        assert_eq!(w(2), 2);
        assert_eq!(w(3), 3);
        assert_eq!(w(6), 3);
        assert_eq!(w(25), 5);
        assert_eq!(w(254), 8);
        assert_eq!(w(255), 9);
    }

    #[test]
    fn table_round_trip() {
        let cm = CodeMap::from_bytes(*b"xyz!");
        let back = CodeMap::from_table(cm.table()).unwrap();
        assert_eq!(cm, back);
        let mut bad = *cm.table();
        bad[b'q' as usize] = 9;
        assert!(CodeMap::from_table(&bad).is_none());
    }
}

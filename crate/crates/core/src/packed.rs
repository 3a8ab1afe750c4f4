//! Fixed-width packed strings and word-at-a-time longest common prefix.
//!
//! Character `i` of a word occupies bits `[i*w, (i+1)*w)`, lowest first.
//! Characters never straddle a word: the top `64 mod w` bits of each word
//! are always zero. The XOR of two aligned chunks therefore has its lowest
//! set bit inside the first mismatching character.

use crate::alphabet::Symbol;
use crate::error::{Error, Result};

pub const WORD_BITS: u32 = u64::BITS;

/// How characters are laid out in the packed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum CharMode {
    /// `ceil(log2(sigma + 2))` bits per character.
    #[default]
    Bitpacked,
    /// One byte per character.
    Byte,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedText {
    len: usize,
    width: u32,
    per_word: usize,
    chunk_mask: u64,
    words: Vec<u64>,
}

impl PackedText {
    /// Packs `codes` at `width` bits per character.
    pub fn pack(codes: &[Symbol], width: u32) -> Result<PackedText> {
        let mut text = PackedText::with_width(width, codes.len());
        let limit = 1u32 << width;
        for (i, &c) in codes.iter().enumerate() {
            if u32::from(c.code()) >= limit {
                return Err(Error::CodeOutOfRange {
                    code: c.code(),
                    width,
                });
            }
            text.set(i, c);
        }
        Ok(text)
    }

    /// Zero-filled text of `len` characters.
    pub fn with_width(width: u32, len: usize) -> PackedText {
        assert!((1..=16).contains(&width), "character width {width} out of range");
        let per_word = (WORD_BITS / width) as usize;
        let bits = per_word as u32 * width;
        let chunk_mask = if bits == WORD_BITS { !0 } else { (1u64 << bits) - 1 };
        PackedText {
            len,
            width,
            per_word,
            chunk_mask,
            words: vec![0; len.div_ceil(per_word)],
        }
    }

    pub(crate) fn from_words(width: u32, len: usize, words: Vec<u64>) -> Option<PackedText> {
        let mut t = PackedText::with_width(width, 0);
        if words.len() != len.div_ceil(t.per_word) {
            return None;
        }
        t.len = len;
        t.words = words;
        // padding and tail bits must be clear
        let clean = t.words.iter().all(|w| w & !t.chunk_mask == 0)
            && (len.is_multiple_of(t.per_word)
                || t.words.last().is_none_or(|&w| w >> ((len % t.per_word) as u32 * width) == 0));
        clean.then_some(t)
    }

    /// Packs the first `len` symbols of an iterator without range checks.
    pub fn pack_iter<I>(symbols: I, len: usize, width: u32) -> PackedText
    where
        I: IntoIterator<Item = Symbol>,
    {
        let mut text = PackedText::with_width(width, len);
        let (per_word, w) = (text.per_word, width);
        let mut word = 0usize;
        let mut slot = 0usize;
        let mut acc = 0u64;
        for c in symbols.into_iter().take(len) {
            acc |= u64::from(c.code()) << (slot as u32 * w);
            slot += 1;
            if slot == per_word {
                text.words[word] = acc;
                word += 1;
                slot = 0;
                acc = 0;
            }
        }
        if slot > 0 {
            text.words[word] = acc;
        }
        text
    }

    /// Encodes `bytes` through a byte-to-code table and packs them in one
    /// pass, appending `end` if given. Returns the position of the first
    /// byte whose code is 0.
    pub(crate) fn encode_bytes(
        bytes: &[u8],
        table: &[u8; 256],
        end: Option<Symbol>,
        width: u32,
    ) -> std::result::Result<PackedText, usize> {
        let len = bytes.len() + usize::from(end.is_some());
        let mut text = PackedText::with_width(width, len);
        let per_word = text.per_word;
        for (i, chunk) in bytes.chunks(per_word).enumerate() {
            let mut acc = 0u64;
            let mut missing = false;
            for (slot, &b) in chunk.iter().enumerate() {
                let code = table[b as usize];
                missing |= code == 0;
                acc |= u64::from(code) << (slot as u32 * width);
            }
            if missing {
                let at = chunk.iter().position(|&b| table[b as usize] == 0).unwrap();
                return Err(i * per_word + at);
            }
            text.words[i] = acc;
        }
        if let Some(c) = end {
            text.set(bytes.len(), c);
        }
        Ok(text)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    /// Characters per machine word.
    #[inline]
    pub fn per_word(&self) -> usize {
        self.per_word
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Payload bits, `len * width`.
    pub fn payload_bits(&self) -> u64 {
        self.len as u64 * u64::from(self.width)
    }

    /// Bits of the backing word array.
    pub fn storage_bits(&self) -> u64 {
        self.words.len() as u64 * u64::from(WORD_BITS)
    }

    #[inline]
    pub fn get(&self, i: usize) -> Symbol {
        debug_assert!(i < self.len);
        let shift = (i % self.per_word) as u32 * self.width;
        let mask = (1u64 << self.width) - 1;
        Symbol(((self.words[i / self.per_word] >> shift) & mask) as u16)
    }

    fn set(&mut self, i: usize, c: Symbol) {
        let shift = (i % self.per_word) as u32 * self.width;
        let mask = ((1u64 << self.width) - 1) << shift;
        let w = &mut self.words[i / self.per_word];
        *w = (*w & !mask) | (u64::from(c.code()) << shift);
    }

    pub fn unpack(&self) -> Vec<Symbol> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    #[inline]
    fn cursor(&self, i: usize) -> Cursor {
        let off = (i % self.per_word) as u32;
        Cursor {
            word: i / self.per_word,
            lo: off * self.width,
            hi: (self.per_word as u32 - off) * self.width,
        }
    }
}

/// Word position and shifts of an unaligned start; stepping by `per_word`
/// characters only moves the word index.
#[derive(Clone, Copy)]
struct Cursor {
    word: usize,
    lo: u32,
    hi: u32,
}

impl Cursor {
    /// `per_word` characters starting `step` words past the cursor, zero
    /// past the end.
    #[inline]
    fn chunk(self, t: &PackedText, step: usize) -> u64 {
        let w = self.word + step;
        let lo = t.words.get(w).copied().unwrap_or(0) >> self.lo;
        if self.lo == 0 {
            return lo;
        }
        let hi = t.words.get(w + 1).copied().unwrap_or(0) << self.hi;
        (lo | hi) & t.chunk_mask
    }
}

/// Longest common prefix of `a[i..]` and `b[j..]` (0-based starts; a start
/// at the end yields 0). Both texts must share a width.
#[inline]
pub fn lcp_at(a: &PackedText, i: usize, b: &PackedText, j: usize) -> usize {
    lcp_at_counted(a, i, b, j).0
}

/// As [`lcp_at`], also returning the number of word comparisons made.
pub fn lcp_at_counted(a: &PackedText, i: usize, b: &PackedText, j: usize) -> (usize, usize) {
    debug_assert_eq!(a.width, b.width);
    let max = a.len.saturating_sub(i).min(b.len.saturating_sub(j));
    let step = a.per_word;
    let (ca, cb) = (a.cursor(i), b.cursor(j));
    let mut l = 0;
    let mut words = 0;
    while l < max {
        let x = ca.chunk(a, words) ^ cb.chunk(b, words);
        words += 1;
        if x != 0 {
            l += (x.trailing_zeros() / a.width) as usize;
            return (l.min(max), words);
        }
        l += step;
    }
    (max, words)
}

/// Character-by-character reference for [`lcp_at`].
pub fn lcp_naive(a: &[Symbol], i: usize, b: &[Symbol], j: usize) -> usize {
    a.get(i..)
        .unwrap_or(&[])
        .iter()
        .zip(b.get(j..).unwrap_or(&[]))
        .take_while(|(x, y)| x == y)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn syms(codes: &[u16]) -> Vec<Symbol> {
        codes.iter().map(|&c| Symbol(c)).collect()
    }

    // '#'=0 a=1 b=2 $=3
    fn enc(s: &str) -> Vec<Symbol> {
        s.chars()
            .map(|c| match c {
                '#' => Symbol(0),
                'a' => Symbol(1),
                'b' => Symbol(2),
                '$' => Symbol(3),
                _ => unreachable!(),
            })
            .collect()
    }

    #[test]
    fn sample_text_layout() {
        let t = PackedText::pack(&enc("#bab###"), 2).unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(t.payload_bits(), 14);
        assert_eq!(t.words().len(), 1);
        // # b a b # # #  -> 00 10 01 10 00 00 00, lowest first
        assert_eq!(t.words()[0], 0b00_00_00_10_01_10_00);
        assert_eq!(t.unpack(), enc("#bab###"));
    }

    #[test]
    fn encode_bytes_matches_pack() {
        let mut table = [0u8; 256];
        table[b'a' as usize] = 1;
        table[b'b' as usize] = 2;
        let bytes = b"abbaabababbbaaabbbaabbababaabbbababbbab".repeat(3);
        let codes: Vec<Symbol> = bytes.iter().map(|&b| Symbol(table[b as usize].into())).collect();
        for w in [2u32, 3, 5] {
            let mut with_end = codes.clone();
            with_end.push(Symbol(3));
            let p = PackedText::encode_bytes(&bytes, &table, Some(Symbol(3)), w).unwrap();
            assert_eq!(p, PackedText::pack(&with_end, w).unwrap());
            let p = PackedText::encode_bytes(&bytes, &table, None, w).unwrap();
            assert_eq!(p, PackedText::pack(&codes, w).unwrap());
        }
        let mut bad = bytes.clone();
        bad[70] = b'z';
        assert_eq!(PackedText::encode_bytes(&bad, &table, None, 2), Err(70));
        assert_eq!(PackedText::encode_bytes(b"", &table, None, 2).unwrap().len(), 0);
    }

    #[test]
    fn empty_pack() {
        let t = PackedText::pack(&[], 5).unwrap();
        assert_eq!(t.len(), 0);
        assert!(t.words().is_empty());
    }

    #[test]
    fn code_too_wide() {
        assert!(matches!(
            PackedText::pack(&syms(&[1, 4]), 2),
            Err(Error::CodeOutOfRange { code: 4, width: 2 })
        ));
    }

    #[test]
    fn lcp_examples() {
        let a = PackedText::pack(&enc("abab"), 2).unwrap();
        let b = PackedText::pack(&enc("abba"), 2).unwrap();
        assert_eq!(lcp_at(&a, 0, &b, 0), 2);
        let t = PackedText::pack(&enc("#bab###"), 2).unwrap();
        let p = PackedText::pack(&enc("bab$"), 2).unwrap();
        assert_eq!(lcp_at(&t, 1, &p, 0), 3);
        assert_eq!(lcp_at(&a, 0, &a, 0), 4);
        assert_eq!(lcp_at(&a, 4, &b, 0), 0);
        assert_eq!(lcp_at(&a, 1, &b, 4), 0);
    }

    #[test]
    fn word_count_accounting() {
        for width in [1u32, 2, 3, 5, 7, 8, 9] {
            let per = (64 / width) as usize;
            for n in [0usize, 1, per - 1, per, per + 1, 10 * per + 3] {
                let t = PackedText::with_width(width, n);
                assert_eq!(t.words().len(), n.div_ceil(per));
            }
        }
    }

    #[test]
    fn counted_words_scale_with_match_length() {
        let codes: Vec<Symbol> = (0..1000).map(|i| Symbol(1 + (i % 3) as u16)).collect();
        let t = PackedText::pack(&codes, 2).unwrap();
        let (l, words) = lcp_at_counted(&t, 0, &t, 0);
        assert_eq!(l, 1000);
        assert_eq!(words, 1000usize.div_ceil(32));
    }

    fn text_strategy() -> impl Strategy<Value = (u32, Vec<u16>, Vec<u16>, usize, usize)> {
        prop_oneof![Just(1u32), Just(2u32), Just(4u32), Just(8u32), Just(3u32), Just(5u32)].prop_flat_map(|w| {
            let max = (1u16 << w) - 1;
            // small alphabets make long common prefixes likely
            let alpha = max.min(3);
            (
                Just(w),
                proptest::collection::vec(0..=alpha, 0..300),
                proptest::collection::vec(0..=alpha, 0..300),
                0usize..310,
                0usize..310,
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn lcp_matches_reference((w, a, b, i, j) in text_strategy()) {
            let (sa, sb) = (syms(&a), syms(&b));
            let pa = PackedText::pack(&sa, w).unwrap();
            let pb = PackedText::pack(&sb, w).unwrap();
            prop_assert_eq!(lcp_at(&pa, i, &pb, j), lcp_naive(&sa, i, &sb, j));
            // self-overlap with shared prefixes
            prop_assert_eq!(lcp_at(&pa, i, &pa, j), lcp_naive(&sa, i, &sa, j));
        }

        #[test]
        fn pack_round_trip(w in 1u32..=9, codes in proptest::collection::vec(0u16..512, 0..200)) {
            let max = (1u16 << w) - 1;
            let codes: Vec<u16> = codes.into_iter().map(|c| c & max).collect();
            let s = syms(&codes);
            let p = PackedText::pack(&s, w).unwrap();
            prop_assert_eq!(p.unpack(), s.clone());
            prop_assert_eq!(PackedText::pack_iter(s.iter().copied(), s.len(), w), p.clone());
            prop_assert_eq!(PackedText::from_words(w, p.len(), p.words().to_vec()), Some(p));
        }
    }
}

//! Little-endian binary files for packed indexes and plain automata.
//!
//! Loading parses the whole layout first (short input gives
//! [`FormatError::Truncated`]), then checks the trailing CRC-32, then
//! validates the contents.

use std::path::Path;

use super::{BranchTable, Padfa};
use crate::alphabet::{CodeMap, Symbol};
use crate::automaton::{validate, Adfa};
use crate::error::{Error, FormatError, Result};
use crate::packed::{CharMode, PackedText};
use crate::succinct::{width_for, Backend, Fid, IntVec};
use crate::Mode;

pub const INDEX_MAGIC: &[u8; 8] = b"PADFA1\0\0";
pub const PLAIN_MAGIC: &[u8; 8] = b"ADFA1\0\0\0";
pub const FORMAT_VERSION: u32 = 1;

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, x: u8) {
        self.0.push(x);
    }
    fn u16(&mut self, x: u16) {
        self.0.extend_from_slice(&x.to_le_bytes());
    }
    fn u32(&mut self, x: u32) {
        self.0.extend_from_slice(&x.to_le_bytes());
    }
    fn u64(&mut self, x: u64) {
        self.0.extend_from_slice(&x.to_le_bytes());
    }
    fn words(&mut self, ws: &[u64]) {
        self.u64(ws.len() as u64);
        ws.iter().for_each(|&w| self.u64(w));
    }
    fn intvec(&mut self, v: &IntVec) {
        self.u8(v.width() as u8);
        self.u64(v.len() as u64);
        self.words(v.words());
    }
    fn finish(mut self) -> Vec<u8> {
        let crc = crc32fast::hash(&self.0);
        self.u32(crc);
        self.0
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> std::result::Result<&'a [u8], FormatError> {
        let end = self.pos.checked_add(n).ok_or(FormatError::Truncated)?;
        let s = self.buf.get(self.pos..end).ok_or(FormatError::Truncated)?;
        self.pos = end;
        Ok(s)
    }
    fn u8(&mut self) -> std::result::Result<u8, FormatError> {
        Ok(self.take(1)?[0])
    }
    fn u16(&mut self) -> std::result::Result<u16, FormatError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> std::result::Result<u32, FormatError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> std::result::Result<u64, FormatError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    /// A count of items of `size` bytes each that must fit in the rest of
    /// the buffer.
    fn count(&mut self, size: usize) -> std::result::Result<usize, FormatError> {
        let c = self.u64()?;
        let left = (self.buf.len() - self.pos) as u64;
        if c.checked_mul(size as u64).is_none_or(|b| b > left) {
            return Err(FormatError::Truncated);
        }
        Ok(c as usize)
    }
    fn fits(&self, n: usize, size: usize) -> std::result::Result<(), FormatError> {
        match n.checked_mul(size) {
            Some(b) if b <= self.buf.len() - self.pos => Ok(()),
            _ => Err(FormatError::Truncated),
        }
    }
    fn array<T>(
        &mut self,
        n: usize,
        mut f: impl FnMut(&mut Self) -> std::result::Result<T, FormatError>,
    ) -> std::result::Result<Vec<T>, FormatError> {
        (0..n).map(|_| f(self)).collect()
    }
    fn words(&mut self) -> std::result::Result<Vec<u64>, FormatError> {
        let n = self.count(8)?;
        self.array(n, Self::u64)
    }
    fn intvec(&mut self) -> std::result::Result<(u32, usize, Vec<u64>), FormatError> {
        let width = u32::from(self.u8()?);
        let len = self.u64()?;
        let words = self.words()?;
        let len = usize::try_from(len).map_err(|_| corrupt("integer vector length"))?;
        Ok((width, len, words))
    }
    fn table(&mut self) -> std::result::Result<[u8; 256], FormatError> {
        Ok(self.take(256)?.try_into().unwrap())
    }
    /// Splits off and checks the trailing CRC once everything is parsed.
    fn finish(self) -> std::result::Result<(), FormatError> {
        let body = self.pos;
        let mut tail = Reader { buf: self.buf, pos: body };
        let stored = tail.u32()?;
        if tail.pos != self.buf.len() {
            return Err(FormatError::Corrupt("trailing bytes after checksum".into()));
        }
        let computed = crc32fast::hash(&self.buf[..body]);
        if stored != computed {
            return Err(FormatError::ChecksumMismatch { stored, computed });
        }
        Ok(())
    }
}

fn corrupt(msg: impl Into<String>) -> FormatError {
    FormatError::Corrupt(msg.into())
}

fn header(r: &mut Reader<'_>, magic: &[u8; 8]) -> std::result::Result<(), FormatError> {
    if r.buf.len() < 8 {
        return if magic.starts_with(r.buf) {
            Err(FormatError::Truncated)
        } else {
            Err(FormatError::BadMagic)
        };
    }
    if r.take(8)? != magic {
        return Err(FormatError::BadMagic);
    }
    let v = r.u32()?;
    if v != FORMAT_VERSION {
        return Err(FormatError::UnsupportedVersion(v));
    }
    Ok(())
}

fn mode_byte(m: Mode) -> u8 {
    match m {
        Mode::Membership => 0,
        Mode::Reach => 1,
    }
}

fn parse_mode(b: u8) -> std::result::Result<Mode, FormatError> {
    match b {
        0 => Ok(Mode::Membership),
        1 => Ok(Mode::Reach),
        _ => Err(corrupt(format!("mode byte {b}"))),
    }
}

fn fid_matches(len: usize, words: Vec<u64>, supers: &[u64], blocks: &[u16]) -> std::result::Result<Fid, FormatError> {
    if words.len() != len.div_ceil(64) {
        return Err(corrupt("bit vector word count"));
    }
    if !len.is_multiple_of(64) && words.last().is_some_and(|&w| w >> (len % 64) != 0) {
        return Err(corrupt("bit vector padding"));
    }
    let f = Fid::from_words(words, len);
    if f.directory() != (supers, blocks) {
        return Err(corrupt("rank directory"));
    }
    Ok(f)
}

/// Everything an index file holds, validated.
pub(crate) struct IndexParts {
    pub(crate) mode: Mode,
    pub(crate) backend: Backend,
    pub(crate) char_mode: CharMode,
    pub(crate) alphabet: CodeMap,
    pub(crate) k: u64,
    pub(crate) text: PackedText,
    pub(crate) light: Fid,
    pub(crate) branches: BranchTable,
    pub(crate) destinations: IntVec,
    pub(crate) accepting: Option<Fid>,
}

impl Padfa {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer(Vec::new());
        w.0.extend_from_slice(INDEX_MAGIC);
        w.u32(FORMAT_VERSION);
        w.u8(mode_byte(self.mode));
        w.u8(match self.backend {
            Backend::EdgeList => 0,
            Backend::Biased => 1,
        });
        w.u8(match self.char_mode {
            CharMode::Bitpacked => 0,
            CharMode::Byte => 1,
        });
        w.u8(self.text.width() as u8);
        w.u64(self.text.len() as u64);
        w.u64(self.k);
        w.u64(self.alphabet.sigma() as u64);
        w.0.extend_from_slice(self.alphabet.table());
        w.words(self.text.words());

        w.u64(self.light.len() as u64);
        w.words(self.light.words());
        let (supers, blocks) = self.light.directory();
        w.words(supers);
        w.u64(blocks.len() as u64);
        blocks.iter().for_each(|&b| w.u16(b));

        let b = &self.branches;
        w.u64(b.len() as u64);
        w.intvec(&b.offsets);
        w.intvec(&b.labels);
        if self.backend == Backend::Biased {
            b.weights.iter().for_each(|&x| w.u64(x));
            b.roots.iter().for_each(|&x| w.u16(x));
            b.left.iter().for_each(|&x| w.u16(x));
            b.right.iter().for_each(|&x| w.u16(x));
        }
        w.intvec(&self.destinations);

        if let Some(acc) = &self.accepting {
            w.u64(acc.len() as u64);
            w.words(acc.words());
        }
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Padfa> {
        Ok(Padfa::from_parts(parse_index(bytes)?))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Padfa> {
        Padfa::from_bytes(&std::fs::read(path)?)
    }
}

fn parse_index(bytes: &[u8]) -> std::result::Result<IndexParts, FormatError> {
    let mut r = Reader { buf: bytes, pos: 0 };
    header(&mut r, INDEX_MAGIC)?;
    let (mode, backend, char_mode, width) = (r.u8()?, r.u8()?, r.u8()?, r.u8()?);
    let (n, k, sigma) = (r.u64()?, r.u64()?, r.u64()?);
    let table = r.table()?;
    let text_words = r.words()?;
    let b_len = r.u64()?;
    let b_words = r.words()?;
    let supers = r.words()?;
    let nblocks = r.count(2)?;
    let blocks = r.array(nblocks, Reader::u16)?;
    let biased = backend == 1;
    let ngroups = r.u64()?;
    let offsets = r.intvec()?;
    let labels = r.intvec()?;
    let tree = if biased {
        let nl = labels.1;
        let ng = usize::try_from(ngroups).map_err(|_| FormatError::Truncated)?;
        r.fits(nl, 12)?;
        r.fits(ng, 2)?;
        let weights = r.array(nl, Reader::u64)?;
        let roots = r.array(ng, Reader::u16)?;
        let left = r.array(nl, Reader::u16)?;
        let right = r.array(nl, Reader::u16)?;
        Some((weights, roots, left, right))
    } else {
        None
    };
    let dest = r.intvec()?;
    let accepting = if mode == 1 {
        let len = r.u64()?;
        Some((len, r.words()?))
    } else {
        None
    };
    r.finish()?;

    // contents
    let mode = parse_mode(mode)?;
    let backend = match backend {
        0 => Backend::EdgeList,
        1 => Backend::Biased,
        b => return Err(corrupt(format!("backend byte {b}"))),
    };
    let char_mode = match char_mode {
        0 => CharMode::Bitpacked,
        1 => CharMode::Byte,
        b => return Err(corrupt(format!("char mode byte {b}"))),
    };
    let alphabet = CodeMap::from_table(&table).ok_or_else(|| corrupt("code table"))?;
    if sigma != alphabet.sigma() as u64 {
        return Err(corrupt("sigma does not match code table"));
    }
    let expected_width = match char_mode {
        CharMode::Bitpacked => alphabet.width_bits(),
        CharMode::Byte => 8,
    };
    if u32::from(width) != expected_width {
        return Err(corrupt(format!("width {width}, expected {expected_width}")));
    }
    if n == 0 || n > u64::from(u32::MAX) {
        return Err(corrupt(format!("vertex count {n}")));
    }
    let n = n as usize;
    let text = PackedText::from_words(expected_width, n, text_words).ok_or_else(|| corrupt("text words"))?;
    if text.unpack().iter().any(|s| s.code() > alphabet.max_code()) {
        return Err(corrupt("text code out of range"));
    }
    if b_len != n as u64 {
        return Err(corrupt("light bit vector length"));
    }
    let light = fid_matches(n, b_words, &supers, &blocks)?;

    if ngroups != light.count_ones() as u64 {
        return Err(corrupt("branch count does not match light bits"));
    }
    let ngroups = ngroups as usize;
    let intvec = |(width, len, words): (u32, usize, Vec<u64>), what: &str| {
        IntVec::from_words(width, len, words).ok_or_else(|| corrupt(format!("{what} array")))
    };
    let offsets = intvec(offsets, "offset")?;
    let labels = intvec(labels, "label")?;
    let destinations = intvec(dest, "destination")?;
    let nl = labels.len();
    if offsets.len() != ngroups + 1
        || offsets.width() != width_for(nl as u64)
        || offsets.get(0) != 0
        || offsets.get(ngroups) != nl as u64
        || (0..ngroups).any(|g| offsets.get(g) >= offsets.get(g + 1))
    {
        return Err(corrupt("branch offsets"));
    }
    if labels.width() != expected_width {
        return Err(corrupt("label width"));
    }
    let mut groups = Vec::with_capacity(ngroups);
    for g in 0..ngroups {
        let range = offsets.get(g) as usize..offsets.get(g + 1) as usize;
        let ls: Vec<Symbol> = range.clone().map(|i| Symbol(labels.get(i) as u16)).collect();
        if ls.windows(2).any(|w| w[0] >= w[1]) || ls.iter().any(|s| s.code() == 0 || s.code() > alphabet.max_code()) {
            return Err(corrupt(format!("branch {g} labels")));
        }
        let ws = match &tree {
            Some((weights, ..)) => weights[range].to_vec(),
            None => Vec::new(),
        };
        if ws.contains(&0) {
            return Err(corrupt(format!("branch {g} weights")));
        }
        groups.push((ls, ws));
    }
    let branches = BranchTable::build(backend, expected_width, &groups);
    if let Some((_, roots, left, right)) = &tree {
        if roots != &branches.roots || left != &branches.left || right != &branches.right {
            return Err(corrupt("biased tree links"));
        }
    }
    if destinations.len() != nl
        || destinations.width() != width_for(n as u64 - 1)
        || destinations.iter().any(|d| d >= n as u64)
    {
        return Err(corrupt("destinations"));
    }
    let accepting = match accepting {
        Some((len, words)) => {
            if len != n as u64 || words.len() != n.div_ceil(64) {
                return Err(corrupt("accepting bit vector"));
            }
            if !n.is_multiple_of(64) && words.last().is_some_and(|&w| w >> (n % 64) != 0) {
                return Err(corrupt("accepting bit vector padding"));
            }
            Some(Fid::from_words(words, n))
        }
        None => None,
    };
    Ok(IndexParts {
        mode,
        backend,
        char_mode,
        alphabet,
        k,
        text,
        light,
        branches,
        destinations,
        accepting,
    })
}

impl Adfa {
    /// Serializes the automaton in plain CSR form.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer(Vec::new());
        w.0.extend_from_slice(PLAIN_MAGIC);
        w.u32(FORMAT_VERSION);
        w.u8(mode_byte(self.mode()));
        w.u64(self.vertex_count() as u64);
        w.u64(u64::from(self.root()));
        w.u64(self.edge_count() as u64);
        w.0.extend_from_slice(self.alphabet().table());
        for v in 0..self.vertex_count() as u32 {
            w.u32(self.edge_range(v).start as u32);
        }
        w.u32(self.edge_count() as u32);
        for (_, c, _) in self.edges() {
            w.u16(c.code());
        }
        for (_, _, t) in self.edges() {
            w.u32(t);
        }
        let acc = Fid::from_bits((0..self.vertex_count() as u32).map(|v| self.is_accepting(v)));
        w.words(acc.words());
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Adfa> {
        let mut r = Reader { buf: bytes, pos: 0 };
        header(&mut r, PLAIN_MAGIC)?;
        let mode = r.u8()?;
        let n = r.u64()?;
        let root = r.u64()?;
        let e = r.u64()?;
        let table = r.table()?;
        let left = (bytes.len() - r.pos) as u64;
        if n.checked_add(1).and_then(|x| x.checked_mul(4)).is_none_or(|b| b > left)
            || e.checked_mul(6).is_none_or(|b| b > left)
        {
            return Err(FormatError::Truncated.into());
        }
        let offsets = r.array(n as usize + 1, Reader::u32)?;
        let labels = r.array(e as usize, Reader::u16)?;
        let targets = r.array(e as usize, Reader::u32)?;
        let acc_words = r.words()?;
        r.finish()?;

        let mode = parse_mode(mode)?;
        let alphabet = CodeMap::from_table(&table).ok_or_else(|| corrupt("code table"))?;
        let n = n as usize;
        if n == 0 || root >= n as u64 || acc_words.len() != n.div_ceil(64) || n > u32::MAX as usize {
            return Err(corrupt("automaton header").into());
        }
        if offsets[0] != 0
            || offsets[n] as u64 != e
            || offsets.windows(2).any(|w| w[0] > w[1])
            || targets.iter().any(|&t| t as usize >= n)
        {
            return Err(corrupt("automaton edges").into());
        }
        let acc = Fid::from_words(acc_words, n);
        let accepting: Vec<bool> = (0..n).map(|i| acc.get(i)).collect();
        let a = Adfa::from_csr(
            mode,
            alphabet,
            root as u32,
            offsets,
            labels.into_iter().map(Symbol).collect(),
            targets,
            accepting,
        );
        let violations = validate(&a);
        if !violations.is_empty() {
            return Err(Error::InvalidAutomaton(violations));
        }
        Ok(a)
    }
}

/// Either kind of index file, recognised by its magic.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum AnyIndex {
    Packed(Padfa),
    Plain(Adfa),
}

impl AnyIndex {
    pub fn mode(&self) -> Mode {
        match self {
            AnyIndex::Packed(p) => p.mode(),
            AnyIndex::Plain(a) => a.mode(),
        }
    }

    /// Membership or reach query, whichever the index holds.
    pub fn query(&self, pattern: &[u8]) -> bool {
        match self {
            AnyIndex::Packed(p) => p.query(pattern),
            AnyIndex::Plain(a) => match a.mode() {
                Mode::Membership => a.accepts_baseline(pattern),
                Mode::Reach => a.reach_baseline(pattern),
            },
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        match self {
            AnyIndex::Packed(p) => p.to_bytes(),
            AnyIndex::Plain(a) => a.to_bytes(),
        }
    }

    pub fn size_bits(&self) -> u64 {
        match self {
            AnyIndex::Packed(p) => p.space_report().total_bits,
            AnyIndex::Plain(a) => a.size_bits(),
        }
    }
}

pub fn load_any(bytes: &[u8]) -> Result<AnyIndex> {
    // a short prefix of the plain magic is a truncated plain stream
    let n = bytes.len().min(PLAIN_MAGIC.len());
    if n > 0 && bytes[..n] == PLAIN_MAGIC[..n] {
        Adfa::from_bytes(bytes).map(AnyIndex::Plain)
    } else {
        Padfa::from_bytes(bytes).map(AnyIndex::Packed)
    }
}

impl Padfa {
    /// The index's own query kind without tracing.
    #[inline]
    pub fn query(&self, pattern: &[u8]) -> bool {
        self.run(pattern, &mut super::search::NoTrace).accepted()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{build_suffix_dawg, build_trie, minimize, Dictionary};
    use crate::index::BuildOptions;

    fn sample() -> Adfa {
        let d = Dictionary::from_lines(b"ab\nabab\nababa\nbb\nbbab\nbbaba").unwrap();
        minimize(&build_trie(&d).unwrap()).unwrap()
    }

    fn all_builds() -> Vec<Padfa> {
        let mut out = Vec::new();
        for a in [sample(), build_trie(&Dictionary::default()).unwrap(), build_suffix_dawg(b"mississippi").unwrap()] {
            for backend in [Backend::EdgeList, Backend::Biased] {
                for char_mode in [CharMode::Bitpacked, CharMode::Byte] {
                    out.push(Padfa::build(&a, BuildOptions { backend, char_mode }).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn round_trip() {
        for p in all_builds() {
            let bytes = p.to_bytes();
            assert_eq!(&bytes[..8], INDEX_MAGIC);
            let q = Padfa::from_bytes(&bytes).unwrap();
            assert_eq!(p, q);
            assert_eq!(q.to_bytes(), bytes);
        }
    }

    #[test]
    fn plain_round_trip() {
        for a in [sample(), build_suffix_dawg(b"abcab").unwrap(), build_trie(&Dictionary::default()).unwrap()] {
            let bytes = a.to_bytes();
            let b = Adfa::from_bytes(&bytes).unwrap();
            assert_eq!(a, b);
            assert!(matches!(load_any(&bytes).unwrap(), AnyIndex::Plain(_)));
        }
    }

    #[test]
    fn error_classes() {
        let bytes = Padfa::build(&sample(), BuildOptions::default()).unwrap().to_bytes();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(Padfa::from_bytes(&bad), Err(Error::Format(FormatError::BadMagic))));
        let mut bad = bytes.clone();
        bad[8] = 2;
        assert!(matches!(Padfa::from_bytes(&bad), Err(Error::Format(FormatError::UnsupportedVersion(2)))));
        for cut in [0, 4, 8, 11, 20, 300, bytes.len() - 1] {
            assert!(
                matches!(Padfa::from_bytes(&bytes[..cut]), Err(Error::Format(FormatError::Truncated))),
                "cut {cut}"
            );
        }
        let mut bad = bytes.clone();
        let last = bad.len() - 6;
        bad[last] ^= 1;
        assert!(matches!(Padfa::from_bytes(&bad), Err(Error::Format(FormatError::ChecksumMismatch { .. }))));
        let mut bad = bytes.clone();
        bad.push(0);
        assert!(matches!(Padfa::from_bytes(&bad), Err(Error::Format(FormatError::Corrupt(_)))));
    }

    #[test]
    fn every_flipped_byte_is_rejected() {
        let bytes = Padfa::build(&sample(), BuildOptions { backend: Backend::Biased, ..Default::default() })
            .unwrap()
            .to_bytes();
        for i in 0..bytes.len() {
            let mut bad = bytes.clone();
            bad[i] ^= 0x10;
            assert!(Padfa::from_bytes(&bad).is_err(), "byte {i}");
        }
    }

    #[test]
    fn corrupt_contents_with_valid_checksum() {
        // set padding bits in the last destination word and re-seal the checksum
        let p = Padfa::build(&sample(), BuildOptions::default()).unwrap();
        let bytes = p.to_bytes();
        let body = &bytes[..bytes.len() - 4];
        let last_dest = body.len() - 4;
        let mut w = Writer(body.to_vec());
        w.0[last_dest..].copy_from_slice(&99u32.to_le_bytes());
        let resealed = w.finish();
        assert!(matches!(Padfa::from_bytes(&resealed), Err(Error::Format(FormatError::Corrupt(_)))));
    }
}

use crate::alphabet::{CodeMap, FILLER_BYTE};
use crate::error::{Error, Result};

/// A set of distinct byte strings, none containing the filler byte.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dictionary {
    strings: Vec<Vec<u8>>,
}

impl Dictionary {
    /// Checks distinctness (sort and compare neighbours) and the filler
    /// restriction. Entry order is kept.
    pub fn new(strings: Vec<Vec<u8>>) -> Result<Dictionary> {
        if let Some(index) = strings.iter().position(|s| s.contains(&FILLER_BYTE)) {
            return Err(Error::FillerByte { index });
        }
        let mut order: Vec<usize> = (0..strings.len()).collect();
        order.sort_by(|&a, &b| strings[a].cmp(&strings[b]).then(a.cmp(&b)));
        for w in order.windows(2) {
            if strings[w[0]] == strings[w[1]] {
                let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
                return Err(Error::DuplicateString { first, second });
            }
        }
        Ok(Dictionary { strings })
    }

    /// Parses newline-delimited raw bytes. A trailing LF is optional; an
    /// empty input is the empty dictionary.
    pub fn from_lines(data: &[u8]) -> Result<Dictionary> {
        Dictionary::new(split_lines(data))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.strings.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        self.strings.iter().map(Vec::as_slice)
    }

    pub fn get(&self, i: usize) -> Option<&[u8]> {
        self.strings.get(i).map(Vec::as_slice)
    }

    pub fn contains(&self, s: &[u8]) -> bool {
        self.strings.iter().any(|x| x == s)
    }

    /// Length of the longest string.
    pub fn max_len(&self) -> usize {
        self.strings.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn total_len(&self) -> usize {
        self.strings.iter().map(Vec::len).sum()
    }

    pub fn code_map(&self) -> CodeMap {
        CodeMap::from_strings(self.iter())
    }

    pub fn into_strings(self) -> Vec<Vec<u8>> {
        self.strings
    }
}

pub(crate) fn split_lines(data: &[u8]) -> Vec<Vec<u8>> {
    if data.is_empty() {
        return Vec::new();
    }
    let body = data.strip_suffix(b"\n").unwrap_or(data);
    body.split(|&b| b == b'\n').map(<[u8]>::to_vec).collect()
}

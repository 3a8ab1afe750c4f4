use crate::error::{Error, Result};

const WORD: usize = 64;
pub const BLOCK_BITS: usize = 512;
pub const SUPERBLOCK_BITS: usize = 65536;
const WORDS_PER_BLOCK: usize = BLOCK_BITS / WORD;
const BLOCKS_PER_SUPER: usize = SUPERBLOCK_BITS / BLOCK_BITS;

/// Bit string with a two-level rank directory.
///
/// `rank1(i)` counts ones in the first `i` bits; `select1(j)` is the
/// smallest `i` with `rank1(i) = j`, i.e. the 1-based position of the
/// `j`-th one.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Fid {
    len: usize,
    words: Vec<u64>,
    supers: Vec<u64>,
    blocks: Vec<u16>,
    ones: usize,
}

impl Fid {
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Fid {
        let mut words = Vec::new();
        let mut len = 0usize;
        for b in bits {
            if len.is_multiple_of(WORD) {
                words.push(0);
            }
            if b {
                *words.last_mut().unwrap() |= 1 << (len % WORD);
            }
            len += 1;
        }
        Fid::from_words(words, len)
    }

    /// Builds from raw words; bits past `len` must be zero.
    pub fn from_words(words: Vec<u64>, len: usize) -> Fid {
        debug_assert_eq!(words.len(), len.div_ceil(WORD));
        let nblocks = len.div_ceil(BLOCK_BITS);
        let nsupers = len.div_ceil(SUPERBLOCK_BITS);
        let mut supers = Vec::with_capacity(nsupers);
        let mut blocks = Vec::with_capacity(nblocks);
        let mut total = 0u64;
        let mut in_super = 0u64;
        for b in 0..nblocks {
            if b % BLOCKS_PER_SUPER == 0 {
                supers.push(total);
                in_super = 0;
            }
            blocks.push(in_super as u16);
            let start = b * WORDS_PER_BLOCK;
            let end = (start + WORDS_PER_BLOCK).min(words.len());
            let c: u64 = words[start..end].iter().map(|w| u64::from(w.count_ones())).sum();
            total += c;
            in_super += c;
        }
        Fid {
            len,
            words,
            supers,
            blocks,
            ones: total as usize,
        }
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
    pub fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    /// Number of ones in bits `[0, i)`, for `0 <= i <= len`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        if i == self.len {
            return self.ones;
        }
        let block = i / BLOCK_BITS;
        let mut r = self.supers[i / SUPERBLOCK_BITS] as usize + self.blocks[block] as usize;
        let w = i / WORD;
        for &x in &self.words[block * WORDS_PER_BLOCK..w] {
            r += x.count_ones() as usize;
        }
        let rem = i % WORD;
        if rem > 0 {
            r += (self.words[w] & ((1u64 << rem) - 1)).count_ones() as usize;
        }
        r
    }

    /// 1-based position of the `j`-th one, for `1 <= j <= count_ones()`.
    pub fn select1(&self, j: usize) -> Result<usize> {
        if j == 0 || j > self.ones {
            return Err(Error::SelectOutOfRange {
                rank: j,
                ones: self.ones,
            });
        }
        let target = (j - 1) as u64;
        // last superblock with fewer than j ones before it
        let s = self.supers.partition_point(|&r| r <= target) - 1;
        let within = target - self.supers[s];
        let first = s * BLOCKS_PER_SUPER;
        let last = ((s + 1) * BLOCKS_PER_SUPER).min(self.blocks.len());
        let b = first + self.blocks[first..last].partition_point(|&r| u64::from(r) <= within) - 1;
        let mut left = (within - u64::from(self.blocks[b])) as u32;
        let mut w = b * WORDS_PER_BLOCK;
        loop {
            let c = self.words[w].count_ones();
            if left < c {
                return Ok(w * WORD + select_in_word(self.words[w], left) as usize + 1);
            }
            left -= c;
            w += 1;
        }
    }

    /// Bits of the rank directory (excluding the bit string itself).
    pub fn directory_bits(&self) -> u64 {
        self.supers.len() as u64 * 64 + self.blocks.len() as u64 * 16
    }

    pub fn total_bits(&self) -> u64 {
        self.len as u64 + self.directory_bits()
    }

    pub(crate) fn directory(&self) -> (&[u64], &[u16]) {
        (&self.supers, &self.blocks)
    }
}

/// Position (0-based) of the `k`-th set bit (0-based) of `w`.
#[inline]
fn select_in_word(mut w: u64, k: u32) -> u32 {
    for _ in 0..k {
        w &= w - 1;
    }
    w.trailing_zeros()
}

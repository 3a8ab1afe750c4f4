/// Fixed-width unsigned integers packed back to back, lowest bits first.
/// Values may straddle word boundaries.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntVec {
    width: u32,
    len: usize,
    words: Vec<u64>,
}

/// Bits needed to hold `max`, at least 1.
pub fn width_for(max: u64) -> u32 {
    (64 - max.leading_zeros()).max(1)
}

impl IntVec {
    pub fn from_values(values: &[u64], width: u32) -> IntVec {
        assert!((1..=64).contains(&width));
        let mut v = IntVec {
            width,
            len: values.len(),
            words: vec![0; (values.len() * width as usize).div_ceil(64)],
        };
        for (i, &x) in values.iter().enumerate() {
            debug_assert!(width == 64 || x >> width == 0);
            let bit = i * width as usize;
            let (w, off) = (bit / 64, (bit % 64) as u32);
            v.words[w] |= x << off;
            if off + width > 64 {
                v.words[w + 1] |= x >> (64 - off);
            }
        }
        v
    }

    /// Packs `values` at the smallest width holding their maximum.
    pub fn minimal(values: &[u64]) -> IntVec {
        IntVec::from_values(values, width_for(values.iter().copied().max().unwrap_or(0)))
    }

    /// Rebuilds from raw parts; `None` if the word count is wrong or the
    /// tail bits are not clear.
    pub(crate) fn from_words(width: u32, len: usize, words: Vec<u64>) -> Option<IntVec> {
        if !(1..=64).contains(&width) {
            return None;
        }
        let bits = len.checked_mul(width as usize)?;
        if words.len() != bits.div_ceil(64) {
            return None;
        }
        if bits % 64 != 0 && words.last().is_some_and(|&w| w >> (bits % 64) != 0) {
            return None;
        }
        Some(IntVec { width, len, words })
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        let bit = i * self.width as usize;
        let (w, off) = (bit / 64, (bit % 64) as u32);
        let mut x = self.words[w] >> off;
        if off + self.width > 64 {
            x |= self.words[w + 1] << (64 - off);
        }
        if self.width == 64 {
            x
        } else {
            x & ((1u64 << self.width) - 1)
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

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    /// `len · width`.
    pub fn payload_bits(&self) -> u64 {
        self.len as u64 * u64::from(self.width)
    }

    pub fn storage_bits(&self) -> u64 {
        self.words.len() as u64 * 64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn widths() {
        assert_eq!(width_for(0), 1);
        assert_eq!(width_for(1), 1);
        assert_eq!(width_for(6), 3);
        assert_eq!(width_for(7), 3);
        assert_eq!(width_for(8), 4);
        assert_eq!(width_for(u64::MAX), 64);
    }

    #[test]
    fn straddling_values() {
        let vals: Vec<u64> = (0..40).map(|i| (i * 37) % 128).collect();
        let v = IntVec::from_values(&vals, 7);
        assert_eq!(v.words().len(), 5);
        assert_eq!(v.iter().collect::<Vec<_>>(), vals);
        let w = IntVec::from_words(7, 40, v.words().to_vec()).unwrap();
        assert_eq!(v, w);
        assert!(IntVec::from_words(7, 41, v.words().to_vec()).is_some());
        assert!(IntVec::from_words(7, 30, v.words().to_vec()).is_none());
    }

    proptest! {
        #[test]
        fn round_trip(vals in proptest::collection::vec(any::<u64>(), 0..200), width in 1u32..=64) {
            let vals: Vec<u64> = vals.into_iter().map(|x| if width == 64 { x } else { x & ((1 << width) - 1) }).collect();
            let v = IntVec::from_values(&vals, width);
            prop_assert_eq!(v.iter().collect::<Vec<_>>(), vals.clone());
            prop_assert_eq!(IntVec::from_words(width, vals.len(), v.words().to_vec()), Some(v));
        }
    }
}

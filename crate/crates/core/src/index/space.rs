use std::fmt;

use super::Padfa;
use crate::succinct::Backend;

/// Measured bits per component of an index.
///
/// `text_bits` and `light_bits` are payload sizes (`n·w` and `n`); word
/// padding is reported separately in `padding_bits` and included in
/// `total_bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpaceReport {
    pub n: u64,
    pub k: u64,
    pub sigma: u64,
    pub width: u32,
    pub light_sources: u64,
    pub light_edges: u64,
    pub text_bits: u64,
    pub light_bits: u64,
    pub directory_bits: u64,
    pub branch_bits: u64,
    pub destination_bits: u64,
    pub code_map_bits: u64,
    pub accepting_bits: u64,
    pub padding_bits: u64,
    pub total_bits: u64,
}

fn ceil_log2(x: u64) -> u64 {
    if x <= 1 {
        0
    } else {
        u64::from(64 - (x - 1).leading_zeros())
    }
}

impl SpaceReport {
    /// `n(1 + ⌈log2 σ'⌉) + k(⌈log2 n⌉ + ⌈log2 σ'⌉)`, the closed-form size
    /// with constants taken as 1.
    pub fn model_bits(&self) -> u64 {
        let ls = ceil_log2(self.sigma);
        self.n * (1 + ls) + self.k * (ceil_log2(self.n) + ls)
    }

    /// `2 · n(1 + ⌈log2 σ'⌉)`.
    pub fn envelope_bits(&self) -> u64 {
        2 * self.n * (1 + ceil_log2(self.sigma))
    }

    pub fn bits_per_vertex(&self) -> f64 {
        self.total_bits as f64 / self.n.max(1) as f64
    }
}

impl Padfa {
    pub fn space_report(&self) -> SpaceReport {
        let n = self.vertex_count() as u64;
        let b = self.branches();
        let groups = b.len() as u64;
        let labels = b.labels.len() as u64;
        let mut branch_bits = b.offsets.payload_bits() + b.labels.payload_bits();
        if self.backend() == Backend::Biased {
            branch_bits += labels * 64 + groups * 16 + labels * 32;
        }
        let dest = self.destinations();
        let text = self.text();
        let light = self.light_sources();
        let (accepting_bits, accepting_pad, accepting_dir) = match self.accepting_fid() {
            Some(f) => (f.len() as u64, f.words().len() as u64 * 64 - f.len() as u64, f.directory_bits()),
            None => (0, 0, 0),
        };
        let padding_bits = (text.storage_bits() - text.payload_bits())
            + (light.words().len() as u64 * 64 - light.len() as u64)
            + (b.offsets.storage_bits() - b.offsets.payload_bits())
            + (b.labels.storage_bits() - b.labels.payload_bits())
            + (dest.storage_bits() - dest.payload_bits())
            + accepting_pad;
        let mut r = SpaceReport {
            n,
            k: self.string_count(),
            sigma: self.sigma() as u64,
            width: text.width(),
            light_sources: groups,
            light_edges: dest.len() as u64,
            text_bits: text.payload_bits(),
            light_bits: light.len() as u64,
            directory_bits: light.directory_bits() + accepting_dir,
            branch_bits,
            destination_bits: dest.payload_bits(),
            code_map_bits: 256 * 8,
            accepting_bits,
            padding_bits,
            total_bits: 0,
        };
        r.total_bits = r.text_bits
            + r.light_bits
            + r.directory_bits
            + r.branch_bits
            + r.destination_bits
            + r.code_map_bits
            + r.accepting_bits
            + r.padding_bits;
        r
    }
}

impl fmt::Display for SpaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n              {}", self.n)?;
        writeln!(f, "k              {}", self.k)?;
        writeln!(f, "sigma          {}", self.sigma)?;
        writeln!(f, "width          {}", self.width)?;
        writeln!(f, "light sources  {}", self.light_sources)?;
        writeln!(f, "light edges    {}", self.light_edges)?;
        writeln!(f, "T bits         {}", self.text_bits)?;
        writeln!(f, "B bits         {}", self.light_bits)?;
        writeln!(f, "directory bits {}", self.directory_bits)?;
        writeln!(f, "branch bits    {}", self.branch_bits)?;
        writeln!(f, "D bits         {}", self.destination_bits)?;
        writeln!(f, "code map bits  {}", self.code_map_bits)?;
        if self.accepting_bits > 0 {
            writeln!(f, "accept bits    {}", self.accepting_bits)?;
        }
        writeln!(f, "padding bits   {}", self.padding_bits)?;
        writeln!(f, "total bits     {}", self.total_bits)?;
        writeln!(f, "bits/vertex    {:.3}", self.bits_per_vertex())?;
        write!(f, "model bits     {}", self.model_bits())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{build_trie, minimize, Dictionary};
    use crate::index::BuildOptions;
    use crate::packed::CharMode;

    #[test]
    fn sample_components() {
        let d = Dictionary::from_lines(b"ab\nabab\nababa\nbb\nbbab\nbbaba").unwrap();
        let a = minimize(&build_trie(&d).unwrap()).unwrap();
        let r = Padfa::build(&a, BuildOptions::default()).unwrap().space_report();
        assert_eq!((r.n, r.k, r.sigma, r.width), (7, 6, 2, 2));
        assert_eq!(r.text_bits, 14);
        assert_eq!(r.light_bits, 7);
        assert_eq!(r.directory_bits, 64 + 16);
        assert_eq!(r.light_sources, 4);
        assert_eq!(r.light_edges, 6);
        // 6 destinations below 7 at 3 bits each
        assert_eq!(r.destination_bits, 18);
        // offsets 0,2,3,5,6 at 3 bits, labels 6 x 2 bits
        assert_eq!(r.branch_bits, 15 + 12);
        // T uses 14 of 64 bits, B 7, the offsets 15, labels 12, D 18
        assert_eq!(r.padding_bits, 50 + 57 + 49 + 52 + 46);
        let parts = r.text_bits
            + r.light_bits
            + r.directory_bits
            + r.branch_bits
            + r.destination_bits
            + r.code_map_bits
            + r.padding_bits;
        assert_eq!(r.total_bits, parts);
    }

    #[test]
    fn byte_mode_text_is_larger() {
        let d = Dictionary::from_lines(b"abc\nabd\nbcd\ncab").unwrap();
        let a = minimize(&build_trie(&d).unwrap()).unwrap();
        let packed = Padfa::build(&a, BuildOptions::default()).unwrap().space_report();
        let byte = Padfa::build(&a, BuildOptions { char_mode: CharMode::Byte, ..Default::default() })
            .unwrap()
            .space_report();
        assert!(packed.text_bits < byte.text_bits);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(25), 5);
        assert_eq!(ceil_log2(1 << 20), 20);
    }
}

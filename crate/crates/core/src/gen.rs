//! Seeded synthetic corpora: uniform random dictionaries and texts, and
//! dictionaries shaped like URL lists, place names and protein sequences.

use std::collections::HashSet;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::Dictionary;

/// The largest usable alphabet: every byte except the filler and LF.
pub const MAX_SIGMA: usize = 254;

const PROTEIN: &[u8] = b"ACDEFGHIKLMNPQRSTVWYBXZUO";

/// `sigma` distinct non-filler, non-newline bytes, printable ones first.
pub fn alphabet_bytes(sigma: usize) -> Vec<u8> {
    assert!(sigma <= MAX_SIGMA, "alphabet of {sigma} bytes");
    let printable = (b'a'..=b'z').chain(b'A'..=b'Z').chain(b'0'..=b'9').chain(b'!'..=b'/');
    let mut out: Vec<u8> = printable.collect();
    let rest = (1..=255u8).filter(|b| *b != b'\n' && !out.contains(b)).collect::<Vec<_>>();
    out.extend(rest);
    out.truncate(sigma);
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_string<R: Rng>(rng: &mut R, letters: &[u8], len: usize) -> Vec<u8> {
    (0..len).map(|_| letters[rng.random_range(0..letters.len())]).collect()
}

/// Up to `k` distinct strings over `sigma` letters with lengths uniform in
/// `lens`. Stops early when sampling keeps hitting duplicates, which only
/// happens when the length range admits few strings.
pub fn random_dictionary<R: Rng>(
    rng: &mut R,
    sigma: usize,
    k: usize,
    lens: std::ops::RangeInclusive<usize>,
) -> Dictionary {
    let letters = alphabet_bytes(sigma);
    let mut seen = HashSet::with_capacity(k);
    let mut strings = Vec::with_capacity(k);
    let mut misses = 0;
    while strings.len() < k && misses < 1000 {
        let len = rng.random_range(lens.clone());
        let s = random_string(rng, &letters, len);
        if seen.insert(s.clone()) {
            strings.push(s);
            misses = 0;
        } else {
            misses += 1;
        }
    }
    Dictionary::new(strings).expect("generated strings are distinct")
}

/// A random text over `sigma` letters.
pub fn random_text<R: Rng>(rng: &mut R, sigma: usize, len: usize) -> Vec<u8> {
    random_string(rng, &alphabet_bytes(sigma), len)
}

/// Corpus shapes after the alphabet size and mean string length of three
/// common benchmark dictionaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// σ ≈ 93, mean length ≈ 84, long shared prefixes.
    Url,
    /// σ ≈ 78, mean length ≈ 11.
    City,
    /// σ = 25, mean length ≈ 295, little sharing.
    Prot,
}

impl std::str::FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> Result<Shape, String> {
        match s {
            "url" => Ok(Shape::Url),
            "city" => Ok(Shape::City),
            "prot" => Ok(Shape::Prot),
            _ => Err(format!("unknown corpus shape {s:?} (url, city, prot)")),
        }
    }
}

impl Shape {
    pub fn mean_len(self) -> usize {
        match self {
            Shape::Url => 84,
            Shape::City => 11,
            Shape::Prot => 295,
        }
    }
}

fn url<R: Rng>(rng: &mut R, hosts: &[Vec<u8>], words: &[Vec<u8>]) -> Vec<u8> {
    let mut s = b"http://".to_vec();
    s.extend_from_slice(&hosts[rng.random_range(0..hosts.len())]);
    let segments = rng.random_range(2..=8);
    for _ in 0..segments {
        s.push(b'/');
        s.extend_from_slice(&words[rng.random_range(0..words.len())]);
    }
    if rng.random_bool(0.4) {
        s.extend_from_slice(b"?id=");
        let n: u32 = rng.random_range(0..1_000_000);
        s.extend_from_slice(n.to_string().as_bytes());
    }
    s
}

fn city<R: Rng>(rng: &mut R) -> Vec<u8> {
    const VOWELS: &[u8] = b"aeiouy";
    const CONS: &[u8] = b"bcdfghjklmnprstvwz";
    let syllables = rng.random_range(1..=4);
    let mut s = Vec::new();
    for i in 0..syllables {
        let c = CONS[rng.random_range(0..CONS.len())];
        s.push(if i == 0 { c.to_ascii_uppercase() } else { c });
        s.push(VOWELS[rng.random_range(0..VOWELS.len())]);
        if rng.random_bool(0.3) {
            s.push(CONS[rng.random_range(0..CONS.len())]);
        }
    }
    if rng.random_bool(0.2) {
        s.extend_from_slice(if rng.random_bool(0.5) { b" City".as_slice() } else { b"-sur-Mer" });
    }
    s
}

/// Half fresh sequences, 40% fragments (a prefix of an earlier sequence
/// with a new tail) and 10% point mutants of earlier sequences. Sharing is
/// then about a quarter of all characters in prefixes and a few percent
/// in suffixes, as in real protein collections.
fn protein<R: Rng>(rng: &mut R, mean: usize, earlier: &[Vec<u8>]) -> Vec<u8> {
    let len = rng.random_range(mean / 2..=mean + mean / 2);
    let roll = rng.random_range(0..10);
    if earlier.is_empty() || roll < 5 {
        return random_string(rng, PROTEIN, len);
    }
    let base = &earlier[rng.random_range(0..earlier.len())];
    if roll < 9 {
        let cut = rng.random_range(0..base.len().min(len));
        let mut s = base[..cut].to_vec();
        s.extend(random_string(rng, PROTEIN, len - cut));
        s
    } else {
        let mut s = base.clone();
        let at = rng.random_range(0..s.len());
        let old = s[at];
        while s[at] == old {
            s[at] = PROTEIN[rng.random_range(0..PROTEIN.len())];
        }
        s
    }
}

/// `k` distinct strings of the given shape.
pub fn shaped<R: Rng>(rng: &mut R, shape: Shape, k: usize) -> Dictionary {
    let label = |rng: &mut R, lens: std::ops::Range<usize>| {
        let n = rng.random_range(lens);
        random_string(rng, b"abcdefghijklmnopqrstuvwxyz0123456789-_", n)
    };
    let (mut hosts, mut words) = (Vec::new(), Vec::new());
    if shape == Shape::Url {
        for _ in 0..(k / 50).max(4) {
            let mut h = label(rng, 4..12);
            h.extend_from_slice(b".eu");
            hosts.push(h);
        }
        for _ in 0..(k / 10).max(16) {
            words.push(label(rng, 3..14));
        }
    }
    let mut seen = HashSet::with_capacity(k);
    let mut strings = Vec::with_capacity(k);
    let mut misses = 0;
    while strings.len() < k && misses < 10_000 {
        let s = match shape {
            Shape::Url => url(rng, &hosts, &words),
            Shape::City => city(rng),
            Shape::Prot => protein(rng, Shape::Prot.mean_len(), &strings),
        };
        if seen.insert(s.clone()) {
            strings.push(s);
            misses = 0;
        } else {
            misses += 1;
        }
    }
    Dictionary::new(strings).expect("generated strings are distinct")
}

use std::fmt;

use rand::RngExt;

use crate::automaton::{build_suffix_dawg, build_trie, minimize, Dictionary};
use crate::error::Result;
use crate::gen;
use crate::index::{BuildOptions, Padfa};
use crate::packed::CharMode;
use crate::succinct::Backend;

pub type QueryFn<'a> = dyn Fn(&[u8]) -> bool + 'a;

/// A named query function under test.
pub struct Searcher<'a> {
    pub name: String,
    pub query: Box<QueryFn<'a>>,
}

impl<'a> Searcher<'a> {
    pub fn new(name: impl Into<String>, query: impl Fn(&[u8]) -> bool + 'a) -> Searcher<'a> {
        Searcher {
            name: name.into(),
            query: Box::new(query),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub variant: String,
    pub pattern: Vec<u8>,
    pub expected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub variants: Vec<String>,
    pub probes: usize,
    pub mismatches: usize,
    pub first: Option<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first {
            None => write!(f, "pass: {} variants agree with the oracle on {} probes", self.variants.len(), self.probes),
            Some(m) => write!(
                f,
                "fail: {} mismatches; first: {} on {:?} returned {}, expected {}",
                self.mismatches,
                m.variant,
                String::from_utf8_lossy(&m.pattern),
                u8::from(!m.expected),
                u8::from(m.expected)
            ),
        }
    }
}

/// Checks every searcher against `oracle` on every probe.
pub fn run_verify(searchers: &[Searcher<'_>], probes: &[Vec<u8>], oracle: impl Fn(&[u8]) -> bool) -> VerifyReport {
    let mut mismatches = 0;
    let mut first = None;
    for p in probes {
        let expected = oracle(p);
        for s in searchers {
            if (s.query)(p) != expected {
                mismatches += 1;
                first.get_or_insert_with(|| Mismatch {
                    variant: s.name.clone(),
                    pattern: p.clone(),
                    expected,
                });
            }
        }
    }
    VerifyReport {
        variants: searchers.iter().map(|s| s.name.clone()).collect(),
        probes: probes.len(),
        mismatches,
        first,
    }
}

fn packed_variants(
    base: &str,
    a: &crate::automaton::Adfa,
    out: &mut Vec<Searcher<'static>>,
) -> Result<()> {
    for (suffix, backend, char_mode) in [
        ("", Backend::EdgeList, CharMode::Bitpacked),
        ("-biased", Backend::Biased, CharMode::Bitpacked),
        ("-byte", Backend::EdgeList, CharMode::Byte),
    ] {
        if char_mode == CharMode::Byte && a.alphabet().max_code() > u8::MAX as u16 {
            continue;
        }
        let p = Padfa::build(a, BuildOptions { backend, char_mode })?;
        out.push(Searcher::new(format!("{base}{suffix}"), move |q| p.query(q)));
    }
    Ok(())
}

/// The plain and packed trie and minimal-automaton searchers.
pub fn dictionary_searchers(d: &Dictionary) -> Result<Vec<Searcher<'static>>> {
    let trie = build_trie(d)?;
    let min = minimize(&trie)?;
    let mut out = Vec::new();
    packed_variants("path-packed", &trie, &mut out)?;
    packed_variants("min-packed", &min, &mut out)?;
    out.push(Searcher::new("trie-plain", move |q| trie.accepts_baseline(q)));
    out.push(Searcher::new("min-plain", move |q| min.accepts_baseline(q)));
    Ok(out)
}

/// The plain and packed suffix-automaton searchers.
pub fn text_searchers(text: &[u8]) -> Result<Vec<Searcher<'static>>> {
    let dawg = build_suffix_dawg(text)?;
    let mut out = Vec::new();
    packed_variants("dawg-packed", &dawg, &mut out)?;
    out.push(Searcher::new("dawg-plain", move |q| dawg.reach_baseline(q)));
    Ok(out)
}

pub(crate) fn naive_substring(text: &[u8], p: &[u8]) -> bool {
    p.is_empty() || text.windows(p.len()).any(|w| w == p)
}

/// All members, then `n` random probes: edited members, random strings
/// over the dictionary's letters, and random bytes.
pub fn dictionary_probes(d: &Dictionary, n: usize, seed: u64) -> Vec<Vec<u8>> {
    let mut rng = gen::rng(seed);
    let mut out: Vec<Vec<u8>> = d.iter().map(<[u8]>::to_vec).collect();
    let cm = d.code_map();
    let letters: Vec<u8> = (1..=cm.sigma() as u16)
        .filter_map(|c| cm.decode(crate::alphabet::Symbol(c)))
        .collect();
    let letters = if letters.is_empty() { vec![b'a'] } else { letters };
    let max = d.max_len() + 2;
    for i in 0..n {
        let p = match i % 3 {
            0 if !d.is_empty() => {
                let mut s = d.get(rng.random_range(0..d.len())).unwrap().to_vec();
                match rng.random_range(0..3) {
                    0 if !s.is_empty() => {
                        let at = rng.random_range(0..s.len());
                        s[at] = letters[rng.random_range(0..letters.len())];
                    }
                    1 if !s.is_empty() => s.truncate(rng.random_range(0..s.len())),
                    _ => s.push(letters[rng.random_range(0..letters.len())]),
                }
                s
            }
            2 => {
                let len = rng.random_range(0..=max.min(16));
                (0..len).map(|_| rng.random_range(1..=255u8)).collect()
            }
            _ => {
                let len = rng.random_range(0..=max);
                gen::random_string(&mut rng, &letters, len)
            }
        };
        out.push(p);
    }
    out
}

/// `n` probes, half substrings of `text` and half random strings over its
/// bytes.
pub fn text_probes(text: &[u8], n: usize, seed: u64) -> Vec<Vec<u8>> {
    let mut rng = gen::rng(seed);
    let mut letters: Vec<u8> = text.to_vec();
    letters.sort_unstable();
    letters.dedup();
    if letters.is_empty() {
        letters.push(b'a');
    }
    (0..n)
        .map(|i| {
            if i % 2 == 0 && !text.is_empty() {
                let start = rng.random_range(0..text.len());
                let len = rng.random_range(0..=(text.len() - start).min(64));
                text[start..start + len].to_vec()
            } else {
                let len = rng.random_range(0..=12);
                gen::random_string(&mut rng, &letters, len)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn sample_passes() {
        let d = Dictionary::from_lines(b"ab\nabab\nababa\nbb\nbbab\nbbaba").unwrap();
        let s = dictionary_searchers(&d).unwrap();
        let oracle: HashSet<&[u8]> = d.iter().collect();
        let r = run_verify(&s, &dictionary_probes(&d, 1000, 1), |p| oracle.contains(p));
        assert!(r.passed(), "{r}");
        assert_eq!(r.probes, 1006);
    }

    #[test]
    fn planted_off_by_one_is_caught() {
        let d = Dictionary::from_lines(b"ab\nabab\nababa\nbb\nbbab\nbbaba").unwrap();
        let min = minimize(&build_trie(&d).unwrap()).unwrap();
        let p = Padfa::build(&min, BuildOptions::default()).unwrap();
        // drops the last pattern byte before searching
        let broken = Searcher::new("min-packed-off-by-one", move |q: &[u8]| {
            p.query(&q[..q.len().saturating_sub(1)])
        });
        let oracle: HashSet<&[u8]> = d.iter().collect();
        let r = run_verify(&[broken], &dictionary_probes(&d, 100, 1), |q| oracle.contains(q));
        assert!(!r.passed());
        let m = r.first.unwrap();
        assert_eq!(m.variant, "min-packed-off-by-one");
        assert_eq!(m.pattern, b"ab");
        assert!(m.expected);
    }

    #[test]
    fn dawg_against_naive() {
        let text = gen::random_text(&mut gen::rng(9), 4, 2000);
        let s = text_searchers(&text).unwrap();
        let r = run_verify(&s, &text_probes(&text, 2000, 2), |p| naive_substring(&text, p));
        assert!(r.passed(), "{r}");
    }
}

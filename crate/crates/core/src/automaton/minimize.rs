use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use super::{validate, Adfa};
use crate::alphabet::Symbol;
use crate::error::{Error, Result};

const NIL: u32 = u32::MAX;
const SEED: u64 = 0x51_7c_c1_b7_27_22_0a_95;

/// Keys are already hashes.
#[derive(Default)]
struct PassThrough(u64);

impl Hasher for PassThrough {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, _: &[u8]) {
        unreachable!("only u64 keys")
    }
    fn write_u64(&mut self, x: u64) {
        self.0 = x;
    }
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    (h.rotate_left(5) ^ x).wrapping_mul(SEED)
}

/// Merges equivalent states bottom-up.
///
/// Vertices are visited in reverse topological order; by then every
/// successor already has a class, so a vertex's signature (accepting flag
/// plus its `(label, successor class)` list) identifies its right language.
/// Signatures are bucketed by a 64-bit hash and compared in full within a
/// bucket. The result is numbered in DFS order from the root.
pub fn minimize(a: &Adfa) -> Result<Adfa> {
    let violations = validate(a);
    if !violations.is_empty() {
        return Err(Error::InvalidAutomaton(violations));
    }
    let order = a.topological_order()?;
    let n = a.vertex_count();

    let mut class = vec![NIL; n];
    let mut offsets: Vec<u32> = vec![0];
    let mut labels: Vec<Symbol> = Vec::new();
    let mut targets: Vec<u32> = Vec::new();
    let mut accepting: Vec<bool> = Vec::new();
    // bucket head per hash, chained through `next`
    let mut buckets: HashMap<u64, u32, BuildHasherDefault<PassThrough>> = HashMap::default();
    let mut next: Vec<u32> = Vec::new();
    let mut sig: Vec<(Symbol, u32)> = Vec::new();

    for &v in order.iter().rev() {
        sig.clear();
        sig.extend(
            a.labels_of(v)
                .iter()
                .zip(a.targets_of(v))
                .map(|(&l, &t)| (l, class[t as usize])),
        );
        let acc = a.is_accepting(v);
        let mut key = mix(0, u64::from(acc));
        for &(l, t) in &sig {
            key = mix(key, u64::from(l.code()) << 32 | u64::from(t));
        }

        let head = buckets.get(&key).copied().unwrap_or(NIL);
        let mut c = head;
        while c != NIL {
            let (s, e) = (offsets[c as usize] as usize, offsets[c as usize + 1] as usize);
            if accepting[c as usize] == acc
                && e - s == sig.len()
                && labels[s..e].iter().zip(&targets[s..e]).zip(&sig).all(|((l, t), p)| (*l, *t) == *p)
            {
                break;
            }
            c = next[c as usize];
        }
        if c == NIL {
            c = accepting.len() as u32;
            for &(l, t) in &sig {
                labels.push(l);
                targets.push(t);
            }
            offsets.push(labels.len() as u32);
            accepting.push(acc);
            next.push(head);
            buckets.insert(key, c);
        }
        class[v as usize] = c;
    }

    let merged = Adfa::from_csr(
        a.mode(),
        a.alphabet().clone(),
        class[a.root() as usize],
        offsets,
        labels,
        targets,
        accepting,
    );
    let order = merged.dfs_order()?;
    Ok(merged.permute(&order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{build_trie, Dictionary};

    fn dict(words: &[&str]) -> Dictionary {
        Dictionary::new(words.iter().map(|s| s.as_bytes().to_vec()).collect()).unwrap()
    }

    /// Independent oracle: states of the minimal automaton correspond to
    /// the distinct nonempty right languages (left quotients) of the
    /// terminated language.
    fn quotient_count(words: &[&str]) -> (usize, usize) {
        use std::collections::{BTreeMap, BTreeSet};
        let lang: BTreeSet<String> = words.iter().map(|w| format!("{w}$")).collect();
        let quotient = |p: &str| -> BTreeSet<String> {
            lang.iter().filter_map(|s| s.strip_prefix(p).map(str::to_string)).collect()
        };
        let mut states: BTreeMap<BTreeSet<String>, ()> = BTreeMap::new();
        let mut edges = BTreeSet::new();
        for s in &lang {
            for i in 0..=s.len() {
                let q = quotient(&s[..i]);
                if i < s.len() {
                    let next = quotient(&s[..i + 1]);
                    edges.insert((q.clone(), s.as_bytes()[i], next));
                }
                states.insert(q, ());
            }
        }
        (states.len(), edges.len())
    }

    #[test]
    fn sample_min_adfa() {
        let words = ["ab", "abab", "ababa", "bb", "bbab", "bbaba"];
        assert_eq!(quotient_count(&words), (7, 9));
        let m = minimize(&build_trie(&dict(&words)).unwrap()).unwrap();
        assert_eq!(m.vertex_count(), 7);
        assert_eq!(m.edge_count(), 9);
        let acc: Vec<u32> = m.accepting_states().collect();
        assert_eq!(acc.len(), 1);
        assert_eq!(m.out_degree(acc[0]), 0);
        assert_eq!(m.root(), 0);
    }

    #[test]
    fn one_letter_subtrees_merge() {
        let m = minimize(&build_trie(&dict(&["a", "b"])).unwrap()).unwrap();
        assert_eq!(m.vertex_count(), 3);
        assert_eq!(m.edge_count(), 3);
    }

    #[test]
    fn idempotent() {
        let words = ["tap", "taps", "top", "tops", "stop", "stops", "sap"];
        let once = minimize(&build_trie(&dict(&words)).unwrap()).unwrap();
        let twice = minimize(&once).unwrap();
        assert_eq!(once, twice);
        assert_eq!(quotient_count(&words).0, once.vertex_count());
    }

    #[test]
    fn signatures_are_unique_after_minimization() {
        let words = ["abc", "abd", "xbc", "xbd", "q", "qq", "qqq"];
        let m = minimize(&build_trie(&dict(&words)).unwrap()).unwrap();
        let mut seen = std::collections::HashSet::new();
        for v in 0..m.vertex_count() as u32 {
            let sig: Vec<_> = m.labels_of(v).iter().copied().zip(m.targets_of(v).iter().copied()).collect();
            assert!(seen.insert((m.is_accepting(v), sig)), "vertex {v} duplicates a signature");
        }
    }

    #[test]
    fn rejects_invalid_input() {
        let cm = crate::alphabet::CodeMap::from_bytes(*b"a");
        let a = Adfa::from_edges(
            crate::Mode::Membership,
            cm,
            0,
            vec![false, true, true],
            [(0, Symbol(2), 1), (0, Symbol(2), 2)],
        )
        .unwrap();
        assert!(matches!(minimize(&a), Err(Error::InvalidAutomaton(_))));
    }
}

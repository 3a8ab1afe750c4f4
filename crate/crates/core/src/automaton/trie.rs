use std::cmp::Ordering;

use super::{Adfa, Dictionary};
use crate::alphabet::Symbol;
use crate::error::{Error, Result};
use crate::Mode;

/// Order of terminated strings under the dense code order, where the
/// terminator is larger than every character.
fn cmp_terminated(a: &[u8], b: &[u8]) -> Ordering {
    let common = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    match (a.get(common), b.get(common)) {
        (Some(x), Some(y)) => x.cmp(y),
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (None, None) => Ordering::Equal,
    }
}

/// Builds the trie of `{s·$ | s ∈ dict}`.
///
/// Strings are inserted in terminated order, so each insertion only
/// diverges from the previous string's path and every vertex's children
/// arrive in increasing label order. Vertex ids follow preorder, which is
/// also a topological order.
pub fn build_trie(dict: &Dictionary) -> Result<Adfa> {
    let alphabet = dict.code_map();
    let terminator = alphabet.terminator();
    let mut order: Vec<&[u8]> = dict.iter().collect();
    order.sort_by(|a, b| cmp_terminated(a, b));

    let total = dict.total_len() + dict.len() + 1;
    if total > u32::MAX as usize {
        return Err(Error::TooLarge("trie vertex ids must fit in 32 bits"));
    }
    let mut parent_edges: Vec<(u32, Symbol)> = Vec::with_capacity(total);
    let mut accepting = Vec::with_capacity(total);
    accepting.push(false);
    parent_edges.push((u32::MAX, Symbol::FILLER));

    let mut path: Vec<u32> = vec![0];
    let mut prev: &[u8] = &[];
    for (i, s) in order.iter().enumerate() {
        let common = if i == 0 {
            0
        } else {
            prev.iter().zip(s.iter()).take_while(|(x, y)| x == y).count()
        };
        path.truncate(common + 1);
        let symbols = s[common..]
            .iter()
            .map(|&b| alphabet.encode(b).expect("byte is in the dictionary alphabet"))
            .chain(std::iter::once(terminator));
        for c in symbols {
            let v = accepting.len() as u32;
            parent_edges.push((*path.last().unwrap(), c));
            accepting.push(false);
            path.push(v);
        }
        *accepting.last_mut().unwrap() = true;
        prev = s;
    }

    // counting sort by parent keeps creation order, i.e. label order
    let n = accepting.len();
    let mut offsets = vec![0u32; n + 1];
    for &(p, _) in &parent_edges[1..] {
        offsets[p as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut next = offsets.clone();
    let mut labels = vec![Symbol::FILLER; n - 1];
    let mut targets = vec![0u32; n - 1];
    for (child, &(p, c)) in parent_edges.iter().enumerate().skip(1) {
        let slot = next[p as usize] as usize;
        next[p as usize] += 1;
        labels[slot] = c;
        targets[slot] = child as u32;
    }
    Ok(Adfa::from_csr(
        Mode::Membership,
        alphabet,
        0,
        offsets,
        labels,
        targets,
        accepting,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::validate;
    use std::collections::BTreeSet;

    fn dict(words: &[&str]) -> Dictionary {
        Dictionary::new(words.iter().map(|s| s.as_bytes().to_vec()).collect()).unwrap()
    }

    // Brute-force oracle: vertices = distinct prefixes of terminated strings.
    fn distinct_prefixes(words: &[&str]) -> usize {
        let mut set = BTreeSet::new();
        for w in words {
            let t = format!("{w}$");
            for i in 0..=t.len() {
                set.insert(t[..i].to_string());
            }
        }
        set.len()
    }

    #[test]
    fn sample_trie_size() {
        let words = ["ab", "abab", "ababa", "bb", "bbab", "bbaba"];
        assert_eq!(distinct_prefixes(&words), 17);
        let t = build_trie(&dict(&words)).unwrap();
        assert_eq!(t.vertex_count(), 17);
        assert_eq!(t.edge_count(), 16);
        assert!(validate(&t).is_empty());
    }

    #[test]
    fn trie_is_a_tree_with_leaf_acceptors() {
        let t = build_trie(&dict(&["car", "cart", "cat", "do", "dog"])).unwrap();
        let indeg = t.in_degrees();
        assert_eq!(indeg[0], 0);
        assert!(indeg[1..].iter().all(|&d| d == 1));
        for v in 0..t.vertex_count() as u32 {
            assert_eq!(t.is_accepting(v), t.out_degree(v) == 0);
        }
        for w in ["car", "cart", "cat", "do", "dog"] {
            assert!(t.accepts_baseline(w.as_bytes()));
        }
        assert!(!t.accepts_baseline(b"ca"));
        assert!(!t.accepts_baseline(b"dogs"));
    }

    #[test]
    fn empty_dictionary_is_root_only() {
        let t = build_trie(&Dictionary::default()).unwrap();
        assert_eq!(t.vertex_count(), 1);
        assert_eq!(t.edge_count(), 0);
        assert_eq!(t.accepting_states().count(), 0);
        assert!(!t.accepts_baseline(b""));
    }

    #[test]
    fn empty_string_is_bare_terminator() {
        let t = build_trie(&dict(&[""])).unwrap();
        assert_eq!(t.vertex_count(), 2);
        assert_eq!(t.edge_count(), 1);
        assert_eq!(t.label(0), t.alphabet().terminator());
        assert!(t.is_accepting(1));
        assert!(t.accepts_baseline(b""));
    }

    #[test]
    fn terminated_order_puts_prefix_last() {
        assert_eq!(cmp_terminated(b"ab", b"abab"), Ordering::Greater);
        assert_eq!(cmp_terminated(b"abab", b"abb"), Ordering::Less);
        assert_eq!(cmp_terminated(b"", b"a"), Ordering::Greater);
    }
}

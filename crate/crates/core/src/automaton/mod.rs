//! Acyclic deterministic finite automata: construction, minimization,
//! suffix automata and the one-edge-per-character reference search.

mod dawg;
mod dictionary;
mod minimize;
mod trie;
mod validate;

use std::collections::VecDeque;
use std::ops::Range;

pub use dawg::build_suffix_dawg;
pub use dictionary::Dictionary;
pub(crate) use dictionary::split_lines;
pub use minimize::minimize;
pub use trie::build_trie;
pub use validate::{validate, Rule, Violation};

use crate::alphabet::{CodeMap, Symbol};
use crate::error::{Error, Result};
use crate::Mode;

/// A partial, acyclic, deterministic automaton stored in CSR form.
///
/// Each vertex's out-edges occupy a contiguous range of the label and
/// target arrays, sorted by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adfa {
    mode: Mode,
    alphabet: CodeMap,
    root: u32,
    offsets: Vec<u32>,
    labels: Vec<Symbol>,
    targets: Vec<u32>,
    accepting: Vec<bool>,
}

impl Adfa {
    /// Assembles an automaton from an edge list without checking the
    /// automaton invariants; run [`validate`] on the result when the input is
    /// untrusted. Edges of one vertex are ordered by label (stably, so
    /// duplicate labels survive for `validate` to report).
    pub fn from_edges<I>(
        mode: Mode,
        alphabet: CodeMap,
        root: u32,
        accepting: Vec<bool>,
        edges: I,
    ) -> Result<Adfa>
    where
        I: IntoIterator<Item = (u32, Symbol, u32)>,
    {
        let n = accepting.len();
        if n > u32::MAX as usize - 1 {
            return Err(Error::TooLarge("vertex ids must fit in 32 bits"));
        }
        let mut edges: Vec<(u32, Symbol, u32)> = edges.into_iter().collect();
        if let Some(&(src, _, _)) = edges.iter().find(|e| e.0 as usize >= n) {
            return Err(Error::InvalidAutomaton(vec![Violation {
                rule: Rule::TargetRange,
                vertex: src,
                edge: None,
                detail: "edge source is not a vertex",
            }]));
        }
        edges.sort_by_key(|&(src, label, _)| (src, label));
        let mut offsets = vec![0u32; n + 1];
        for &(src, _, _) in &edges {
            offsets[src as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let labels = edges.iter().map(|e| e.1).collect();
        let targets = edges.iter().map(|e| e.2).collect();
        Ok(Adfa {
            mode,
            alphabet,
            root,
            offsets,
            labels,
            targets,
            accepting,
        })
    }

    /// Builds from CSR arrays that are already grouped by source and sorted.
    pub(crate) fn from_csr(
        mode: Mode,
        alphabet: CodeMap,
        root: u32,
        offsets: Vec<u32>,
        labels: Vec<Symbol>,
        targets: Vec<u32>,
        accepting: Vec<bool>,
    ) -> Adfa {
        debug_assert_eq!(offsets.len(), accepting.len() + 1);
        debug_assert_eq!(labels.len(), targets.len());
        Adfa {
            mode,
            alphabet,
            root,
            offsets,
            labels,
            targets,
            accepting,
        }
    }

    #[inline]
    pub fn mode(&self) -> Mode {
        self.mode
    }

    #[inline]
    pub fn alphabet(&self) -> &CodeMap {
        &self.alphabet
    }

    #[inline]
    pub fn root(&self) -> u32 {
        self.root
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.accepting.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn edge_range(&self, v: u32) -> Range<usize> {
        self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize
    }

    #[inline]
    pub fn out_degree(&self, v: u32) -> usize {
        self.edge_range(v).len()
    }

    #[inline]
    pub fn labels_of(&self, v: u32) -> &[Symbol] {
        &self.labels[self.edge_range(v)]
    }

    #[inline]
    pub fn targets_of(&self, v: u32) -> &[u32] {
        &self.targets[self.edge_range(v)]
    }

    #[inline]
    pub fn label(&self, edge: usize) -> Symbol {
        self.labels[edge]
    }

    #[inline]
    pub fn target(&self, edge: usize) -> u32 {
        self.targets[edge]
    }

    /// Iterates `(source, label, target)` over all edges.
    pub fn edges(&self) -> impl Iterator<Item = (u32, Symbol, u32)> + '_ {
        (0..self.vertex_count() as u32).flat_map(move |v| {
            self.edge_range(v)
                .map(move |e| (v, self.labels[e], self.targets[e]))
        })
    }

    #[inline]
    pub fn is_accepting(&self, v: u32) -> bool {
        self.accepting[v as usize]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.vertex_count() as u32).filter(move |&v| self.accepting[v as usize])
    }

    pub fn in_degrees(&self) -> Vec<u32> {
        let mut indeg = vec![0u32; self.vertex_count()];
        for &t in &self.targets {
            if let Some(d) = indeg.get_mut(t as usize) {
                *d += 1;
            }
        }
        indeg
    }

    /// The transition function, `None` standing for the undefined state.
    #[inline]
    pub fn transition(&self, v: u32, c: Symbol) -> Option<u32> {
        let range = self.edge_range(v);
        let labels = &self.labels[range.clone()];
        let pos = if labels.len() <= 8 {
            labels.iter().position(|&l| l == c)
        } else {
            labels.binary_search(&c).ok()
        };
        pos.map(|i| self.targets[range.start + i])
    }

    /// Walks `symbols` from the root one edge at a time.
    pub fn walk(&self, symbols: impl IntoIterator<Item = Symbol>) -> Option<u32> {
        let mut v = self.root;
        for c in symbols {
            v = self.transition(v, c)?;
        }
        Some(v)
    }

    /// Reference membership search: does the automaton accept `pattern·$`?
    pub fn accepts_baseline(&self, pattern: &[u8]) -> bool {
        let mut v = self.root;
        for &b in pattern {
            let Some(c) = self.alphabet.encode(b) else {
                return false;
            };
            match self.transition(v, c) {
                Some(u) => v = u,
                None => return false,
            }
        }
        match self.transition(v, self.alphabet.terminator()) {
            Some(u) => self.is_accepting(u),
            None => false,
        }
    }

    /// Reference reachability search: can `pattern` be consumed from the
    /// root? On a suffix automaton this is substring membership.
    pub fn reach_baseline(&self, pattern: &[u8]) -> bool {
        let mut v = self.root;
        for &b in pattern {
            let Some(c) = self.alphabet.encode(b) else {
                return false;
            };
            match self.transition(v, c) {
                Some(u) => v = u,
                None => return false,
            }
        }
        true
    }

    /// Kahn order with a FIFO queue seeded by the sources in id order and
    /// edges visited in label order, so the result is deterministic.
    pub fn topological_order(&self) -> Result<Vec<u32>> {
        let n = self.vertex_count();
        let mut indeg = self.in_degrees();
        let mut queue: VecDeque<u32> = (0..n as u32).filter(|&v| indeg[v as usize] == 0).collect();
        // the root goes first when it is a source
        if let Some(pos) = queue.iter().position(|&v| v == self.root) {
            queue.remove(pos);
            queue.push_front(self.root);
        }
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &t in self.targets_of(v) {
                let d = &mut indeg[t as usize];
                *d -= 1;
                if *d == 0 {
                    queue.push_back(t);
                }
            }
        }
        if order.len() != n {
            let vertex = (0..n as u32)
                .find(|&v| indeg[v as usize] > 0)
                .unwrap_or(0);
            return Err(Error::Cyclic { vertex });
        }
        Ok(order)
    }

    /// Reverse DFS postorder from the root, children taken in label order
    /// (so the first child's subtree follows its parent). Topological for
    /// acyclic automata; cycles among vertices reachable from the root are
    /// not detected. Unreachable vertices are appended in Kahn order.
    pub fn dfs_order(&self) -> Result<Vec<u32>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut post = Vec::with_capacity(n);
        // (vertex, next edge to try, counting down)
        let mut stack: Vec<(u32, usize)> = vec![(self.root, self.edge_range(self.root).end)];
        seen[self.root as usize] = true;
        while let Some(top) = stack.last_mut() {
            let (v, next) = *top;
            if next == self.edge_range(v).start {
                post.push(v);
                stack.pop();
                continue;
            }
            top.1 -= 1;
            let t = self.targets[next - 1];
            if !seen[t as usize] {
                seen[t as usize] = true;
                stack.push((t, self.edge_range(t).end));
            }
        }
        post.reverse();
        if post.len() < n {
            let rest = self.topological_order()?;
            post.extend(rest.into_iter().filter(|&v| !seen[v as usize]));
        }
        Ok(post)
    }

    /// Renumbers vertices so that `order[i]` becomes vertex `i`.
    pub fn permute(&self, order: &[u32]) -> Adfa {
        let n = self.vertex_count();
        debug_assert_eq!(order.len(), n);
        let mut new_id = vec![u32::MAX; n];
        for (i, &old) in order.iter().enumerate() {
            new_id[old as usize] = i as u32;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut labels = Vec::with_capacity(self.edge_count());
        let mut targets = Vec::with_capacity(self.edge_count());
        let mut accepting = Vec::with_capacity(n);
        offsets.push(0);
        for &old in order {
            let range = self.edge_range(old);
            labels.extend_from_slice(&self.labels[range.clone()]);
            targets.extend(self.targets[range].iter().map(|&t| new_id[t as usize]));
            offsets.push(labels.len() as u32);
            accepting.push(self.accepting[old as usize]);
        }
        Adfa {
            mode: self.mode,
            alphabet: self.alphabet.clone(),
            root: new_id[self.root as usize],
            offsets,
            labels,
            targets,
            accepting,
        }
    }

    /// Renumbers into topological order with the root first.
    pub fn into_topological(self) -> Result<Adfa> {
        let order = self.topological_order()?;
        Ok(self.permute(&order))
    }

    /// Number of strings accepted, by counting accepting paths.
    pub fn language_size(&self) -> Result<u64> {
        let order = self.topological_order()?;
        let mut count = vec![0u64; self.vertex_count()];
        for &v in order.iter().rev() {
            let mut c = u64::from(self.is_accepting(v));
            for &t in self.targets_of(v) {
                c = c
                    .checked_add(count[t as usize])
                    .ok_or(Error::CountOverflow { vertex: v })?;
            }
            count[v as usize] = c;
        }
        Ok(count[self.root as usize])
    }

    /// Enumerates the accepted strings as symbol sequences. Exponential in
    /// general; meant for small automata in tests and tools.
    pub fn language(&self) -> Vec<Vec<Symbol>> {
        let mut out = Vec::new();
        let mut stack: Vec<(u32, Vec<Symbol>)> = vec![(self.root, Vec::new())];
        while let Some((v, prefix)) = stack.pop() {
            if self.is_accepting(v) {
                out.push(prefix.clone());
            }
            for e in self.edge_range(v).rev() {
                let mut next = prefix.clone();
                next.push(self.labels[e]);
                stack.push((self.targets[e], next));
            }
        }
        out.sort();
        out
    }

    /// In-memory size of the CSR arrays in bits, used as the cost of the
    /// unpacked search variants.
    pub fn size_bits(&self) -> u64 {
        let n = self.vertex_count() as u64;
        let e = self.edge_count() as u64;
        32 * (n + 1) + 16 * e + 32 * e + n + 8 * 256
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Dictionary {
        Dictionary::new(
            ["ab", "abab", "ababa", "bb", "bbab", "bbaba"]
                .iter()
                .map(|s| s.as_bytes().to_vec())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn baseline_search_on_sample() {
        let min = minimize(&build_trie(&sample()).unwrap()).unwrap();
        assert!(min.accepts_baseline(b"abab"));
        assert!(min.accepts_baseline(b"ab"));
        assert!(!min.accepts_baseline(b"aba"));
        assert!(!min.accepts_baseline(b""));
        assert!(!min.accepts_baseline(b"abc"));
    }

    #[test]
    fn empty_pattern_tests_bare_terminator() {
        let d = Dictionary::new(vec![b"".to_vec(), b"x".to_vec()]).unwrap();
        let t = build_trie(&d).unwrap();
        assert!(t.accepts_baseline(b""));
        assert!(t.accepts_baseline(b"x"));
        assert!(!t.accepts_baseline(b"xx"));
    }

    #[test]
    fn dfs_order_is_topological_and_follows_chains() {
        let d = Dictionary::from_lines(b"abc\nabd\nb\nbcd").unwrap();
        for a in [build_trie(&d).unwrap(), minimize(&build_trie(&d).unwrap()).unwrap()] {
            let order = a.dfs_order().unwrap();
            assert_eq!(order[0], a.root());
            let mut pos = vec![0; order.len()];
            for (i, &v) in order.iter().enumerate() {
                pos[v as usize] = i;
            }
            for (u, _, v) in a.edges() {
                assert!(pos[u as usize] < pos[v as usize]);
            }
            // the first child directly follows its parent
            let first = a.targets_of(a.root())[0];
            assert_eq!(pos[first as usize], 1);
        }
    }

    #[test]
    fn topological_order_rejects_cycles() {
        let cm = CodeMap::from_bytes(*b"a");
        let a = Adfa::from_edges(
            Mode::Reach,
            cm,
            0,
            vec![false, false, true],
            [(0, Symbol(1), 1), (1, Symbol(1), 2), (2, Symbol(1), 1)],
        )
        .unwrap();
        assert!(matches!(a.topological_order(), Err(Error::Cyclic { .. })));
    }

    #[test]
    fn permute_preserves_language() {
        let trie = build_trie(&sample()).unwrap();
        let mut order: Vec<u32> = (0..trie.vertex_count() as u32).collect();
        order.reverse();
        let p = trie.permute(&order);
        assert_eq!(p.language(), trie.language());
        assert_eq!(p.root(), trie.vertex_count() as u32 - 1);
    }
}

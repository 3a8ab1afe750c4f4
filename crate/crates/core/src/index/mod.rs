//! The packed automaton: heavy edges packed into one coded text, light
//! edges in per-vertex branch structures addressed through a rank
//! directory.

mod format;
mod search;
mod space;

pub use format::{load_any, AnyIndex, INDEX_MAGIC, PLAIN_MAGIC, FORMAT_VERSION};
pub use search::{LightStep, Outcome, SearchTrace, TraceStep};
pub use space::SpaceReport;

use crate::alphabet::{CodeMap, Symbol};
use crate::automaton::{validate, Adfa};
use crate::decompose::{classify_edges, count_paths, heavy_renumber, EdgeClassification, PathCounts};
use crate::error::{Error, Result};
use crate::packed::{CharMode, PackedText};
use crate::succinct::{biased_layout, biased_search, width_for, Backend, Fid, IntVec, TreeView};
use crate::Mode;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    pub backend: Backend,
    pub char_mode: CharMode,
}

/// The heavy-path-renumbered automaton an index was built from, with its
/// classification and path counts.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub adfa: Adfa,
    pub classification: EdgeClassification,
    pub counts: PathCounts,
}

/// Flattened light-edge groups, one per set bit of `B`, in vertex order.
/// Group `g` covers positions `offsets[g]..offsets[g + 1]` of `labels` and
/// of the index's destination array. Labels are stored at the character
/// width.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct BranchTable {
    pub(crate) offsets: IntVec,
    pub(crate) labels: IntVec,
    // biased backend only; tree links are group-local positions
    pub(crate) weights: Vec<u64>,
    pub(crate) roots: Vec<u16>,
    pub(crate) left: Vec<u16>,
    pub(crate) right: Vec<u16>,
}

impl BranchTable {
    /// `groups` holds each group's labels and, for the biased backend, its
    /// weights.
    pub(crate) fn build(backend: Backend, width: u32, groups: &[(Vec<Symbol>, Vec<u64>)]) -> BranchTable {
        let mut offsets = Vec::with_capacity(groups.len() + 1);
        let mut labels = Vec::new();
        let mut t = BranchTable::default();
        offsets.push(0);
        for (ls, ws) in groups {
            labels.extend(ls.iter().map(|s| u64::from(s.code())));
            offsets.push(labels.len() as u64);
            if backend == Backend::Biased {
                let layout = biased_layout(ws);
                t.weights.extend_from_slice(ws);
                t.roots.push(layout.root);
                t.left.extend(layout.left);
                t.right.extend(layout.right);
            }
        }
        t.offsets = IntVec::minimal(&offsets);
        t.labels = IntVec::from_values(&labels, width);
        t
    }

    #[inline]
    pub(crate) fn range(&self, group: usize) -> std::ops::Range<usize> {
        self.offsets.get(group) as usize..self.offsets.get(group + 1) as usize
    }

    pub(crate) fn len(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    #[inline]
    fn label(&self, i: usize) -> Symbol {
        Symbol(self.labels.get(i) as u16)
    }

    pub(crate) fn group_labels(&self, group: usize) -> Vec<Symbol> {
        self.range(group).map(|i| self.label(i)).collect()
    }

    /// Position of `c` in the flattened arrays, plus branch nodes probed.
    #[inline]
    pub(crate) fn access(&self, backend: Backend, group: usize, c: Symbol) -> (Option<usize>, u32) {
        let range = self.range(group);
        match backend {
            Backend::EdgeList => {
                if range.len() <= 4 {
                    (range.clone().find(|&i| self.label(i) == c), 0)
                } else {
                    let (mut lo, mut hi) = (range.start, range.end);
                    while lo < hi {
                        let mid = lo + (hi - lo) / 2;
                        match self.label(mid).cmp(&c) {
                            std::cmp::Ordering::Less => lo = mid + 1,
                            std::cmp::Ordering::Greater => hi = mid,
                            std::cmp::Ordering::Equal => return (Some(mid), 0),
                        }
                    }
                    (None, 0)
                }
            }
            Backend::Biased => {
                let base = range.start;
                let (hit, probes) = biased_search(
                    |i| self.label(base + i),
                    TreeView {
                        root: self.roots[group],
                        left: &self.left[range.clone()],
                        right: &self.right[range],
                    },
                    c,
                );
                (hit.map(|i| base + i), probes)
            }
        }
    }
}

/// A packed acyclic automaton.
///
/// Vertex ids are 0-based here: the root is vertex 0 and every heavy edge
/// goes from `v` to `v + 1`. `T[v]` is the label of `v`'s heavy out-edge,
/// or the filler code when it has none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Padfa {
    mode: Mode,
    backend: Backend,
    char_mode: CharMode,
    alphabet: CodeMap,
    k: u64,
    text: PackedText,
    light: Fid,
    branches: BranchTable,
    destinations: IntVec,
    accepting: Option<Fid>,
}

impl Padfa {
    /// Decomposes `a` and packs it.
    pub fn build(a: &Adfa, opts: BuildOptions) -> Result<Padfa> {
        Padfa::build_detailed(a, opts).map(|(p, _)| p)
    }

    /// As [`Padfa::build`], also returning the decomposition used.
    pub fn build_detailed(a: &Adfa, opts: BuildOptions) -> Result<(Padfa, Decomposition)> {
        let violations = validate(a);
        if !violations.is_empty() {
            return Err(Error::InvalidAutomaton(violations));
        }
        let alphabet = a.alphabet().clone();
        let width = match opts.char_mode {
            CharMode::Bitpacked => alphabet.width_bits(),
            CharMode::Byte => {
                if alphabet.max_code() > u8::MAX as u16 {
                    return Err(Error::AlphabetTooLarge {
                        sigma: alphabet.sigma(),
                    });
                }
                8
            }
        };
        let pc = count_paths(a)?;
        let ec = classify_edges(a, &pc);
        let (r, rc) = heavy_renumber(a, &ec)?;
        let counts = count_paths(&r)?;
        let n = r.vertex_count();

        let text = PackedText::pack_iter(
            (0..n as u32).map(|v| match rc.heavy_out(&r, v) {
                Some(e) => r.label(e),
                None => Symbol::FILLER,
            }),
            n,
            width,
        );
        let light = Fid::from_bits(rc.light_source_bits().iter().copied());
        let mut groups = Vec::with_capacity(rc.light_source_count());
        let mut destinations = Vec::with_capacity(rc.light_count());
        for g in rc.light_groups(&r) {
            let weights = match opts.backend {
                Backend::EdgeList => Vec::new(),
                Backend::Biased => g.destinations.iter().map(|&d| counts.to_sink[d as usize]).collect(),
            };
            destinations.extend(g.destinations.iter().map(|&d| u64::from(d)));
            groups.push((g.labels, weights));
        }
        let branches = BranchTable::build(opts.backend, width, &groups);
        let destinations = IntVec::from_values(&destinations, width_for(n as u64 - 1));
        let accepting = (r.mode() == Mode::Reach)
            .then(|| Fid::from_bits((0..n as u32).map(|v| r.is_accepting(v))));
        let padfa = Padfa {
            mode: r.mode(),
            backend: opts.backend,
            char_mode: opts.char_mode,
            alphabet,
            k: r.language_size()?,
            text,
            light,
            branches,
            destinations,
            accepting,
        };
        Ok((
            padfa,
            Decomposition {
                adfa: r,
                classification: rc,
                counts,
            },
        ))
    }

    #[inline]
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn char_mode(&self) -> CharMode {
        self.char_mode
    }

    pub fn alphabet(&self) -> &CodeMap {
        &self.alphabet
    }

    /// Number of vertices `n`.
    pub fn vertex_count(&self) -> usize {
        self.text.len()
    }

    /// Number of accepted strings `k`.
    pub fn string_count(&self) -> u64 {
        self.k
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.sigma()
    }

    /// The packed heavy-edge text `T`.
    pub fn text(&self) -> &PackedText {
        &self.text
    }

    /// The light-source bits `B`.
    pub fn light_sources(&self) -> &Fid {
        &self.light
    }

    pub fn light_edge_count(&self) -> usize {
        self.destinations.len()
    }

    pub fn heavy_edge_count(&self) -> usize {
        (0..self.text.len())
            .filter(|&i| self.text.get(i) != Symbol::FILLER)
            .count()
    }

    /// `(Σ_v, D_v)` for vertex `v`, empty when `B[v] = 0`.
    pub fn light_group(&self, v: u32) -> (Vec<Symbol>, Vec<u32>) {
        if !self.light.get(v as usize) {
            return (Vec::new(), Vec::new());
        }
        let g = self.light.rank1(v as usize);
        let dest = self.branches.range(g).map(|i| self.destinations.get(i) as u32).collect();
        (self.branches.group_labels(g), dest)
    }

    /// Branch weights `w_v(c) = π(dest, W)` for vertex `v`. Only the biased
    /// backend keeps them.
    pub fn light_weights(&self, v: u32) -> Option<&[u64]> {
        if self.backend != Backend::Biased {
            return None;
        }
        if !self.light.get(v as usize) {
            return Some(&[]);
        }
        Some(&self.branches.weights[self.branches.range(self.light.rank1(v as usize))])
    }

    /// Whether vertex `v` is accepting; only recorded for reach-mode
    /// indexes, whose accepting states need not be sinks.
    pub fn is_accepting(&self, v: u32) -> Option<bool> {
        self.accepting.as_ref().map(|f| f.get(v as usize))
    }

    /// Dictionary membership: is `pattern` one of the indexed strings?
    pub fn contains(&self, pattern: &[u8]) -> Result<bool> {
        self.expect_mode(Mode::Membership)?;
        Ok(self.run(pattern, &mut search::NoTrace).accepted())
    }

    /// Can `pattern` be consumed from the root? On a suffix automaton this
    /// is substring matching.
    pub fn reach(&self, pattern: &[u8]) -> Result<bool> {
        self.expect_mode(Mode::Reach)?;
        Ok(self.run(pattern, &mut search::NoTrace).accepted())
    }

    /// Runs the index's own query kind and records every iteration.
    pub fn search_traced(&self, pattern: &[u8]) -> (bool, SearchTrace) {
        let mut trace = SearchTrace::default();
        let outcome = self.run(pattern, &mut trace);
        trace.outcome = outcome;
        (outcome.accepted(), trace)
    }

    fn expect_mode(&self, expected: Mode) -> Result<()> {
        if self.mode == expected {
            Ok(())
        } else {
            Err(Error::ModeMismatch {
                expected,
                found: self.mode,
            })
        }
    }

    pub(crate) fn from_parts(parts: format::IndexParts) -> Padfa {
        Padfa {
            mode: parts.mode,
            backend: parts.backend,
            char_mode: parts.char_mode,
            alphabet: parts.alphabet,
            k: parts.k,
            text: parts.text,
            light: parts.light,
            branches: parts.branches,
            destinations: parts.destinations,
            accepting: parts.accepting,
        }
    }

    pub(crate) fn branches(&self) -> &BranchTable {
        &self.branches
    }

    pub(crate) fn destinations(&self) -> &IntVec {
        &self.destinations
    }

    pub(crate) fn accepting_fid(&self) -> Option<&Fid> {
        self.accepting.as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{build_suffix_dawg, build_trie, minimize, Dictionary};

    fn sample() -> Adfa {
        let d = Dictionary::from_lines(b"ab\nabab\nababa\nbb\nbbab\nbbaba").unwrap();
        minimize(&build_trie(&d).unwrap()).unwrap()
    }

    fn show(p: &Padfa) -> String {
        p.text().unpack().iter().map(|&s| p.alphabet().display(s)).collect()
    }

    #[test]
    fn sample_quadruplet() {
        for backend in [Backend::EdgeList, Backend::Biased] {
            let p = Padfa::build(&sample(), BuildOptions { backend, ..Default::default() }).unwrap();
            assert_eq!(p.vertex_count(), 7);
            assert_eq!(show(&p), "#bab###");
            let b: String = (0..7).map(|i| if p.light_sources().get(i) { '1' } else { '0' }).collect();
            assert_eq!(b, "1010110");
            let (labels, dest) = p.light_group(4);
            let labels: String = labels.iter().map(|&s| p.alphabet().display(s)).collect();
            assert_eq!(labels, "a$");
            // 1-based (6, 7)
            assert_eq!(dest, vec![5, 6]);
            match backend {
                Backend::EdgeList => assert_eq!(p.light_weights(4), None),
                Backend::Biased => assert_eq!(p.light_weights(4), Some(&[1, 1][..])),
            }
            assert_eq!(p.string_count(), 6);
            assert_eq!(p.heavy_edge_count(), 3);
            assert_eq!(p.light_edge_count(), 6);
        }
    }

    #[test]
    fn sample_queries() {
        let p = Padfa::build(&sample(), BuildOptions::default()).unwrap();
        for w in ["ab", "abab", "ababa", "bb", "bbab", "bbaba"] {
            assert!(p.contains(w.as_bytes()).unwrap(), "{w}");
        }
        for w in ["", "a", "aba", "abb", "bbabab", "ba", "abc", "zz"] {
            assert!(!p.contains(w.as_bytes()).unwrap(), "{w}");
        }
    }

    #[test]
    fn single_string_chain() {
        let d = Dictionary::from_lines(b"abc").unwrap();
        let p = Padfa::build(&build_trie(&d).unwrap(), BuildOptions::default()).unwrap();
        assert_eq!(show(&p), "abc$#");
        assert_eq!(p.light_sources().count_ones(), 0);
        let (hit, trace) = p.search_traced(b"abc");
        assert!(hit);
        assert_eq!(trace.iterations(), 1);
    }

    #[test]
    fn empty_dictionary() {
        let p = Padfa::build(&build_trie(&Dictionary::default()).unwrap(), BuildOptions::default()).unwrap();
        assert_eq!(p.vertex_count(), 1);
        assert_eq!(show(&p), "#");
        assert_eq!(p.light_sources().count_ones(), 0);
        assert_eq!(p.string_count(), 0);
        assert!(!p.contains(b"").unwrap());
        assert!(!p.contains(b"a").unwrap());
    }

    #[test]
    fn empty_string_member() {
        let d = Dictionary::new(vec![b"".to_vec(), b"a".to_vec()]).unwrap();
        let p = Padfa::build(&build_trie(&d).unwrap(), BuildOptions::default()).unwrap();
        assert!(p.contains(b"").unwrap());
        assert!(p.contains(b"a").unwrap());
        assert!(!p.contains(b"aa").unwrap());
    }

    #[test]
    fn dawg_reach() {
        let p = Padfa::build(&build_suffix_dawg(b"abab").unwrap(), BuildOptions::default()).unwrap();
        assert_eq!(p.mode(), Mode::Reach);
        assert!(p.reach(b"ba").unwrap());
        assert!(p.reach(b"abab").unwrap());
        assert!(p.reach(b"").unwrap());
        assert!(!p.reach(b"aa").unwrap());
        assert!(!p.reach(b"ababa").unwrap());
        assert!(!p.reach(b"c").unwrap());
        assert_eq!(p.string_count(), 5);
    }

    #[test]
    fn mode_mismatch_rejected() {
        let m = Padfa::build(&sample(), BuildOptions::default()).unwrap();
        assert!(matches!(m.reach(b"ab"), Err(Error::ModeMismatch { expected: Mode::Reach, .. })));
        let r = Padfa::build(&build_suffix_dawg(b"ab").unwrap(), BuildOptions::default()).unwrap();
        assert!(matches!(r.contains(b"ab"), Err(Error::ModeMismatch { expected: Mode::Membership, .. })));
    }

    #[test]
    fn byte_mode_and_limit() {
        let p = Padfa::build(&sample(), BuildOptions { char_mode: CharMode::Byte, ..Default::default() }).unwrap();
        assert_eq!(p.text().width(), 8);
        assert!(p.contains(b"bbaba").unwrap());
        let all: Vec<Vec<u8>> = (1..=255u8).map(|b| vec![b]).collect();
        let d = Dictionary::new(all).unwrap();
        let t = build_trie(&d).unwrap();
        assert!(matches!(
            Padfa::build(&t, BuildOptions { char_mode: CharMode::Byte, ..Default::default() }),
            Err(Error::AlphabetTooLarge { sigma: 255 })
        ));
        let wide = Padfa::build(&t, BuildOptions::default()).unwrap();
        assert_eq!(wide.text().width(), 9);
        assert!(wide.contains(&[200]).unwrap());
    }

    #[test]
    fn rejects_invalid_automaton() {
        let cm = CodeMap::from_bytes(*b"a");
        let a = Adfa::from_edges(Mode::Membership, cm, 0, vec![false, true, false], [(0, Symbol(2), 1)]).unwrap();
        assert!(matches!(Padfa::build(&a, BuildOptions::default()), Err(Error::InvalidAutomaton(_))));
    }
}

use std::collections::VecDeque;
use std::fmt;

use super::Adfa;
use crate::alphabet::Symbol;
use crate::Mode;

/// The automaton rule a [`Violation`] breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Labels of one vertex are not strictly increasing.
    Determinism,
    /// An edge is labeled with the filler code.
    FillerLabel,
    /// A label is above the terminator code.
    LabelRange,
    /// An edge points outside the vertex set.
    TargetRange,
    RootOutOfRange,
    Cycle,
    RootInDegree,
    /// A non-root vertex has in-degree 0.
    ExtraSource,
    /// A vertex is unreachable from the root or cannot reach acceptance.
    RedundantState,
    /// Membership mode only: the terminator must label exactly the final
    /// edge of every accepted string.
    TerminatorPlacement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub vertex: u32,
    pub edge: Option<usize>,
    pub detail: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at vertex {}", self.rule, self.vertex)?;
        if let Some(e) = self.edge {
            write!(f, " (edge {e})")?;
        }
        write!(f, ": {}", self.detail)
    }
}

/// Checks every automaton invariant. An empty list means the automaton is
/// valid.
pub fn validate(a: &Adfa) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = a.vertex_count();
    let push = |out: &mut Vec<Violation>, rule, vertex, edge, detail| {
        out.push(Violation {
            rule,
            vertex,
            edge,
            detail,
        })
    };
    if a.root() as usize >= n {
        push(&mut out, Rule::RootOutOfRange, a.root(), None, "root is not a vertex");
        return out;
    }
    let max = a.alphabet().max_code();
    let mut bad_target = false;
    for v in 0..n as u32 {
        let mut prev: Option<Symbol> = None;
        for e in a.edge_range(v) {
            let c = a.label(e);
            if c == Symbol::FILLER {
                push(&mut out, Rule::FillerLabel, v, Some(e), "filler code labels an edge");
            } else if c.code() > max {
                push(&mut out, Rule::LabelRange, v, Some(e), "label above the terminator code");
            }
            if prev.is_some_and(|p| p >= c) {
                push(&mut out, Rule::Determinism, v, Some(e), "repeated or unsorted label");
            }
            prev = Some(c);
            if a.target(e) as usize >= n {
                push(&mut out, Rule::TargetRange, v, Some(e), "edge target is not a vertex");
                bad_target = true;
            }
        }
    }
    if bad_target {
        return out;
    }

    let indeg = a.in_degrees();
    for v in 0..n as u32 {
        if v == a.root() && indeg[v as usize] > 0 {
            push(&mut out, Rule::RootInDegree, v, None, "root has incoming edges");
        } else if v != a.root() && indeg[v as usize] == 0 {
            push(&mut out, Rule::ExtraSource, v, None, "vertex other than the root has no incoming edges");
        }
    }
    if let Err(crate::Error::Cyclic { vertex }) = a.topological_order() {
        push(&mut out, Rule::Cycle, vertex, None, "vertex lies on or behind a cycle");
    }

    let reachable = forward_reach(a);
    let live = backward_reach(a);
    for v in 0..n {
        if !reachable[v] {
            push(&mut out, Rule::RedundantState, v as u32, None, "unreachable from the root");
        } else if !live[v] {
            push(&mut out, Rule::RedundantState, v as u32, None, "no path to an accepting state");
        }
    }
    // the empty automaton (root only, accepting nothing) is allowed
    if n == 1 && a.edge_count() == 0 && !a.is_accepting(a.root()) {
        out.retain(|x| x.rule != Rule::RedundantState);
    }

    if a.mode() == Mode::Membership {
        let term = a.alphabet().terminator();
        if a.is_accepting(a.root()) {
            push(&mut out, Rule::TerminatorPlacement, a.root(), None, "root accepts the unterminated empty string");
        }
        for v in 0..n as u32 {
            for e in a.edge_range(v) {
                let t = a.target(e);
                if a.label(e) == term {
                    if !a.is_accepting(t) || a.out_degree(t) > 0 {
                        push(&mut out, Rule::TerminatorPlacement, v, Some(e), "terminator edge does not end in an accepting sink");
                    }
                } else if a.is_accepting(t) {
                    push(&mut out, Rule::TerminatorPlacement, v, Some(e), "accepting state entered by a non-terminator edge");
                }
            }
        }
    }
    out
}

fn forward_reach(a: &Adfa) -> Vec<bool> {
    let mut seen = vec![false; a.vertex_count()];
    let mut queue = VecDeque::from([a.root()]);
    seen[a.root() as usize] = true;
    while let Some(v) = queue.pop_front() {
        for &t in a.targets_of(v) {
            if !seen[t as usize] {
                seen[t as usize] = true;
                queue.push_back(t);
            }
        }
    }
    seen
}

fn backward_reach(a: &Adfa) -> Vec<bool> {
    let n = a.vertex_count();
    let mut rev_off = vec![0usize; n + 1];
    for (_, _, t) in a.edges() {
        rev_off[t as usize + 1] += 1;
    }
    for i in 0..n {
        rev_off[i + 1] += rev_off[i];
    }
    let mut fill = rev_off.clone();
    let mut rev = vec![0u32; a.edge_count()];
    for (s, _, t) in a.edges() {
        rev[fill[t as usize]] = s;
        fill[t as usize] += 1;
    }
    let mut seen = vec![false; n];
    let mut queue: VecDeque<u32> = a.accepting_states().collect();
    for &v in &queue {
        seen[v as usize] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &s in &rev[rev_off[v as usize]..rev_off[v as usize + 1]] {
            if !seen[s as usize] {
                seen[s as usize] = true;
                queue.push_back(s);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::CodeMap;
    use crate::automaton::{build_trie, minimize, Dictionary};

    fn cm() -> CodeMap {
        CodeMap::from_bytes(*b"ab")
    }

    fn rules(v: &[Violation]) -> Vec<Rule> {
        v.iter().map(|x| x.rule).collect()
    }

    #[test]
    fn constructed_automata_are_valid() {
        let d = Dictionary::from_lines(b"ab\nabab\nababa\nbb\nbbab\nbbaba").unwrap();
        let t = build_trie(&d).unwrap();
        assert_eq!(validate(&t), vec![]);
        assert_eq!(validate(&minimize(&t).unwrap()), vec![]);
    }

    #[test]
    fn duplicate_label_is_a_determinism_violation() {
        let a = Adfa::from_edges(
            Mode::Membership,
            cm(),
            0,
            vec![false, false, true],
            [(0, Symbol(1), 1), (0, Symbol(1), 1), (1, Symbol(3), 2)],
        )
        .unwrap();
        let v = validate(&a);
        assert_eq!(rules(&v), vec![Rule::Determinism]);
        assert_eq!(v[0].vertex, 0);
    }

    #[test]
    fn unreachable_vertex_is_redundant() {
        let a = Adfa::from_edges(
            Mode::Membership,
            cm(),
            0,
            vec![false, true, false],
            [(0, Symbol(3), 1), (2, Symbol(3), 1)],
        )
        .unwrap();
        let v = validate(&a);
        assert!(v.iter().any(|x| x.rule == Rule::RedundantState && x.vertex == 2));
        assert!(v.iter().any(|x| x.rule == Rule::ExtraSource && x.vertex == 2));
    }

    #[test]
    fn dead_vertex_is_redundant() {
        let a = Adfa::from_edges(
            Mode::Membership,
            cm(),
            0,
            vec![false, true, false],
            [(0, Symbol(3), 1), (0, Symbol(1), 2)],
        )
        .unwrap();
        assert_eq!(rules(&validate(&a)), vec![Rule::RedundantState]);
    }

    #[test]
    fn cycle_detected() {
        let a = Adfa::from_edges(
            Mode::Reach,
            cm(),
            0,
            vec![false, false, true],
            [(0, Symbol(1), 1), (1, Symbol(1), 2), (2, Symbol(2), 1)],
        )
        .unwrap();
        assert!(rules(&validate(&a)).contains(&Rule::Cycle));
    }

    #[test]
    fn misplaced_terminator() {
        // root -a-> 1 (accepting, entered without $)
        let a = Adfa::from_edges(Mode::Membership, cm(), 0, vec![false, true], [(0, Symbol(1), 1)]).unwrap();
        assert_eq!(rules(&validate(&a)), vec![Rule::TerminatorPlacement]);
        // same automaton is fine for reach mode
        let r = Adfa::from_edges(Mode::Reach, cm(), 0, vec![false, true], [(0, Symbol(1), 1)]).unwrap();
        assert!(validate(&r).is_empty());
    }

    #[test]
    fn filler_and_range() {
        let a = Adfa::from_edges(
            Mode::Reach,
            cm(),
            0,
            vec![false, true, true],
            [(0, Symbol(0), 1), (0, Symbol(7), 2)],
        )
        .unwrap();
        assert_eq!(rules(&validate(&a)), vec![Rule::FillerLabel, Rule::LabelRange]);
        let b = Adfa::from_edges(Mode::Reach, cm(), 0, vec![false, true], [(0, Symbol(1), 9)]).unwrap();
        assert_eq!(rules(&validate(&b)), vec![Rule::TargetRange]);
    }
}

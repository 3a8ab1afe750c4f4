use super::Adfa;
use crate::alphabet::{CodeMap, Symbol, FILLER_BYTE};
use crate::error::{Error, Result};
use crate::Mode;

const NONE: u32 = u32::MAX;

struct State {
    len: u32,
    link: u32,
    next: Vec<(Symbol, u32)>,
}

impl State {
    fn get(&self, c: Symbol) -> Option<u32> {
        self.next
            .binary_search_by_key(&c, |e| e.0)
            .ok()
            .map(|i| self.next[i].1)
    }

    fn set(&mut self, c: Symbol, t: u32) {
        match self.next.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.next[i].1 = t,
            Err(i) => self.next.insert(i, (c, t)),
        }
    }
}

/// Builds the suffix automaton (DAWG) of `text·$`.
///
/// Online construction with suffix links. Because the terminator occurs
/// once, the last state is the only state whose strings end at the end of
/// the text, so it is the unique sink and the only accepting state. The
/// empty suffix is not accepted.
pub fn build_suffix_dawg(text: &[u8]) -> Result<Adfa> {
    if let Some(index) = text.iter().position(|&b| b == FILLER_BYTE) {
        return Err(Error::FillerByte { index });
    }
    if text.len() >= (u32::MAX / 2) as usize {
        return Err(Error::TooLarge("suffix automaton ids must fit in 32 bits"));
    }
    let alphabet = CodeMap::from_strings([text]);
    let mut states: Vec<State> = Vec::with_capacity(2 * text.len() + 2);
    states.push(State {
        len: 0,
        link: NONE,
        next: Vec::new(),
    });
    let mut last = 0u32;

    let symbols = text
        .iter()
        .map(|&b| alphabet.encode(b).expect("byte is in the text alphabet"))
        .chain(std::iter::once(alphabet.terminator()));
    for c in symbols {
        let cur = states.len() as u32;
        states.push(State {
            len: states[last as usize].len + 1,
            link: 0,
            next: Vec::new(),
        });
        let mut p = last;
        while p != NONE && states[p as usize].get(c).is_none() {
            states[p as usize].set(c, cur);
            p = states[p as usize].link;
        }
        if p != NONE {
            let q = states[p as usize].get(c).unwrap();
            if states[p as usize].len + 1 == states[q as usize].len {
                states[cur as usize].link = q;
            } else {
                let clone = states.len() as u32;
                let cloned = State {
                    len: states[p as usize].len + 1,
                    link: states[q as usize].link,
                    next: states[q as usize].next.clone(),
                };
                states.push(cloned);
                while p != NONE && states[p as usize].get(c) == Some(q) {
                    states[p as usize].set(c, clone);
                    p = states[p as usize].link;
                }
                states[q as usize].link = clone;
                states[cur as usize].link = clone;
            }
        }
        last = cur;
    }

    let n = states.len();
    let mut accepting = vec![false; n];
    accepting[last as usize] = true;
    let mut offsets = Vec::with_capacity(n + 1);
    let mut labels = Vec::new();
    let mut targets = Vec::new();
    offsets.push(0u32);
    for s in &states {
        for &(c, t) in &s.next {
            labels.push(c);
            targets.push(t);
        }
        offsets.push(labels.len() as u32);
    }
    Adfa::from_csr(Mode::Reach, alphabet, 0, offsets, labels, targets, accepting).into_topological()
}

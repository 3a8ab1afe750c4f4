use super::Padfa;
use crate::alphabet::Symbol;
use crate::packed::{lcp_at_counted, PackedText};
use crate::Mode;

/// How a search ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Outcome {
    /// The whole pattern was consumed.
    #[default]
    Consumed,
    /// The pattern contains a byte outside the alphabet.
    UnknownByte { position: usize },
    /// The heavy run stopped at a vertex with no light out-edges.
    NoLightEdge { vertex: u32, position: usize },
    /// The vertex has light edges, none with the next label.
    MissingLabel { vertex: u32, position: usize },
}

impl Outcome {
    #[inline]
    pub fn accepted(self) -> bool {
        self == Outcome::Consumed
    }
}

/// A light edge taken during a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LightStep {
    pub label: Symbol,
    pub source: u32,
    pub target: u32,
    /// Branch nodes probed (0 for the edge-list backend).
    pub probes: u32,
}

/// One iteration of the search loop: a heavy run of `heavy_run` symbols
/// found with `words` packed comparisons, ending at `vertex`, then
/// optionally one light edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub heavy_run: usize,
    pub words: usize,
    pub vertex: u32,
    pub light: Option<LightStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SearchTrace {
    pub steps: Vec<TraceStep>,
    pub outcome: Outcome,
    /// Searched length, including the terminator in membership mode.
    pub pattern_len: usize,
}

impl SearchTrace {
    pub fn iterations(&self) -> usize {
        self.steps.len()
    }

    pub fn light_edges(&self) -> usize {
        self.steps.iter().filter(|s| s.light.is_some()).count()
    }

    /// Symbols consumed by heavy runs and light edges together.
    pub fn consumed(&self) -> usize {
        self.steps
            .iter()
            .map(|s| s.heavy_run + usize::from(s.light.is_some()))
            .sum()
    }

    pub fn word_ops(&self) -> usize {
        self.steps.iter().map(|s| s.words).sum()
    }
}

pub(crate) trait Observer {
    #[inline]
    fn start(&mut self, _pattern_len: usize) {}
    #[inline]
    fn heavy(&mut self, _run: usize, _words: usize, _vertex: u32) {}
    #[inline]
    fn light(&mut self, _step: LightStep) {}
}

pub(crate) struct NoTrace;

impl Observer for NoTrace {}

impl Observer for SearchTrace {
    fn start(&mut self, pattern_len: usize) {
        self.pattern_len = pattern_len;
    }

    fn heavy(&mut self, run: usize, words: usize, vertex: u32) {
        self.steps.push(TraceStep {
            heavy_run: run,
            words,
            vertex,
            light: None,
        });
    }

    fn light(&mut self, step: LightStep) {
        if let Some(last) = self.steps.last_mut() {
            last.light = Some(step);
        }
    }
}

impl Padfa {
    pub(crate) fn run<O: Observer>(&self, pattern: &[u8], obs: &mut O) -> Outcome {
        let terminated = self.mode == Mode::Membership;
        let end = terminated.then(|| self.alphabet.terminator());
        let p = match PackedText::encode_bytes(pattern, self.alphabet.table(), end, self.text.width()) {
            Ok(p) => p,
            Err(position) => return Outcome::UnknownByte { position },
        };
        let m = p.len();
        obs.start(m);

        let mut v = 0usize;
        let mut pos = 0usize;
        while pos < m {
            let (l, words) = lcp_at_counted(&self.text, v, &p, pos);
            v += l;
            pos += l;
            obs.heavy(l, words, v as u32);
            if pos >= m {
                break;
            }
            if !self.light.get(v) {
                return Outcome::NoLightEdge {
                    vertex: v as u32,
                    position: pos,
                };
            }
            let group = self.light.rank1(v);
            let c = p.get(pos);
            let (hit, probes) = self.branches.access(self.backend, group, c);
            let Some(at) = hit else {
                return Outcome::MissingLabel {
                    vertex: v as u32,
                    position: pos,
                };
            };
            let u = self.destinations.get(at) as u32;
            obs.light(LightStep {
                label: c,
                source: v as u32,
                target: u,
                probes,
            });
            v = u as usize;
            pos += 1;
        }
        Outcome::Consumed
    }
}

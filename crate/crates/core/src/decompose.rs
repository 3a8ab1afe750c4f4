//! Symmetric centroid path decomposition.
//!
//! An edge `(u, v)` is heavy when `λ(u) = λ(v)`, with
//! `λ(x) = (⌊log2 π(r, x)⌋, ⌊log2 π(x, W)⌋)`, `π(r, x)` the number of paths
//! from the root to `x` and `π(x, W)` the number of paths from `x` to a sink.
//! Heavy edges form vertex-disjoint paths, and every path of the automaton
//! crosses at most `2⌊log2 π(r, W)⌋` light edges.

use crate::alphabet::Symbol;
use crate::automaton::Adfa;
use crate::error::{Error, Result};

/// `⌊log2 x⌋` by bit length; `None` for zero.
#[inline]
pub fn floor_log2(x: u64) -> Option<u32> {
    (x != 0).then(|| 63 - x.leading_zeros())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCounts {
    /// π(r, v)
    pub from_root: Vec<u64>,
    /// π(v, W)
    pub to_sink: Vec<u64>,
    root: u32,
}

impl PathCounts {
    /// `λ(v)`; zero counts (only possible on invalid automata) map to
    /// `u32::MAX`.
    #[inline]
    pub fn lambda(&self, v: u32) -> (u32, u32) {
        let f = |x| floor_log2(x).unwrap_or(u32::MAX);
        (f(self.from_root[v as usize]), f(self.to_sink[v as usize]))
    }

    /// π(r, W): the number of root-to-sink paths, i.e. accepted strings when
    /// the accepting states are the sinks.
    pub fn total(&self) -> u64 {
        self.to_sink.get(self.root as usize).copied().unwrap_or(0)
    }
}

/// Forward and backward path counting over a topological order, with
/// checked arithmetic.
pub fn count_paths(a: &Adfa) -> Result<PathCounts> {
    let order = a.topological_order()?;
    let n = a.vertex_count();
    let mut from_root = vec![0u64; n];
    from_root[a.root() as usize] = 1;
    for &v in &order {
        let here = from_root[v as usize];
        if here == 0 {
            continue;
        }
        for &t in a.targets_of(v) {
            let slot = &mut from_root[t as usize];
            *slot = slot.checked_add(here).ok_or(Error::CountOverflow { vertex: t })?;
        }
    }
    let mut to_sink = vec![0u64; n];
    for &v in order.iter().rev() {
        to_sink[v as usize] = if a.out_degree(v) == 0 {
            1
        } else {
            a.targets_of(v).iter().try_fold(0u64, |acc, &t| {
                acc.checked_add(to_sink[t as usize])
                    .ok_or(Error::CountOverflow { vertex: v })
            })?
        };
    }
    Ok(PathCounts {
        from_root,
        to_sink,
        root: a.root(),
    })
}

/// Heavy/light split of the edge set, indexed by the automaton's CSR edge
/// positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClassification {
    heavy: Vec<bool>,
    light_source: Vec<bool>,
    heavy_count: usize,
}

/// One vertex's light out-edges: labels in code order and their targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LightGroup {
    pub vertex: u32,
    pub labels: Vec<Symbol>,
    pub destinations: Vec<u32>,
}

impl EdgeClassification {
    #[inline]
    pub fn is_heavy(&self, edge: usize) -> bool {
        self.heavy[edge]
    }

    pub fn heavy_count(&self) -> usize {
        self.heavy_count
    }

    pub fn light_count(&self) -> usize {
        self.heavy.len() - self.heavy_count
    }

    /// The string `B`: bit `v` is set iff `v` has a light out-edge.
    pub fn light_source_bits(&self) -> &[bool] {
        &self.light_source
    }

    /// `n_L`, the number of vertices with light out-edges.
    pub fn light_source_count(&self) -> usize {
        self.light_source.iter().filter(|&&b| b).count()
    }

    pub fn heavy_out(&self, a: &Adfa, v: u32) -> Option<usize> {
        a.edge_range(v).find(|&e| self.heavy[e])
    }

    pub fn light_edges<'a>(&'a self, a: &'a Adfa, v: u32) -> impl Iterator<Item = usize> + 'a {
        a.edge_range(v).filter(move |&e| !self.heavy[e])
    }

    pub fn light_group(&self, a: &Adfa, v: u32) -> LightGroup {
        let (labels, destinations) = self.light_edges(a, v).map(|e| (a.label(e), a.target(e))).unzip();
        LightGroup {
            vertex: v,
            labels,
            destinations,
        }
    }

    /// Light groups of all vertices with `B[v] = 1`, in vertex order.
    pub fn light_groups(&self, a: &Adfa) -> Vec<LightGroup> {
        (0..a.vertex_count() as u32)
            .filter(|&v| self.light_source[v as usize])
            .map(|v| self.light_group(a, v))
            .collect()
    }

    /// Checks that heavy edges form vertex-disjoint paths: at most one heavy
    /// out-edge and one heavy in-edge per vertex.
    pub fn check_disjoint_paths(&self, a: &Adfa) -> Result<()> {
        let mut heavy_in = vec![false; a.vertex_count()];
        for v in 0..a.vertex_count() as u32 {
            let mut outs = 0;
            for e in a.edge_range(v).filter(|&e| self.heavy[e]) {
                outs += 1;
                let t = a.target(e) as usize;
                if outs > 1 {
                    return Err(Error::HeavyPathConflict { vertex: v });
                }
                if std::mem::replace(&mut heavy_in[t], true) {
                    return Err(Error::HeavyPathConflict { vertex: t as u32 });
                }
            }
        }
        Ok(())
    }

    /// Largest number of light edges on any root-to-sink path, computed
    /// exactly by dynamic programming over the DAG.
    pub fn max_light_on_path(&self, a: &Adfa) -> Result<u32> {
        let order = a.topological_order()?;
        let mut best = vec![0u32; a.vertex_count()];
        for &v in order.iter().rev() {
            best[v as usize] = a
                .edge_range(v)
                .map(|e| best[a.target(e) as usize] + u32::from(!self.heavy[e]))
                .max()
                .unwrap_or(0);
        }
        Ok(best[a.root() as usize])
    }
}

/// Classifies every edge by comparing `λ` at both ends.
pub fn classify_edges(a: &Adfa, pc: &PathCounts) -> EdgeClassification {
    let mut heavy = vec![false; a.edge_count()];
    let mut light_source = vec![false; a.vertex_count()];
    let mut heavy_count = 0;
    for v in 0..a.vertex_count() as u32 {
        let lv = pc.lambda(v);
        for e in a.edge_range(v) {
            if pc.lambda(a.target(e)) == lv {
                heavy[e] = true;
                heavy_count += 1;
            } else {
                light_source[v as usize] = true;
            }
        }
    }
    EdgeClassification {
        heavy,
        light_source,
        heavy_count,
    }
}

/// Renumbers the automaton so each heavy path occupies consecutive ids
/// (`v -> v + 1` along heavy edges) with the root at 0. Paths are laid out
/// in topological order of their first vertices.
pub fn heavy_renumber(a: &Adfa, ec: &EdgeClassification) -> Result<(Adfa, EdgeClassification)> {
    ec.check_disjoint_paths(a)?;
    let n = a.vertex_count();
    let mut heavy_next = vec![u32::MAX; n];
    let mut has_heavy_in = vec![false; n];
    for v in 0..n as u32 {
        if let Some(e) = ec.heavy_out(a, v) {
            heavy_next[v as usize] = a.target(e);
            has_heavy_in[a.target(e) as usize] = true;
        }
    }
    let topo = a.topological_order()?;
    let mut order = Vec::with_capacity(n);
    for &head in topo.iter().filter(|&&v| !has_heavy_in[v as usize]) {
        let mut u = head;
        loop {
            order.push(u);
            match heavy_next[u as usize] {
                u32::MAX => break,
                t => u = t,
            }
        }
    }
    if order.len() != n || order.first() != Some(&a.root()) {
        return Err(Error::HeavyPathConflict {
            vertex: a.root(),
        });
    }
    let renumbered = a.permute(&order);
    let mut heavy = Vec::with_capacity(a.edge_count());
    let mut light_source = Vec::with_capacity(n);
    for &old in &order {
        heavy.extend_from_slice(&ec.heavy[a.edge_range(old)]);
        light_source.push(ec.light_source[old as usize]);
    }
    Ok((
        renumbered,
        EdgeClassification {
            heavy,
            light_source,
            heavy_count: ec.heavy_count,
        },
    ))
}

/// Edge totals over branching vertices: `Σ outdeg(v)` over vertices with
/// out-degree at least 2, and likewise for in-degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BranchingDegrees {
    pub out_sum: u64,
    pub in_sum: u64,
}

pub fn branching_degrees(a: &Adfa) -> BranchingDegrees {
    let out_sum = (0..a.vertex_count() as u32)
        .map(|v| a.out_degree(v) as u64)
        .filter(|&d| d >= 2)
        .sum();
    let in_sum = a.in_degrees().into_iter().map(u64::from).filter(|&d| d >= 2).sum();
    BranchingDegrees { out_sum, in_sum }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{build_trie, minimize, Dictionary};

    fn sample_min() -> Adfa {
        let d = Dictionary::from_lines(b"ab\nabab\nababa\nbb\nbbab\nbbaba").unwrap();
        minimize(&build_trie(&d).unwrap()).unwrap()
    }

    /// Oracle: count paths by explicit enumeration from every vertex.
    fn enumerate_paths(a: &Adfa, from: u32, to: u32) -> u64 {
        if from == to {
            return 1;
        }
        a.targets_of(from).iter().map(|&t| enumerate_paths(a, t, to)).sum()
    }

    #[test]
    fn sample_counts() {
        let a = sample_min();
        let pc = count_paths(&a).unwrap();
        assert_eq!(pc.total(), 6);
        let sink = a.accepting_states().next().unwrap();
        for v in 0..a.vertex_count() as u32 {
            assert_eq!(pc.from_root[v as usize], enumerate_paths(&a, a.root(), v));
            assert_eq!(pc.to_sink[v as usize], enumerate_paths(&a, v, sink));
        }
        assert_eq!(pc.to_sink[sink as usize], 1);
        // 1-based vertex 5 (0-based 4) is the last vertex of the heavy chain
        let ec = classify_edges(&a, &pc);
        let (r, _) = heavy_renumber(&a, &ec).unwrap();
        let pr = count_paths(&r).unwrap();
        assert_eq!(pr.from_root[4], 2);
        assert_eq!(pr.to_sink[4], 2);
    }

    #[test]
    fn sample_classification() {
        let a = sample_min();
        let pc = count_paths(&a).unwrap();
        let ec = classify_edges(&a, &pc);
        assert_eq!(ec.heavy_count(), 3);
        assert_eq!(ec.light_count(), 6);
        let (r, rc) = heavy_renumber(&a, &ec).unwrap();
        let b: Vec<u8> = rc.light_source_bits().iter().map(|&x| x as u8).collect();
        assert_eq!(b, vec![1, 0, 1, 0, 1, 1, 0]);
        let heavy_labels: Vec<String> = (0..r.vertex_count() as u32)
            .filter_map(|v| rc.heavy_out(&r, v).map(|e| (v, e)))
            .map(|(v, e)| {
                assert_eq!(r.target(e), v + 1);
                r.alphabet().display(r.label(e))
            })
            .collect();
        assert_eq!(heavy_labels.concat(), "bab");
        // vertex 5 (1-based) has light edges a -> 6 and $ -> 7
        let g = rc.light_group(&r, 4);
        assert_eq!(g.destinations, vec![5, 6]);
        assert_eq!(
            g.labels.iter().map(|&s| r.alphabet().display(s)).collect::<String>(),
            "a$"
        );
        rc.check_disjoint_paths(&r).unwrap();
        assert_eq!(classify_edges(&r, &count_paths(&r).unwrap()), rc);
    }

    #[test]
    fn single_string_is_all_heavy() {
        let d = Dictionary::from_lines(b"hello").unwrap();
        let a = build_trie(&d).unwrap();
        let pc = count_paths(&a).unwrap();
        for v in 0..a.vertex_count() as u32 {
            assert_eq!(pc.lambda(v), (0, 0));
        }
        let ec = classify_edges(&a, &pc);
        assert_eq!(ec.light_count(), 0);
        let (r, _) = heavy_renumber(&a, &ec).unwrap();
        assert_eq!(r, a);
    }

    #[test]
    fn no_heavy_edges_gives_topological_numbering() {
        // root -a-> s, root -b-> s: λ(root) = (0, 1), λ(s) = (1, 0)
        let cm = crate::alphabet::CodeMap::from_bytes(*b"ab");
        let a = Adfa::from_edges(
            crate::Mode::Reach,
            cm,
            1,
            vec![true, false],
            [(1, Symbol(1), 0), (1, Symbol(2), 0)],
        )
        .unwrap();
        let ec = classify_edges(&a, &count_paths(&a).unwrap());
        assert_eq!(ec.heavy_count(), 0);
        let (r, rc) = heavy_renumber(&a, &ec).unwrap();
        assert_eq!(r.root(), 0);
        assert_eq!(r.targets_of(0), &[1, 1]);
        assert_eq!(classify_edges(&r, &count_paths(&r).unwrap()), rc);
    }

    #[test]
    fn renumbering_is_a_fixed_point() {
        let d = Dictionary::from_lines(b"a\nb\nc\nd\nab\nabc").unwrap();
        let a = build_trie(&d).unwrap();
        let ec = classify_edges(&a, &count_paths(&a).unwrap());
        let (r, rc) = heavy_renumber(&a, &ec).unwrap();
        let (r2, rc2) = heavy_renumber(&r, &rc).unwrap();
        assert_eq!((r, rc), (r2, rc2));
    }

    #[test]
    fn conflicting_classification_rejected() {
        let a = sample_min();
        let mut ec = classify_edges(&a, &count_paths(&a).unwrap());
        ec.heavy.iter_mut().for_each(|h| *h = true);
        assert!(matches!(heavy_renumber(&a, &ec), Err(Error::HeavyPathConflict { .. })));
    }

    #[test]
    fn light_bound_on_sample() {
        let a = sample_min();
        let ec = classify_edges(&a, &count_paths(&a).unwrap());
        assert!(ec.max_light_on_path(&a).unwrap() <= 2 * floor_log2(6).unwrap());
        let deg = branching_degrees(&a);
        assert!(deg.out_sum < 12 && deg.in_sum < 12);
    }

    #[test]
    fn floor_log2_values() {
        assert_eq!(floor_log2(0), None);
        assert_eq!(floor_log2(1), Some(0));
        assert_eq!(floor_log2(6), Some(2));
        assert_eq!(floor_log2(u64::MAX), Some(63));
    }
}

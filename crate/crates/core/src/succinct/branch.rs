//! Branch structures: map a label to its rank within one vertex's light
//! edge group.

use crate::alphabet::Symbol;
use crate::error::{Error, Result};

pub const NO_CHILD: u16 = u16::MAX;

/// Which branch structure an index uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Backend {
    /// Sorted label array, binary search.
    #[default]
    EdgeList,
    /// Weight-biased binary search tree.
    Biased,
}

/// Label lookup returning the 0-based rank of `c` in code order.
pub trait Branch {
    fn labels(&self) -> &[Symbol];
    fn access(&self, c: Symbol) -> Option<usize>;
}

fn check_inputs(labels: &[Symbol], weights: &[u64]) -> Result<()> {
    if labels.len() != weights.len() {
        return Err(Error::LengthMismatch {
            labels: labels.len(),
            weights: weights.len(),
        });
    }
    if labels.len() >= NO_CHILD as usize {
        return Err(Error::TooLarge("branch has too many labels"));
    }
    if let Some(i) = labels.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedLabels { index: i + 1 });
    }
    if let Some(index) = weights.iter().position(|&w| w == 0) {
        return Err(Error::ZeroWeight { index });
    }
    Ok(())
}

#[inline]
pub fn edge_list_search(labels: &[Symbol], c: Symbol) -> Option<usize> {
    if labels.len() <= 4 {
        labels.iter().position(|&l| l == c)
    } else {
        labels.binary_search(&c).ok()
    }
}

/// Child links of a static biased tree over `n` sorted labels.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TreeLayout {
    pub root: u16,
    pub left: Vec<u16>,
    pub right: Vec<u16>,
}

/// Builds the tree by weighted-median splits: the root of a label range is
/// the leftmost label whose prefix weight reaches half the range total.
/// Each child range then weighs at most half its parent, which gives
/// `depth(c) <= 1 + log2(W / w(c))`.
pub fn biased_layout(weights: &[u64]) -> TreeLayout {
    let n = weights.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0u128);
    for &w in weights {
        prefix.push(prefix.last().unwrap() + u128::from(w));
    }
    let mut left = vec![NO_CHILD; n];
    let mut right = vec![NO_CHILD; n];
    // (lo, hi, parent, is_left)
    let mut stack: Vec<(usize, usize, u16, bool)> = vec![(0, n, NO_CHILD, false)];
    let mut root = NO_CHILD;
    while let Some((lo, hi, parent, is_left)) = stack.pop() {
        if lo >= hi {
            continue;
        }
        let total = prefix[hi] - prefix[lo];
        // smallest i in [lo, hi) with 2 * (prefix[i+1] - prefix[lo]) >= total
        let mid = lo + prefix[lo + 1..=hi].partition_point(|&p| 2 * (p - prefix[lo]) < total);
        let node = mid as u16;
        if parent == NO_CHILD {
            root = node;
        } else if is_left {
            left[parent as usize] = node;
        } else {
            right[parent as usize] = node;
        }
        stack.push((mid + 1, hi, node, false));
        stack.push((lo, mid, node, true));
    }
    TreeLayout { root, left, right }
}

/// Searches a biased tree, returning the rank of `c` and the number of
/// nodes visited.
#[inline]
pub fn biased_search(label: impl Fn(usize) -> Symbol, layout: TreeView<'_>, c: Symbol) -> (Option<usize>, u32) {
    let mut node = layout.root;
    let mut probes = 0;
    while node != NO_CHILD {
        probes += 1;
        let l = label(node as usize);
        node = match c.cmp(&l) {
            std::cmp::Ordering::Equal => return (Some(node as usize), probes),
            std::cmp::Ordering::Less => layout.left[node as usize],
            std::cmp::Ordering::Greater => layout.right[node as usize],
        };
    }
    (None, probes)
}

/// Borrowed tree links, so flattened branch tables can share the search.
#[derive(Clone, Copy, Debug)]
pub struct TreeView<'a> {
    pub root: u16,
    pub left: &'a [u16],
    pub right: &'a [u16],
}

impl TreeLayout {
    pub fn view(&self) -> TreeView<'_> {
        TreeView {
            root: self.root,
            left: &self.left,
            right: &self.right,
        }
    }

    /// Node depth of every position (root = 1).
    pub fn depths(&self) -> Vec<u32> {
        let mut depth = vec![0u32; self.left.len()];
        let mut stack = Vec::new();
        if self.root != NO_CHILD {
            stack.push((self.root, 1u32));
        }
        while let Some((v, d)) = stack.pop() {
            depth[v as usize] = d;
            for c in [self.left[v as usize], self.right[v as usize]] {
                if c != NO_CHILD {
                    stack.push((c, d + 1));
                }
            }
        }
        depth
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeListBranch {
    labels: Vec<Symbol>,
    weights: Vec<u64>,
}

impl EdgeListBranch {
    pub fn new(labels: Vec<Symbol>, weights: Vec<u64>) -> Result<EdgeListBranch> {
        check_inputs(&labels, &weights)?;
        Ok(EdgeListBranch { labels, weights })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }
}

impl Branch for EdgeListBranch {
    fn labels(&self) -> &[Symbol] {
        &self.labels
    }

    fn access(&self, c: Symbol) -> Option<usize> {
        edge_list_search(&self.labels, c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiasedTree {
    labels: Vec<Symbol>,
    weights: Vec<u64>,
    layout: TreeLayout,
}

/// Builds a biased tree over sorted `labels` with positive `weights`.
pub fn bst_build(labels: Vec<Symbol>, weights: Vec<u64>) -> Result<BiasedTree> {
    check_inputs(&labels, &weights)?;
    let layout = biased_layout(&weights);
    Ok(BiasedTree {
        labels,
        weights,
        layout,
    })
}

impl BiasedTree {
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn layout(&self) -> &TreeLayout {
        &self.layout
    }

    /// Depth of the node holding position `i` (root = 1).
    pub fn depth(&self, i: usize) -> u32 {
        self.layout.depths()[i]
    }

    /// Rank of `c` and nodes visited.
    pub fn access_counted(&self, c: Symbol) -> (Option<usize>, u32) {
        biased_search(|i| self.labels[i], self.layout.view(), c)
    }

    /// Labels in in-order traversal.
    pub fn in_order(&self) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(self.labels.len());
        let mut stack = Vec::new();
        let mut node = self.layout.root;
        while node != NO_CHILD || !stack.is_empty() {
            while node != NO_CHILD {
                stack.push(node);
                node = self.layout.left[node as usize];
            }
            let v = stack.pop().unwrap();
            out.push(self.labels[v as usize]);
            node = self.layout.right[v as usize];
        }
        out
    }
}

impl Branch for BiasedTree {
    fn labels(&self) -> &[Symbol] {
        &self.labels
    }

    fn access(&self, c: Symbol) -> Option<usize> {
        self.access_counted(c).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn syms(n: usize) -> Vec<Symbol> {
        (1..=n as u16).map(Symbol).collect()
    }

    #[test]
    fn sigma5_pair() {
        // labels a=1, $=3 with weights pi(6,W) = pi(7,W) = 1
        let t = bst_build(vec![Symbol(1), Symbol(3)], vec![1, 1]).unwrap();
        assert!(t.depth(0) <= 2 && t.depth(1) <= 2);
        assert_eq!(t.access(Symbol(1)), Some(0));
        assert_eq!(t.access(Symbol(3)), Some(1));
        assert_eq!(t.access(Symbol(2)), None);
        let e = EdgeListBranch::new(vec![Symbol(1), Symbol(3)], vec![1, 1]).unwrap();
        assert_eq!(e.access(Symbol(1)), Some(0));
        assert_eq!(e.access(Symbol(3)), Some(1));
        assert_eq!(e.access(Symbol(2)), None);
    }

    #[test]
    fn singleton() {
        let t = bst_build(vec![Symbol(9)], vec![4]).unwrap();
        assert_eq!(t.depth(0), 1);
        assert_eq!(t.access(Symbol(9)), Some(0));
        assert_eq!(t.access_counted(Symbol(3)), (None, 1));
    }

    #[test]
    fn heavy_label_at_root() {
        let t = bst_build(syms(3), vec![8, 1, 1]).unwrap();
        assert_eq!(t.layout().root, 0);
        assert_eq!(t.depth(0), 1);
    }

    #[test]
    fn input_errors() {
        assert!(matches!(bst_build(syms(2), vec![1, 0]), Err(Error::ZeroWeight { index: 1 })));
        assert!(matches!(bst_build(syms(2), vec![1]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(
            bst_build(vec![Symbol(2), Symbol(2)], vec![1, 1]),
            Err(Error::UnsortedLabels { index: 1 })
        ));
        assert!(matches!(
            EdgeListBranch::new(vec![Symbol(3), Symbol(1)], vec![1, 1]),
            Err(Error::UnsortedLabels { index: 1 })
        ));
    }

    #[test]
    fn deterministic_layout() {
        let w = vec![3, 1, 4, 1, 5, 9, 2, 6];
        assert_eq!(biased_layout(&w), biased_layout(&w));
    }

    proptest! {
        #[test]
        fn depth_bound_and_order(weights in proptest::collection::vec(1u64..1_000_000, 1..256)) {
            let n = weights.len();
            let t = bst_build(syms(n), weights.clone()).unwrap();
            let total: f64 = weights.iter().map(|&w| w as f64).sum();
            let depths = t.layout().depths();
            for i in 0..n {
                let bound = 2.0 + (total / weights[i] as f64).log2();
                prop_assert!(f64::from(depths[i]) <= bound + 1e-9);
                let (hit, probes) = t.access_counted(Symbol(i as u16 + 1));
                prop_assert_eq!(hit, Some(i));
                prop_assert_eq!(probes, depths[i]);
            }
            prop_assert_eq!(t.in_order(), syms(n));
            let e = EdgeListBranch::new(syms(n), weights).unwrap();
            for c in 0..=n as u16 + 1 {
                prop_assert_eq!(t.access(Symbol(c)), e.access(Symbol(c)));
            }
        }
    }
}

//! Rank/select bit vectors and per-vertex branch structures.

mod branch;
mod fid;
mod intvec;

pub use branch::{
    biased_layout, biased_search, bst_build, edge_list_search, Backend, BiasedTree, Branch,
    EdgeListBranch, TreeLayout, TreeView, NO_CHILD,
};
pub use intvec::{width_for, IntVec};
pub use fid::{Fid, BLOCK_BITS, SUPERBLOCK_BITS};

//! Inverse geodesic length on graphs of bounded treewidth.

mod decomposition;
mod recursion;
mod separation;

pub use decomposition::{min_fill, TreeDecomposition};
pub use recursion::{igl_treewidth, igl_treewidth_with, PairAudit, TreewidthOptions, TreewidthOutcome, TreewidthStats};
pub use separation::{
    assignment_index, balanced_separation, igl_across_separation, igl_across_with_rows, projected_point,
    separation_box, BagSide, BalancedSeparation,
};

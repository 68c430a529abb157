//! Inverse geodesic length and related distance sums on weighted graphs.

pub mod error;
pub mod generate;
pub mod graph;
pub mod isw;
pub mod planar;
pub mod poly;
pub mod range_tree;
pub mod scalar;
pub mod treewidth;

pub use error::{IglError, Result};
pub use poly::DistanceKernel;
pub use scalar::{ArithMode, Dist, Rational, Scalar};

//! Batched inverse shifted-weight queries.
//!
//! `ISW(R, δ) = Σ_{p ∈ P ∩ R} kernel(δ + ω(p))`, answered for a whole batch
//! of `(R, δ)` pairs at once through the canonical subsets of a range tree.

use rayon::prelude::*;

use crate::error::{IglError, Result};
use crate::poly::DistanceKernel;
use crate::range_tree::{CanonicalId, PointSet, QueryBox, RangeTree};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct IswQuery<T> {
    pub region: QueryBox<T>,
    pub shift: T,
}

/// Work counters of one batch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IswStats {
    pub canonical_sets: usize,
    pub evaluations: usize,
    pub weight_terms: usize,
}

pub fn isw_batch<T: Scalar>(
    points: PointSet<T>,
    omega: &[T],
    queries: &[IswQuery<T>],
    kernel: DistanceKernel,
) -> Result<Vec<T>> {
    if omega.len() != points.len() {
        return Err(IglError::Dimension { expected: points.len(), got: omega.len() });
    }
    let tree = RangeTree::build(points)?;
    Ok(isw_batch_with_tree(&tree, omega, queries, kernel)?.0)
}

/// As [`isw_batch`], over a prebuilt tree. `omega` is indexed like the tree's
/// point set.
pub fn isw_batch_with_tree<T: Scalar>(
    tree: &RangeTree<T>,
    omega: &[T],
    queries: &[IswQuery<T>],
    kernel: DistanceKernel,
) -> Result<(Vec<T>, IswStats)> {
    if let Some(w) = omega.iter().find(|w| !w.is_positive()) {
        return Err(IglError::invalid(format!("point weight {w} is not positive")));
    }
    if let Some(q) = queries.iter().find(|q| q.shift < T::zero()) {
        return Err(IglError::invalid(format!("negative shift {}", q.shift)));
    }
    let mut pairs: Vec<(CanonicalId, u32)> = Vec::new();
    let mut buf = Vec::new();
    for (j, q) in queries.iter().enumerate() {
        buf.clear();
        tree.query_into(&q.region, &mut buf)?;
        pairs.extend(buf.iter().map(|&id| (id, j as u32)));
    }
    pairs.par_sort_unstable();
    let total_refs = pairs.len();

    let mut groups: Vec<&[(CanonicalId, u32)]> = Vec::new();
    let mut start = 0;
    while start < pairs.len() {
        let id = pairs[start].0;
        let end = start + pairs[start..].partition_point(|p| p.0 == id);
        groups.push(&pairs[start..end]);
        start = end;
    }
    debug_assert_eq!(groups.iter().map(|g| g.len()).sum::<usize>(), total_refs);

    let results: Vec<Result<Vec<T>>> = groups
        .par_iter()
        .map(|group| {
            let weights: Vec<T> = tree.members(group[0].0).iter().map(|&p| omega[p as usize].clone()).collect();
            let xs: Vec<T> = group.iter().map(|&(_, j)| queries[j as usize].shift.clone()).collect();
            T::kernel_sum_eval(kernel, &weights, &xs)
        })
        .collect();

    let mut out = vec![T::zero(); queries.len()];
    let mut stats = IswStats { canonical_sets: groups.len(), evaluations: total_refs, weight_terms: 0 };
    for (group, vals) in groups.iter().zip(results) {
        stats.weight_terms += tree.members(group[0].0).len();
        for (&(_, j), v) in group.iter().zip(vals?) {
            out[j as usize] += v;
        }
    }
    Ok((out, stats))
}

/// Linear-scan reference.
pub fn isw_scan<T: Scalar>(
    points: &PointSet<T>,
    omega: &[T],
    queries: &[IswQuery<T>],
    kernel: DistanceKernel,
) -> Vec<T> {
    queries
        .iter()
        .map(|q| {
            let mut acc = T::zero();
            for (i, w) in omega.iter().enumerate().take(points.len()) {
                if q.region.contains(points.point(i)) {
                    acc += kernel.apply(&(q.shift.clone() + w));
                }
            }
            acc
        })
        .collect()
}

use std::ops::Bound;

use super::TreeDecomposition;
use crate::error::{IglError, Result};
use crate::graph::{dijkstra, Separation, VertexId, WeightedGraph};
use crate::isw::{isw_batch_with_tree, IswQuery};
use crate::poly::DistanceKernel;
use crate::range_tree::{Interval, PointSet, QueryBox, RangeTree};
use crate::scalar::{Dist, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BagSide {
    Center,
    A,
    B,
}

/// A separation read off a centroid bag, with the side each bag fell on.
#[derive(Clone, Debug)]
pub struct BalancedSeparation {
    pub separation: Separation,
    pub center: usize,
    pub bag_side: Vec<BagSide>,
}

/// Separation from a weighted centroid bag. Each vertex is charged to the
/// bag nearest the root that holds it; the components of the tree minus the
/// centroid are packed greedily, largest first, onto the lighter side.
pub fn balanced_separation<T: Scalar>(td: &TreeDecomposition, g: &WeightedGraph<T>) -> Result<BalancedSeparation> {
    let n = g.n();
    let nb = td.bags.len();
    if nb == 0 {
        return Err(IglError::invalid("empty decomposition"));
    }
    let mut parent = vec![usize::MAX; nb];
    let mut order = vec![0];
    let mut seen = vec![false; nb];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let b = order[i];
        i += 1;
        for &c in &td.adj[b] {
            if !seen[c] {
                seen[c] = true;
                parent[c] = b;
                order.push(c);
            }
        }
    }
    let mut top = vec![usize::MAX; n];
    let mut weight = vec![0usize; nb];
    for &b in &order {
        for &v in &td.bags[b] {
            if top[v] == usize::MAX {
                top[v] = b;
                weight[b] += 1;
            }
        }
    }
    let mut sub = weight.clone();
    for &b in order.iter().rev() {
        if parent[b] != usize::MAX {
            sub[parent[b]] += sub[b];
        }
    }
    let total = sub[0];
    let mut c = 0;
    loop {
        let heavy = td.adj[c].iter().copied().find(|&x| parent[x] == c && 2 * sub[x] > total);
        match heavy {
            Some(x) => c = x,
            None => break,
        }
    }
    let s: Vec<VertexId> = td.bags[c].clone();
    if n <= s.len() {
        return Err(IglError::invalid("separator bag holds every vertex"));
    }

    let mut comp = vec![usize::MAX; nb];
    let mut comp_count: Vec<usize> = Vec::new();
    for &x in &td.adj[c] {
        let id = comp_count.len();
        comp_count.push(0);
        comp[x] = id;
        let mut stack = vec![x];
        while let Some(b) = stack.pop() {
            for &y in &td.adj[b] {
                if y != c && comp[y] == usize::MAX {
                    comp[y] = id;
                    stack.push(y);
                }
            }
        }
    }
    let mut in_s = vec![false; n];
    for &v in &s {
        in_s[v] = true;
    }
    for v in 0..n {
        if !in_s[v] {
            comp_count[comp[top[v]]] += 1;
        }
    }
    let mut ids: Vec<usize> = (0..comp_count.len()).collect();
    ids.sort_by_key(|&i| (std::cmp::Reverse(comp_count[i]), i));
    let mut comp_side = vec![BagSide::A; comp_count.len()];
    let (mut wa, mut wb) = (0, 0);
    for i in ids {
        if wa <= wb {
            wa += comp_count[i];
        } else {
            wb += comp_count[i];
            comp_side[i] = BagSide::B;
        }
    }
    let bag_side: Vec<BagSide> = (0..nb).map(|b| if b == c { BagSide::Center } else { comp_side[comp[b]] }).collect();
    let mut a = Vec::new();
    let mut bset = Vec::new();
    for v in 0..n {
        if in_s[v] {
            continue;
        }
        match bag_side[top[v]] {
            BagSide::A => a.push(v),
            BagSide::B => bset.push(v),
            BagSide::Center => unreachable!(),
        }
    }
    Ok(BalancedSeparation { separation: Separation { a, b: bset, s }, center: c, bag_side })
}

/// Box `R^(i)(b)` in the `k − 1` coordinates `j ≠ i`, from `d(b, s_j)`.
pub fn separation_box<T: Scalar>(b_dist: &[T], i: usize) -> QueryBox<T> {
    let dims = (0..b_dist.len())
        .filter(|&j| j != i)
        .map(|j| {
            let t = b_dist[j].clone() - &b_dist[i];
            Interval { lo: Bound::Unbounded, hi: if j < i { Bound::Excluded(t) } else { Bound::Included(t) } }
        })
        .collect();
    QueryBox { dims }
}

/// `φ^(i)(a)` without its (zero) `i`-th coordinate, and the weight `d(a, s_i)`.
pub fn projected_point<T: Scalar>(a_dist: &[T], i: usize) -> (Vec<T>, T) {
    let coords = (0..a_dist.len()).filter(|&j| j != i).map(|j| a_dist[i].clone() - &a_dist[j]).collect();
    (coords, a_dist[i].clone())
}

/// The `i` with `a ∈ A(b, i)`: the smallest index attaining
/// `min_j d(a, s_j) + d(s_j, b)`.
pub fn assignment_index<T: Scalar>(a_dist: &[T], b_dist: &[T]) -> usize {
    let mut best = 0;
    let mut best_val = a_dist[0].clone() + &b_dist[0];
    for j in 1..a_dist.len() {
        let v = a_dist[j].clone() + &b_dist[j];
        if v < best_val {
            best = j;
            best_val = v;
        }
    }
    best
}

/// `Σ_{a∈A, b∈B} kernel(d(a,b))`, via distances from `S`.
pub fn igl_across_separation<T: Scalar>(g: &WeightedGraph<T>, sep: &Separation, kernel: DistanceKernel) -> Result<T> {
    let rows: Vec<Vec<Dist<T>>> = sep.s.iter().map(|&s| dijkstra(g, s).dist).collect();
    igl_across_with_rows(g, sep, &rows, kernel)
}

/// As [`igl_across_separation`] with `rows[j] = d(s_j, ·)` precomputed.
pub fn igl_across_with_rows<T: Scalar>(
    g: &WeightedGraph<T>,
    sep: &Separation,
    rows: &[Vec<Dist<T>>],
    kernel: DistanceKernel,
) -> Result<T> {
    Ok(igl_across_counted(g, sep, rows, kernel)?.0)
}

/// Also returns the number of canonical subsets touched.
pub(crate) fn igl_across_counted<T: Scalar>(
    g: &WeightedGraph<T>,
    sep: &Separation,
    rows: &[Vec<Dist<T>>],
    kernel: DistanceKernel,
) -> Result<(T, usize)> {
    if sep.a.is_empty() || sep.b.is_empty() {
        return Ok((T::zero(), 0));
    }
    let comps = g.components();
    let mut label = vec![0usize; g.n()];
    for (ci, c) in comps.iter().enumerate() {
        for &v in c {
            label[v] = ci;
        }
    }
    let mut a_by = vec![Vec::new(); comps.len()];
    let mut b_by = vec![Vec::new(); comps.len()];
    let mut s_by = vec![Vec::new(); comps.len()];
    for &a in &sep.a {
        a_by[label[a]].push(a);
    }
    for &b in &sep.b {
        b_by[label[b]].push(b);
    }
    for (j, &s) in sep.s.iter().enumerate() {
        s_by[label[s]].push(j);
    }
    let mut total = T::zero();
    let mut sets = 0;
    for c in 0..comps.len() {
        if a_by[c].is_empty() || b_by[c].is_empty() {
            continue;
        }
        if s_by[c].is_empty() {
            return Err(IglError::invariant("A and B are connected without passing through S"));
        }
        let dist_to = |v: VertexId| -> Vec<T> {
            s_by[c].iter().map(|&j| rows[j][v].finite().expect("same component").clone()).collect()
        };
        let mut ad: Vec<Vec<T>> = a_by[c].iter().map(|&a| dist_to(a)).collect();
        let mut bd: Vec<Vec<T>> = b_by[c].iter().map(|&b| dist_to(b)).collect();
        // Float box tests compare differences; on a common grid they are exact.
        let mut all: Vec<&mut T> = ad.iter_mut().chain(bd.iter_mut()).flatten().collect();
        let span = all.iter().fold(T::zero(), |m, v| if **v > m { (*v).clone() } else { m });
        T::snap_to_grid(&mut all, &span);
        let (v, k) = across_component(&a_by[c], &ad, &bd, kernel)?;
        total += v;
        sets += k;
    }
    Ok((total, sets))
}

fn across_component<T: Scalar>(
    a: &[VertexId],
    ad: &[Vec<T>],
    bd: &[Vec<T>],
    kernel: DistanceKernel,
) -> Result<(T, usize)> {
    let k = ad[0].len();
    if k == 1 {
        let weights: Vec<T> = ad.iter().map(|d| d[0].clone()).collect();
        let points: Vec<T> = bd.iter().map(|d| d[0].clone()).collect();
        let vals = T::kernel_sum_eval(kernel, &weights, &points)?;
        return Ok((vals.into_iter().fold(T::zero(), |x, y| x + y), 1));
    }
    let mut total = T::zero();
    let mut sets = 0;
    for i in 0..k {
        let mut ps = PointSet::new(k - 1);
        let mut omega = Vec::with_capacity(a.len());
        for (idx, d) in ad.iter().enumerate() {
            let (coords, w) = projected_point(d, i);
            ps.push(coords, a[idx])?;
            omega.push(w);
        }
        let queries: Vec<IswQuery<T>> = bd
            .iter()
            .map(|d| IswQuery { region: separation_box(d, i), shift: d[i].clone() })
            .collect();
        let tree = RangeTree::build(ps)?;
        let (vals, stats) = isw_batch_with_tree(&tree, &omega, &queries, kernel)?;
        sets += stats.canonical_sets;
        for v in vals {
            total += v;
        }
    }
    Ok((total, sets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_i64(n)
    }

    #[test]
    fn box_examples() {
        let b = separation_box(&[q(1), q(3)], 0);
        assert_eq!(b.dims, vec![Interval { lo: Bound::Unbounded, hi: Bound::Included(q(2)) }]);
        let b = separation_box(&[q(1), q(3)], 1);
        assert_eq!(b.dims, vec![Interval { lo: Bound::Unbounded, hi: Bound::Excluded(q(-2)) }]);
    }

    #[test]
    fn two_vertex_separator() {
        // a=0, b=1, s1=2, s2=3
        let g = WeightedGraph::from_edges(4, [(0, 2, q(1)), (0, 3, q(1)), (1, 2, q(1)), (1, 3, q(1)), (2, 3, q(1))])
            .unwrap();
        let sep = Separation { a: vec![0], b: vec![1], s: vec![2, 3] };
        assert_eq!(igl_across_separation(&g, &sep, DistanceKernel::Inverse).unwrap(), BigRational::from_ratio(1, 2));
        let empty = Separation { a: vec![], b: vec![0, 1], s: vec![2, 3] };
        assert_eq!(igl_across_separation(&g, &empty, DistanceKernel::Inverse).unwrap(), q(0));
    }

    #[test]
    fn path_centroid() {
        let g = WeightedGraph::from_edges(7, (0..6).map(|i| (i, i + 1, q(1)))).unwrap();
        let bags: Vec<Vec<usize>> = (0..6).map(|i| vec![i, i + 1]).collect();
        let edges: Vec<(usize, usize)> = (0..5).map(|i| (i, i + 1)).collect();
        let td = TreeDecomposition::new(bags, &edges).unwrap();
        let bs = balanced_separation(&td, &g).unwrap();
        assert_eq!(bs.separation.s.len(), 2);
        assert!(bs.separation.a.len() <= 4 && bs.separation.b.len() <= 4);
        bs.separation.validate(&g).unwrap();
    }
}

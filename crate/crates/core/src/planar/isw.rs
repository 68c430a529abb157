use std::ops::Range;

use super::dual::DualCycle;
use super::embedding::{edge_of, ArcId, PlaneGraph};
use crate::error::{IglError, Result};
use crate::graph::{dijkstra, EdgeId, VertexId};
use crate::poly::DistanceKernel;
use crate::scalar::Scalar;

/// `Σ_v kernel(δ_i + ω(v))` for every shift.
pub fn whole_piece_sums<T: Scalar>(omega: &[T], shifts: &[T], kernel: DistanceKernel) -> Result<Vec<T>> {
    if shifts.is_empty() {
        return Ok(Vec::new());
    }
    T::kernel_sum_eval(kernel, omega, shifts)
}

/// The shortest-path tree `T_s` in preorder. For a tree arc `u→v` the set
/// `U(u→v)` is the subtree below `v`, a contiguous preorder range; every
/// other arc has `U = ∅`.
#[derive(Clone, Debug)]
pub struct ArcSubtreeMap {
    pub root: VertexId,
    pub order: Vec<VertexId>,
    pre: Vec<usize>,
    end: Vec<usize>,
    parent_edge: Vec<Option<EdgeId>>,
    parent: Vec<Option<VertexId>>,
}

impl ArcSubtreeMap {
    pub fn build<T: Scalar>(pg: &PlaneGraph<T>, s: VertexId) -> Result<Self> {
        let n = pg.n();
        if s >= n {
            return Err(IglError::invalid(format!("root {s} is not in the piece")));
        }
        let sp = dijkstra(pg.graph(), s);
        let mut children: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for v in 0..n {
            if let Some((p, _)) = sp.parent[v] {
                children[p].push(v);
            }
        }
        let mut pre = vec![usize::MAX; n];
        let mut end = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![(s, false)];
        while let Some((v, closing)) = stack.pop() {
            if closing {
                end[v] = order.len();
                continue;
            }
            pre[v] = order.len();
            order.push(v);
            stack.push((v, true));
            for &c in children[v].iter().rev() {
                stack.push((c, false));
            }
        }
        Ok(ArcSubtreeMap {
            root: s,
            order,
            pre,
            end,
            parent_edge: sp.parent.iter().map(|p| p.map(|x| x.1)).collect(),
            parent: sp.parent.iter().map(|p| p.map(|x| x.0)).collect(),
        })
    }

    /// Preorder range of `U(a)`, empty for non-tree arcs.
    pub fn interval<T: Scalar>(&self, pg: &PlaneGraph<T>, a: ArcId) -> Range<usize> {
        let (u, v) = (pg.tail(a), pg.head(a));
        if self.parent[v] == Some(u) && self.parent_edge[v] == Some(edge_of(a)) {
            self.pre[v]..self.end[v]
        } else {
            0..0
        }
    }

    pub fn members<T: Scalar>(&self, pg: &PlaneGraph<T>, a: ArcId) -> &[VertexId] {
        &self.order[self.interval(pg, a)]
    }

    pub fn reaches(&self, v: VertexId) -> bool {
        self.pre[v] != usize::MAX
    }

    /// True when the nonempty `U` sets of `arcs` are pairwise disjoint,
    /// i.e. the crossed tree edges form an antichain.
    pub fn is_antichain<T: Scalar>(&self, pg: &PlaneGraph<T>, arcs: &[ArcId]) -> bool {
        let mut iv: Vec<Range<usize>> = arcs.iter().map(|&a| self.interval(pg, a)).filter(|r| !r.is_empty()).collect();
        iv.sort_by_key(|r| r.start);
        iv.windows(2).all(|w| w[0].end <= w[1].start)
    }
}

/// Segment tree over the arcs of one cycle. Node `z` holds the weights
/// `ω(v)` for `v` in the `U` sets of its canonical subpath.
#[derive(Clone, Debug)]
pub struct CycleSegmentTree<T> {
    len: usize,
    nodes: Vec<Vec<T>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct PartsumStats {
    /// `Σ_z |I_z|` over nodes that were evaluated.
    pub node_queries: usize,
    /// Weight terms across all evaluated nodes.
    pub weight_terms: usize,
    /// Kernel terms charged to queries, `Σ_i Σ_{z∈Z_i} r_z`.
    pub pair_terms: usize,
}

/// One subpath of a base cycle: `len` arcs from position `start`, wrapping.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubPath {
    pub cycle: usize,
    pub start: usize,
    pub len: usize,
}

impl<T: Scalar> CycleSegmentTree<T> {
    /// `mask`, when given, drops the vertices it marks `false`.
    pub fn build<P: Scalar>(
        pg: &PlaneGraph<P>,
        map: &ArcSubtreeMap,
        cycle: &[ArcId],
        omega: &[T],
        mask: Option<&[bool]>,
    ) -> Self {
        let len = cycle.len();
        let size = len.next_power_of_two().max(1);
        let mut nodes: Vec<Vec<T>> = vec![Vec::new(); 2 * size];
        for (i, &a) in cycle.iter().enumerate() {
            nodes[size + i] = map
                .members(pg, a)
                .iter()
                .filter(|&&v| mask.is_none_or(|m| m[v]))
                .map(|&v| omega[v].clone())
                .collect();
        }
        for z in (1..size).rev() {
            let mut w = nodes[2 * z].clone();
            w.extend(nodes[2 * z + 1].iter().cloned());
            nodes[z] = w;
        }
        CycleSegmentTree { len, nodes }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `Σ_z r_z` over all nodes.
    pub fn total_size(&self) -> usize {
        self.nodes.iter().map(Vec::len).sum()
    }

    fn size(&self) -> usize {
        self.nodes.len() / 2
    }

    fn canonical(&self, mut lo: usize, mut hi: usize, out: &mut Vec<usize>) {
        let size = self.size();
        lo += size;
        hi += size;
        while lo < hi {
            if lo & 1 == 1 {
                out.push(lo);
                lo += 1;
            }
            if hi & 1 == 1 {
                hi -= 1;
                out.push(hi);
            }
            lo >>= 1;
            hi >>= 1;
        }
    }

    /// Canonical nodes of a wrapping range.
    pub fn decompose(&self, start: usize, len: usize) -> Result<Vec<usize>> {
        if len > self.len || (start >= self.len && len > 0) {
            return Err(IglError::invalid("subpath is not on the base cycle"));
        }
        let mut out = Vec::new();
        let end = start + len;
        if end <= self.len {
            self.canonical(start, end, &mut out);
        } else {
            self.canonical(start, self.len, &mut out);
            self.canonical(0, end - self.len, &mut out);
        }
        Ok(out)
    }

    /// `Σ_{a∈π_i} Σ_{v∈U(a)} kernel(δ_i + ω(v))` for queries `(start, len, δ_i)`.
    pub fn partsum(&self, queries: &[(usize, usize, T)], kernel: DistanceKernel) -> Result<(Vec<T>, PartsumStats)> {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (qi, (start, len, delta)) in queries.iter().enumerate() {
            if !delta.is_positive() {
                return Err(IglError::invalid("partsum shifts must be positive"));
            }
            for z in self.decompose(*start, *len)? {
                if !self.nodes[z].is_empty() {
                    pairs.push((z, qi));
                }
            }
        }
        pairs.sort_unstable();
        let mut out = vec![T::zero(); queries.len()];
        let mut stats = PartsumStats::default();
        let mut i = 0;
        while i < pairs.len() {
            let z = pairs[i].0;
            let mut j = i;
            while j < pairs.len() && pairs[j].0 == z {
                j += 1;
            }
            let shifts: Vec<T> = pairs[i..j].iter().map(|&(_, q)| queries[q].2.clone()).collect();
            let vals = T::kernel_sum_eval(kernel, &self.nodes[z], &shifts)?;
            for (&(_, q), v) in pairs[i..j].iter().zip(vals) {
                out[q] += v;
            }
            stats.node_queries += j - i;
            stats.weight_terms += self.nodes[z].len();
            stats.pair_terms += (j - i) * self.nodes[z].len();
            i = j;
        }
        Ok((out, stats))
    }
}

/// A cycle of `Ξ(s)` given as subpaths of base cycles, with its shift.
#[derive(Clone, Debug)]
pub struct StarCycleQuery<T> {
    pub parts: Vec<SubPath>,
    pub shift: T,
}

/// `Σ_{v∈exterior(π_i, s)} kernel(δ_i + ω(v))` per query, for star-shaped
/// query cycles built from subpaths of `bases`. With `check`, each query's
/// crossed tree arcs must form an antichain.
#[allow(clippy::too_many_arguments)]
pub fn isw_star_cycles<T: Scalar, P: Scalar>(
    pg: &PlaneGraph<P>,
    map: &ArcSubtreeMap,
    omega: &[T],
    mask: Option<&[bool]>,
    bases: &[&DualCycle],
    queries: &[StarCycleQuery<T>],
    kernel: DistanceKernel,
    check: bool,
) -> Result<(Vec<T>, PartsumStats)> {
    let mut fibers: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); bases.len()];
    for (qi, q) in queries.iter().enumerate() {
        for p in &q.parts {
            let base = bases.get(p.cycle).ok_or_else(|| IglError::invalid("subpath names an unknown base cycle"))?;
            if base.s != map.root {
                return Err(IglError::invalid("base cycle has a different reference vertex"));
            }
            fibers[p.cycle].push((qi, p.start, p.len));
        }
        if check {
            let mut arcs = Vec::new();
            for p in &q.parts {
                let b = &bases[p.cycle].arcs;
                arcs.extend((0..p.len).map(|i| b[(p.start + i) % b.len()]));
            }
            if !map.is_antichain(pg, &arcs) {
                return Err(IglError::invariant(format!("query cycle {qi} is not star-shaped from its root")));
            }
        }
    }
    let mut out = vec![T::zero(); queries.len()];
    let mut stats = PartsumStats::default();
    for (ci, fiber) in fibers.iter().enumerate() {
        if fiber.is_empty() {
            continue;
        }
        let tree = CycleSegmentTree::build(pg, map, &bases[ci].arcs, omega, mask);
        let qs: Vec<(usize, usize, T)> = fiber.iter().map(|&(qi, st, len)| (st, len, queries[qi].shift.clone())).collect();
        let (vals, st) = tree.partsum(&qs, kernel)?;
        for (&(qi, _, _), v) in fiber.iter().zip(vals) {
            out[qi] += v;
        }
        stats.node_queries += st.node_queries;
        stats.weight_terms += st.weight_terms;
        stats.pair_terms += st.pair_terms;
    }
    Ok((out, stats))
}

use super::embedding::{edge_of, rev, ArcId, FaceId, PlaneGraph};
use crate::error::{IglError, Result};
use crate::graph::VertexId;
use crate::scalar::Scalar;

/// The dual multigraph: one vertex per face, and for every primal arc `a`
/// a dual arc `a*` from `left(a)` to `right(a)`.
#[derive(Clone, Debug)]
pub struct DualGraph {
    pub faces: usize,
    pub arcs: Vec<(FaceId, FaceId)>,
}

impl DualGraph {
    pub fn build<T: Scalar>(pg: &PlaneGraph<T>) -> Self {
        let arcs = (0..2 * pg.m()).map(|a| (pg.left(a), pg.right(a))).collect();
        DualGraph { faces: pg.faces().len(), arcs }
    }

    pub fn tail(&self, a: ArcId) -> FaceId {
        self.arcs[a].0
    }

    pub fn head(&self, a: ArcId) -> FaceId {
        self.arcs[a].1
    }
}

/// A closed dual walk, stored as the primal arcs it crosses. Every primal
/// arc runs from the side of `s` to the far side, so `s` lies to the right
/// of the dual arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCycle {
    pub arcs: Vec<ArcId>,
    pub s: VertexId,
}

impl DualCycle {
    /// Closed and visiting every face at most once.
    pub fn check<T: Scalar>(&self, pg: &PlaneGraph<T>) -> Result<()> {
        let k = self.arcs.len();
        if k == 0 {
            return Err(IglError::invalid("empty dual cycle"));
        }
        let mut seen = vec![false; pg.faces().len()];
        for i in 0..k {
            let a = self.arcs[i];
            let b = self.arcs[(i + 1) % k];
            if pg.right(a) != pg.left(b) {
                return Err(IglError::invalid(format!("dual walk breaks after arc {a}")));
            }
            let f = pg.left(a);
            if seen[f] {
                return Err(IglError::invalid("dual walk repeats a face"));
            }
            seen[f] = true;
        }
        Ok(())
    }
}

/// Vertices separated from `γ.s` by `γ`: everything a search from `s`
/// cannot reach without using an edge crossed by `γ`.
pub fn exterior<T: Scalar>(pg: &PlaneGraph<T>, gamma: &DualCycle) -> Result<Vec<VertexId>> {
    gamma.check(pg)?;
    let n = pg.n();
    if gamma.s >= n {
        return Err(IglError::invalid("reference vertex out of range"));
    }
    let mut cut = vec![false; pg.m()];
    for &a in &gamma.arcs {
        cut[edge_of(a)] = true;
    }
    let mut reached = vec![false; n];
    reached[gamma.s] = true;
    let mut stack = vec![gamma.s];
    let g = pg.graph();
    while let Some(u) = stack.pop() {
        for &(v, e) in g.neighbors(u) {
            if !cut[e] && !reached[v] {
                reached[v] = true;
                stack.push(v);
            }
        }
    }
    Ok((0..n).filter(|&v| !reached[v]).collect())
}

/// One cycle of the boundary of a vertex set `C`: the arcs from `C` into a
/// component `K` of the rest, in dual-cycle order.
#[derive(Clone, Debug)]
pub struct CutCycle {
    pub arcs: Vec<ArcId>,
    pub component: Vec<VertexId>,
}

/// Boundary cycles of a connected vertex set `inside`, one per component of
/// the remaining vertices, ordered by their smallest vertex. Each cycle
/// starts at its smallest arc.
pub fn cut_cycles<T: Scalar>(pg: &PlaneGraph<T>, inside: &[bool]) -> Result<Vec<CutCycle>> {
    let n = pg.n();
    let g = pg.graph();
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<VertexId>> = Vec::new();
    for v in 0..n {
        if inside[v] || comp[v] != usize::MAX {
            continue;
        }
        let id = comps.len();
        comp[v] = id;
        let mut members = vec![v];
        let mut i = 0;
        while i < members.len() {
            let u = members[i];
            i += 1;
            for &(w, _) in g.neighbors(u) {
                if !inside[w] && comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    let mut crossing: Vec<Vec<ArcId>> = vec![Vec::new(); comps.len()];
    for a in 0..2 * pg.m() {
        let (u, v) = (pg.tail(a), pg.head(a));
        if inside[u] && !inside[v] {
            crossing[comp[v]].push(a);
        }
    }
    let mut out = Vec::with_capacity(comps.len());
    for (id, members) in comps.into_iter().enumerate() {
        let arcs = &crossing[id];
        if arcs.is_empty() {
            return Err(IglError::invalid("a component outside the set does not touch it"));
        }
        let start = arcs[0];
        let mut cycle = Vec::with_capacity(arcs.len());
        let mut cur = start;
        loop {
            cycle.push(cur);
            if cycle.len() > arcs.len() {
                return Err(IglError::invariant("cut does not close into one dual cycle"));
            }
            let face_len = pg.faces()[pg.left(rev(cur))].len();
            let mut a = pg.next(rev(cur));
            let mut steps = 0;
            while !(inside[pg.tail(a)] && !inside[pg.head(a)] && comp[pg.head(a)] == id) {
                a = pg.next(a);
                steps += 1;
                if steps > face_len {
                    return Err(IglError::invariant("face walk found no way back across the cut"));
                }
            }
            cur = a;
            if cur == start {
                break;
            }
        }
        if cycle.len() != arcs.len() {
            return Err(IglError::invariant("set is not connected: its boundary splits into several dual cycles"));
        }
        out.push(CutCycle { arcs: cycle, component: members });
    }
    Ok(out)
}

use std::collections::HashMap;
use std::sync::OnceLock;

use super::dual::{cut_cycles, DualCycle};
use super::embedding::{ArcId, PlaneGraph};
use crate::error::{IglError, Result};
use crate::graph::{dijkstra_multi, VertexId};
use crate::scalar::Scalar;

/// Additively weighted Voronoi diagram: `v` belongs to the site minimizing
/// `(δ(s) + d(s, v), index of s)`.
#[derive(Clone, Debug)]
pub struct VoronoiDiagram<T> {
    pub sites: Vec<VertexId>,
    pub delta: Vec<T>,
    /// Site index per vertex.
    pub cell: Vec<usize>,
    /// `δ(cell) + d(site, v)`.
    pub dist: Vec<T>,
}

impl<T: Scalar> VoronoiDiagram<T> {
    pub fn members(&self, i: usize) -> Vec<VertexId> {
        (0..self.cell.len()).filter(|&v| self.cell[v] == i).collect()
    }

    pub fn mask(&self, i: usize) -> Vec<bool> {
        self.cell.iter().map(|&c| c == i).collect()
    }

    pub fn is_empty(&self, i: usize) -> bool {
        !self.cell.contains(&i)
    }
}

pub fn voronoi<T: Scalar>(pg: &PlaneGraph<T>, sites: &[VertexId], delta: &[T]) -> Result<VoronoiDiagram<T>> {
    if sites.len() != delta.len() {
        return Err(IglError::invalid("one additive weight per site"));
    }
    if sites.is_empty() {
        return Err(IglError::invalid("Voronoi diagram needs a site"));
    }
    let n = pg.n();
    for (&s, d) in sites.iter().zip(delta) {
        if s >= n {
            return Err(IglError::invalid(format!("site {s} is not in the piece")));
        }
        if d < &T::zero() {
            return Err(IglError::invalid("additive weights must be nonnegative"));
        }
    }
    let sources: Vec<(VertexId, T)> = sites.iter().copied().zip(delta.iter().cloned()).collect();
    let sp = dijkstra_multi(pg.graph(), &sources);
    let mut cell = Vec::with_capacity(n);
    let mut dist = Vec::with_capacity(n);
    for v in 0..n {
        match (sp.site[v], sp.dist[v].finite()) {
            (Some(i), Some(d)) => {
                cell.push(i);
                dist.push(d.clone());
            }
            _ => return Err(IglError::invalid(format!("vertex {v} is unreachable from every site"))),
        }
    }
    Ok(VoronoiDiagram { sites: sites.to_vec(), delta: delta.to_vec(), cell, dist })
}

/// The cycles `H(s)` carving cell `i` out of the piece. Empty when the
/// cell is empty or covers everything.
pub fn dual_description<T: Scalar>(pg: &PlaneGraph<T>, vd: &VoronoiDiagram<T>, i: usize) -> Result<Vec<DualCycle>> {
    if vd.is_empty(i) {
        return Ok(Vec::new());
    }
    let cycles = cut_cycles(pg, &vd.mask(i))?;
    Ok(cycles.into_iter().map(|c| DualCycle { arcs: c.arcs, s: vd.sites[i] }).collect())
}

/// The dual cycle between the two cells of a two-site diagram.
#[derive(Clone, Debug)]
pub struct Bisector {
    pub s: usize,
    pub t: usize,
    pub threshold: usize,
    pub cycle: DualCycle,
    pos: HashMap<ArcId, usize>,
}

impl Bisector {
    pub fn len(&self) -> usize {
        self.cycle.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.arcs.is_empty()
    }

    pub fn position(&self, a: ArcId) -> Option<usize> {
        self.pos.get(&a).copied()
    }
}

/// Bisectors between sites `s` and `t` for every split of the piece they
/// can realize. With `key(v) = d(t,v) − d(s,v)` and distinct keys
/// `k_0 < … < k_{m−1}`, threshold `j ∈ 1..m` is the diagram where `s` owns
/// `{key ≥ k_j}`. The cycles are built on first use.
#[derive(Debug)]
pub struct BisectorFamily<T> {
    pub s: usize,
    pub t: usize,
    s_vertex: VertexId,
    pub keys: Vec<T>,
    key: Vec<T>,
    cache: Vec<OnceLock<Bisector>>,
}

impl<T: Scalar> BisectorFamily<T> {
    /// `s` and `t` are site indices; `ds`, `dt` their distance rows.
    pub fn new(s: usize, t: usize, s_vertex: VertexId, ds: &[T], dt: &[T]) -> Self {
        let key: Vec<T> = ds.iter().zip(dt).map(|(a, b)| b.clone() - a).collect();
        let mut keys = key.clone();
        keys.sort_by(|a, b| a.total_cmp(b));
        keys.dedup_by(|a, b| a.total_cmp(b).is_eq());
        let cache = (0..keys.len()).map(|_| OnceLock::new()).collect();
        BisectorFamily { s, t, s_vertex, keys, key, cache }
    }

    /// Thresholds with both cells nonempty are `1..len()`.
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.len() < 2
    }

    /// Threshold realized by additive weights `δ(s)`, `δ(t)`, if both cells
    /// are nonempty.
    pub fn threshold(&self, delta_s: &T, delta_t: &T) -> Option<usize> {
        let gap = delta_s.clone() - delta_t;
        let j = if self.s < self.t {
            self.keys.partition_point(|k| k.total_cmp(&gap).is_lt())
        } else {
            self.keys.partition_point(|k| k.total_cmp(&gap).is_le())
        };
        (1..self.keys.len()).contains(&j).then_some(j)
    }

    pub fn cell_s(&self, j: usize) -> Vec<bool> {
        self.key.iter().map(|k| k.total_cmp(&self.keys[j]).is_ge()).collect()
    }

    pub fn bisector(&self, pg: &PlaneGraph<T>, j: usize) -> Result<&Bisector> {
        if !(1..self.keys.len()).contains(&j) {
            return Err(IglError::invalid(format!("threshold {j} leaves a cell empty")));
        }
        if let Some(b) = self.cache[j].get() {
            return Ok(b);
        }
        let mut cycles = cut_cycles(pg, &self.cell_s(j))?;
        if cycles.len() != 1 {
            return Err(IglError::invariant(format!("bisector of sites {} and {} is not one cycle", self.s, self.t)));
        }
        let arcs = cycles.pop().unwrap().arcs;
        let pos = arcs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let b = Bisector { s: self.s, t: self.t, threshold: j, cycle: DualCycle { arcs, s: self.s_vertex }, pos };
        let _ = self.cache[j].set(b);
        Ok(self.cache[j].get().unwrap())
    }

    /// Every bisector of the family, outermost `s` cell first.
    pub fn all(&self, pg: &PlaneGraph<T>) -> Result<Vec<&Bisector>> {
        (1..self.keys.len()).map(|j| self.bisector(pg, j)).collect()
    }

    pub fn built(&self) -> usize {
        self.cache.iter().filter(|c| c.get().is_some()).count()
    }
}

/// A stretch of bisector `β(s,t)` at `threshold`: `len` arcs starting at
/// position `start`, wrapping around.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Patch {
    pub s: usize,
    pub t: usize,
    pub threshold: usize,
    pub start: usize,
    pub len: usize,
    pub first: ArcId,
    pub last: ArcId,
}

/// Splits a cycle of cell `s` into patches. `families[t]` is the family of
/// `(s, t)`; arcs ending in cell `t` must lie on the bisector at the
/// threshold given by the diagram's weights.
pub fn extract_patches<T: Scalar>(
    pg: &PlaneGraph<T>,
    vd: &VoronoiDiagram<T>,
    s: usize,
    cycle: &DualCycle,
    families: &[Option<BisectorFamily<T>>],
) -> Result<Vec<Patch>> {
    let k = cycle.arcs.len();
    let mut placed: Vec<(usize, usize, usize)> = Vec::with_capacity(k);
    for &a in &cycle.arcs {
        let t = vd.cell[pg.head(a)];
        let fam = families
            .get(t)
            .and_then(Option::as_ref)
            .ok_or_else(|| IglError::invariant(format!("no bisector family for sites {s}, {t}")))?;
        let j = fam
            .threshold(&vd.delta[s], &vd.delta[t])
            .ok_or_else(|| IglError::invariant("cycle arc between cells that a two-site diagram leaves empty"))?;
        let b = fam.bisector(pg, j)?;
        let p = b
            .position(a)
            .ok_or_else(|| IglError::invariant(format!("arc {a} is not on the bisector of sites {s} and {t}")))?;
        placed.push((t, j, p));
    }
    let continues = |x: &(usize, usize, usize), y: &(usize, usize, usize), blen: usize| {
        x.0 == y.0 && x.1 == y.1 && (x.2 + 1) % blen == y.2
    };
    let blen = |t: usize, j: usize| families[t].as_ref().unwrap().bisector(pg, j).map(|b| b.len());
    // start at a run boundary so no run wraps past the end of the list
    let mut offset = 0;
    for i in 0..k {
        let prev = &placed[(i + k - 1) % k];
        if !continues(prev, &placed[i], blen(prev.0, prev.1)?) {
            offset = i;
            break;
        }
    }
    let mut patches: Vec<Patch> = Vec::new();
    for step in 0..k {
        let i = (offset + step) % k;
        let cur = placed[i];
        if let Some(last) = patches.last_mut() {
            let tail = (last.t, last.threshold, (last.start + last.len - 1) % blen(last.t, last.threshold)?);
            if continues(&tail, &cur, blen(cur.0, cur.1)?) && last.len < blen(cur.0, cur.1)? {
                last.len += 1;
                last.last = cycle.arcs[i];
                continue;
            }
        }
        patches.push(Patch { s, t: cur.0, threshold: cur.1, start: cur.2, len: 1, first: cycle.arcs[i], last: cycle.arcs[i] });
    }
    Ok(patches)
}

/// Arcs of a patch in cycle order.
pub fn patch_arcs<T: Scalar>(
    pg: &PlaneGraph<T>,
    patch: &Patch,
    families: &[Option<BisectorFamily<T>>],
) -> Result<Vec<ArcId>> {
    let b = families[patch.t].as_ref().ok_or_else(|| IglError::invalid("missing family"))?.bisector(pg, patch.threshold)?;
    Ok((0..patch.len).map(|i| b.cycle.arcs[(patch.start + i) % b.len()]).collect())
}

/// Families `(s, t)` for every other site `t`, indexed by `t`.
pub fn families_for<T: Scalar>(s: usize, sites: &[VertexId], rows: &[Vec<T>]) -> Vec<Option<BisectorFamily<T>>> {
    (0..sites.len())
        .map(|t| (t != s).then(|| BisectorFamily::new(s, t, sites[s], &rows[s], &rows[t])))
        .collect()
}

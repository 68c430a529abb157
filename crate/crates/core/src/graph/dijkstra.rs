use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{EdgeId, VertexId, WeightedGraph};
use crate::scalar::{Dist, Scalar};

/// Distances from one source (or several weighted sources) together with a
/// shortest-path forest.
#[derive(Clone, Debug)]
pub struct ShortestPaths<T> {
    pub dist: Vec<Dist<T>>,
    /// `(parent vertex, edge)`; `None` for sources and unreachable vertices.
    pub parent: Vec<Option<(VertexId, EdgeId)>>,
    /// Index into the source list of the source that claims each vertex.
    pub site: Vec<Option<usize>>,
}

impl<T: Scalar> ShortestPaths<T> {
    pub fn finite(&self, v: VertexId) -> Option<&T> {
        self.dist[v].finite()
    }

    /// Vertices ordered by nondecreasing distance, unreachable ones omitted.
    pub fn order(&self) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = (0..self.dist.len()).filter(|&v| self.dist[v].is_finite()).collect();
        vs.sort_by(|&a, &b| self.dist[a].cmp_dist(&self.dist[b]).then(a.cmp(&b)));
        vs
    }
}

struct Entry<T> {
    dist: T,
    site: usize,
    v: VertexId,
}

impl<T: Scalar> PartialEq for Entry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Scalar> Eq for Entry<T> {}
impl<T: Scalar> PartialOrd for Entry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Scalar> Ord for Entry<T> {
    // reversed for a min-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then(other.site.cmp(&self.site))
            .then(other.v.cmp(&self.v))
    }
}

pub fn dijkstra<T: Scalar>(g: &WeightedGraph<T>, source: VertexId) -> ShortestPaths<T> {
    dijkstra_multi(g, &[(source, T::zero())])
}

/// Multi-source Dijkstra. Vertex `v` is claimed by the source minimizing
/// `(offset + d(source, v), source index)`. Among equally good parents the
/// smaller vertex id wins, then the smaller edge id.
pub fn dijkstra_multi<T: Scalar>(g: &WeightedGraph<T>, sources: &[(VertexId, T)]) -> ShortestPaths<T> {
    let n = g.n();
    let mut dist: Vec<Option<T>> = vec![None; n];
    let mut site: Vec<Option<usize>> = vec![None; n];
    let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();

    let better = |d: &T, s: usize, cur_d: &Option<T>, cur_s: &Option<usize>| match (cur_d, cur_s) {
        (Some(cd), Some(cs)) => match d.total_cmp(cd) {
            Ordering::Less => Ordering::Less,
            Ordering::Greater => Ordering::Greater,
            Ordering::Equal => s.cmp(cs),
        },
        _ => Ordering::Less,
    };

    for (i, (v, off)) in sources.iter().enumerate() {
        if better(off, i, &dist[*v], &site[*v]) == Ordering::Less {
            dist[*v] = Some(off.clone());
            site[*v] = Some(i);
            heap.push(Entry { dist: off.clone(), site: i, v: *v });
        }
    }

    while let Some(Entry { dist: d, site: s, v: u }) = heap.pop() {
        if done[u] || site[u] != Some(s) || dist[u].as_ref().is_some_and(|cur| cur.total_cmp(&d) != Ordering::Equal) {
            continue;
        }
        done[u] = true;
        for &(v, e) in g.neighbors(u) {
            if done[v] {
                continue;
            }
            let nd = d.clone() + g.length(e);
            match better(&nd, s, &dist[v], &site[v]) {
                Ordering::Less => {
                    dist[v] = Some(nd.clone());
                    site[v] = Some(s);
                    parent[v] = Some((u, e));
                    heap.push(Entry { dist: nd, site: s, v });
                }
                Ordering::Equal => {
                    if parent[v].is_some_and(|p| (u, e) < p) {
                        parent[v] = Some((u, e));
                    }
                }
                Ordering::Greater => {}
            }
        }
    }

    ShortestPaths {
        dist: dist.into_iter().map(|d| d.map_or(Dist::Infinite, Dist::Finite)).collect(),
        parent,
        site,
    }
}

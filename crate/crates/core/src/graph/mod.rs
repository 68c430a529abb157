//! Weighted undirected graphs, shortest paths and the all-pairs oracle.

mod dijkstra;
pub mod io;

use std::collections::HashMap;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{IglError, Result};
use crate::poly::DistanceKernel;
use crate::scalar::{Dist, Scalar};

pub use dijkstra::{dijkstra, dijkstra_multi, ShortestPaths};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Undirected graph with positive edge lengths. Parallel edges are merged
/// to their minimum length on construction; self-loops are rejected.
#[derive(Clone, Debug)]
pub struct WeightedGraph<T> {
    n: usize,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    edges: Vec<(VertexId, VertexId, T)>,
}

impl<T: Scalar> WeightedGraph<T> {
    pub fn empty(n: usize) -> Self {
        WeightedGraph { n, adj: vec![Vec::new(); n], edges: Vec::new() }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId, T)>) -> Result<Self> {
        let mut b = GraphBuilder::new(n);
        for (u, v, w) in edges {
            b.add_edge(u, v, w)?;
        }
        Ok(b.build())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId, &T) {
        let (u, v, w) = &self.edges[e];
        (*u, *v, w)
    }

    pub fn length(&self, e: EdgeId) -> &T {
        &self.edges[e].2
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, &T)> + '_ {
        self.edges.iter().map(|(u, v, w)| (*u, *v, w))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn map_weights<U: Scalar>(&self, f: impl Fn(&T) -> U) -> WeightedGraph<U> {
        WeightedGraph {
            n: self.n,
            adj: self.adj.clone(),
            edges: self.edges.iter().map(|(u, v, w)| (*u, *v, f(w))).collect(),
        }
    }

    /// Subgraph induced by `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[VertexId]) -> WeightedGraph<T> {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut b = GraphBuilder::new(vertices.len());
        for (u, v, w) in &self.edges {
            if local[*u] != usize::MAX && local[*v] != usize::MAX {
                b.add_edge(local[*u], local[*v], w.clone()).expect("induced edge");
            }
        }
        b.build()
    }

    /// Connected components, each sorted; components ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                i += 1;
                for &(v, _) in &self.adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    pub fn distance_row(&self, source: VertexId) -> Vec<Dist<T>> {
        dijkstra(self, source).dist
    }

    /// All-pairs distances, one Dijkstra per source.
    pub fn all_pairs(&self) -> Vec<Vec<Dist<T>>> {
        (0..self.n).into_par_iter().map(|s| self.distance_row(s)).collect()
    }
}

pub struct GraphBuilder<T> {
    n: usize,
    index: HashMap<(VertexId, VertexId), EdgeId>,
    edges: Vec<(VertexId, VertexId, T)>,
}

impl<T: Scalar> GraphBuilder<T> {
    pub fn new(n: usize) -> Self {
        GraphBuilder { n, index: HashMap::new(), edges: Vec::new() }
    }

    /// Adds `uv`, or lowers the length of an existing `uv` edge.
    /// Returns the edge id.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, w: T) -> Result<EdgeId> {
        if u >= self.n || v >= self.n {
            return Err(IglError::invalid(format!("edge ({u},{v}) out of range for n = {}", self.n)));
        }
        if u == v {
            return Err(IglError::invalid(format!("self-loop at vertex {u}")));
        }
        if !w.is_positive() {
            return Err(IglError::invalid(format!("edge ({u},{v}) has non-positive length {w}")));
        }
        let key = (u.min(v), u.max(v));
        if let Some(&e) = self.index.get(&key) {
            if w < self.edges[e].2 {
                self.edges[e].2 = w;
            }
            return Ok(e);
        }
        let e = self.edges.len();
        self.index.insert(key, e);
        self.edges.push((u, v, w));
        Ok(e)
    }

    pub fn build(self) -> WeightedGraph<T> {
        let mut adj = vec![Vec::new(); self.n];
        for (e, (u, v, _)) in self.edges.iter().enumerate() {
            adj[*u].push((*v, e));
            adj[*v].push((*u, e));
        }
        WeightedGraph { n: self.n, adj, edges: self.edges }
    }
}

/// A partition `A ⊔ B ⊔ S` of the vertices with no `A`–`B` edge.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Separation {
    pub a: Vec<VertexId>,
    pub b: Vec<VertexId>,
    pub s: Vec<VertexId>,
}

impl Separation {
    pub fn validate<T: Scalar>(&self, g: &WeightedGraph<T>) -> Result<()> {
        let mut side = vec![0u8; g.n()];
        for (tag, set) in [(1u8, &self.a), (2, &self.b), (3, &self.s)] {
            for &v in set {
                if v >= g.n() {
                    return Err(IglError::invalid(format!("separation vertex {v} out of range")));
                }
                if side[v] != 0 {
                    return Err(IglError::invariant(format!("vertex {v} in two parts of the separation")));
                }
                side[v] = tag;
            }
        }
        if let Some(v) = side.iter().position(|&s| s == 0) {
            return Err(IglError::invariant(format!("vertex {v} not covered by the separation")));
        }
        for (u, v, _) in g.edges() {
            if side[u] ^ side[v] == 3 {
                return Err(IglError::invariant(format!("edge ({u},{v}) crosses the separation")));
            }
        }
        Ok(())
    }
}

/// `Σ_{u<v} kernel(d(u,v))`, unreachable pairs contributing 0.
pub fn kernel_sum_brute<T: Scalar>(g: &WeightedGraph<T>, kernel: DistanceKernel) -> T {
    let rows: Vec<T> = (0..g.n())
        .into_par_iter()
        .map(|s| {
            let dist = g.distance_row(s);
            let mut acc = T::zero();
            for d in &dist[s + 1..] {
                acc += d.kernel_value(kernel);
            }
            acc
        })
        .collect();
    rows.into_iter().fold(T::zero(), |a, b| a + b)
}

pub fn igl_brute<T: Scalar>(g: &WeightedGraph<T>) -> T {
    kernel_sum_brute(g, DistanceKernel::Inverse)
}

/// `Σ_{a∈A, b∈B} kernel(d(a,b))`.
pub fn kernel_pairs<T: Scalar>(
    g: &WeightedGraph<T>,
    a: &[VertexId],
    b: &[VertexId],
    kernel: DistanceKernel,
) -> Result<T> {
    let mut in_a = vec![false; g.n()];
    for &v in a {
        if v >= g.n() {
            return Err(IglError::invalid(format!("vertex {v} out of range")));
        }
        in_a[v] = true;
    }
    for &v in b {
        if v >= g.n() {
            return Err(IglError::invalid(format!("vertex {v} out of range")));
        }
        if in_a[v] {
            return Err(IglError::invalid(format!("vertex {v} is in both A and B")));
        }
    }
    let rows: Vec<T> = a
        .par_iter()
        .map(|&s| {
            let dist = g.distance_row(s);
            b.iter().fold(T::zero(), |acc, &t| acc + dist[t].kernel_value(kernel))
        })
        .collect();
    Ok(rows.into_iter().fold(T::zero(), |x, y| x + y))
}

pub fn igl_pairs<T: Scalar>(g: &WeightedGraph<T>, a: &[VertexId], b: &[VertexId]) -> Result<T> {
    kernel_pairs(g, a, b, DistanceKernel::Inverse)
}

/// `½ Σ_u (deg(u) + (n − 1 − deg(u))/2)` for a unit-length graph of diameter
/// at most 2.
pub fn diameter2_identity<T: Scalar>(g: &WeightedGraph<T>) -> Result<BigRational> {
    let n = g.n();
    if g.edges().any(|(_, _, w)| *w != T::one()) {
        return Err(IglError::invalid("diameter-2 identity needs unit lengths"));
    }
    let mut mark = vec![usize::MAX; n];
    for u in 0..n {
        let mut reached = 1;
        mark[u] = u;
        for &(v, _) in g.neighbors(u) {
            if mark[v] != u {
                mark[v] = u;
                reached += 1;
            }
        }
        for &(v, _) in g.neighbors(u) {
            for &(x, _) in g.neighbors(v) {
                if mark[x] != u {
                    mark[x] = u;
                    reached += 1;
                }
            }
        }
        if reached != n {
            return Err(IglError::invalid(format!("diameter exceeds 2 (vertex {u})")));
        }
    }
    let half = BigRational::new(1.into(), 2.into());
    let mut total = BigRational::from_i64(0);
    for u in 0..n {
        let deg = BigRational::from_i64(g.degree(u) as i64);
        let rest = BigRational::from_i64((n - 1 - g.degree(u)) as i64);
        total += deg + rest * &half;
    }
    Ok(total * half)
}

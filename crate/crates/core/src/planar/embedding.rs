use std::collections::HashSet;
use std::fmt::Write as _;

use num_rational::BigRational;

use crate::error::{IglError, Result};
use crate::graph::io::ParsedGraph;
use crate::graph::{EdgeId, GraphBuilder, VertexId, WeightedGraph};
use crate::scalar::Scalar;

/// Arc `2e` runs from the first to the second endpoint of edge `e`, arc
/// `2e + 1` the other way.
pub type ArcId = usize;
pub type FaceId = usize;

pub fn rev(a: ArcId) -> ArcId {
    a ^ 1
}

pub fn edge_of(a: ArcId) -> EdgeId {
    a >> 1
}

/// A graph with a rotation system: the clockwise order of edges around
/// every vertex. Faces are traced by `next(u→v) = v→w`, where `vw` follows
/// `vu` clockwise around `v`; a face lies to the left of its arcs.
#[derive(Clone, Debug)]
pub struct PlaneGraph<T> {
    g: WeightedGraph<T>,
    rot: Vec<Vec<EdgeId>>,
    rpos: Vec<usize>,
    next: Vec<ArcId>,
    face_of: Vec<FaceId>,
    faces: Vec<Vec<ArcId>>,
}

impl<T: Scalar> PlaneGraph<T> {
    pub fn new(g: WeightedGraph<T>, rot: Vec<Vec<EdgeId>>) -> Result<Self> {
        let n = g.n();
        if rot.len() != n {
            return Err(IglError::invalid("rotation system must list every vertex"));
        }
        let mut rpos = vec![usize::MAX; 2 * g.m()];
        for (v, r) in rot.iter().enumerate() {
            let mut want: Vec<EdgeId> = g.neighbors(v).iter().map(|&(_, e)| e).collect();
            let mut got = r.clone();
            want.sort_unstable();
            got.sort_unstable();
            if want != got {
                return Err(IglError::invalid(format!("rotation at vertex {v} does not match its edges")));
            }
            for (i, &e) in r.iter().enumerate() {
                let (a, _, _) = g.edge(e);
                let arc = if a == v { 2 * e } else { 2 * e + 1 };
                rpos[arc] = i;
            }
        }
        let mut pg = PlaneGraph { g, rot, rpos, next: Vec::new(), face_of: Vec::new(), faces: Vec::new() };
        pg.trace_faces();
        Ok(pg)
    }

    fn trace_faces(&mut self) {
        let arcs = 2 * self.g.m();
        self.next = (0..arcs)
            .map(|a| {
                let v = self.head(a);
                let p = self.rpos[rev(a)];
                let r = &self.rot[v];
                self.arc_from(r[(p + 1) % r.len()], v)
            })
            .collect();
        self.face_of = vec![usize::MAX; arcs];
        self.faces.clear();
        for start in 0..arcs {
            if self.face_of[start] != usize::MAX {
                continue;
            }
            let id = self.faces.len();
            let mut face = Vec::new();
            let mut a = start;
            loop {
                self.face_of[a] = id;
                face.push(a);
                a = self.next[a];
                if a == start {
                    break;
                }
            }
            self.faces.push(face);
        }
    }

    pub fn graph(&self) -> &WeightedGraph<T> {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn m(&self) -> usize {
        self.g.m()
    }

    pub fn rotation(&self, v: VertexId) -> &[EdgeId] {
        &self.rot[v]
    }

    pub fn tail(&self, a: ArcId) -> VertexId {
        let (u, v, _) = self.g.edge(edge_of(a));
        if a & 1 == 0 {
            u
        } else {
            v
        }
    }

    pub fn head(&self, a: ArcId) -> VertexId {
        self.tail(rev(a))
    }

    /// The arc of edge `e` leaving `u`.
    pub fn arc_from(&self, e: EdgeId, u: VertexId) -> ArcId {
        if self.g.edge(e).0 == u {
            2 * e
        } else {
            2 * e + 1
        }
    }

    pub fn next(&self, a: ArcId) -> ArcId {
        self.next[a]
    }

    pub fn faces(&self) -> &[Vec<ArcId>] {
        &self.faces
    }

    /// Face on the left of `a` (the face traced through `a`).
    pub fn left(&self, a: ArcId) -> FaceId {
        self.face_of[a]
    }

    pub fn right(&self, a: ArcId) -> FaceId {
        self.face_of[rev(a)]
    }

    pub fn face_vertices(&self, f: FaceId) -> Vec<VertexId> {
        self.faces[f].iter().map(|&a| self.tail(a)).collect()
    }

    /// `n − m + f = 2` on every component with an edge.
    pub fn check_euler(&self) -> Result<()> {
        let comps = self.g.components();
        let mut label = vec![0; self.n()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                label[v] = i;
            }
        }
        let mut edges = vec![0i64; comps.len()];
        let mut faces = vec![0i64; comps.len()];
        for (u, _, _) in self.g.edges() {
            edges[label[u]] += 1;
        }
        for f in &self.faces {
            faces[label[self.tail(f[0])]] += 1;
        }
        for (i, c) in comps.iter().enumerate() {
            if edges[i] == 0 {
                continue;
            }
            let chi = c.len() as i64 - edges[i] + faces[i];
            if chi != 2 {
                return Err(IglError::invariant(format!(
                    "rotation system is not planar: component of vertex {} has n − m + f = {chi}",
                    c[0]
                )));
            }
        }
        Ok(())
    }

    pub fn is_triangulated(&self) -> bool {
        self.faces.iter().all(|f| f.len() == 3)
    }

    pub fn map_weights<U: Scalar>(&self, f: impl Fn(&T) -> U) -> PlaneGraph<U> {
        PlaneGraph {
            g: self.g.map_weights(f),
            rot: self.rot.clone(),
            rpos: self.rpos.clone(),
            next: self.next.clone(),
            face_of: self.face_of.clone(),
            faces: self.faces.clone(),
        }
    }

    /// Subgraph on `edges` (given in any order) with the inherited rotation.
    /// Returns the plane graph on local ids, local→global vertex map and
    /// local→global edge map.
    pub fn subgraph(&self, edges: &[EdgeId]) -> (PlaneGraph<T>, Vec<VertexId>, Vec<EdgeId>) {
        let mut emap: Vec<EdgeId> = edges.to_vec();
        emap.sort_unstable();
        emap.dedup();
        let mut in_sub = vec![usize::MAX; self.m()];
        for (i, &e) in emap.iter().enumerate() {
            in_sub[e] = i;
        }
        let mut local = vec![usize::MAX; self.n()];
        let mut vmap = Vec::new();
        for &e in &emap {
            let (u, v, _) = self.g.edge(e);
            for x in [u, v] {
                if local[x] == usize::MAX {
                    local[x] = 0;
                    vmap.push(x);
                }
            }
        }
        vmap.sort_unstable();
        for (i, &v) in vmap.iter().enumerate() {
            local[v] = i;
        }
        let mut b = GraphBuilder::new(vmap.len());
        for &e in &emap {
            let (u, v, w) = self.g.edge(e);
            b.add_edge(local[u], local[v], w.clone()).expect("subgraph edge");
        }
        let rot: Vec<Vec<EdgeId>> = vmap
            .iter()
            .map(|&v| self.rot[v].iter().filter(|&&e| in_sub[e] != usize::MAX).map(|&e| in_sub[e]).collect())
            .collect();
        let pg = PlaneGraph::new(b.build(), rot).expect("restriction of a plane graph");
        (pg, vmap, emap)
    }

    /// Adds edges until every face is a triangle. New edges get length
    /// `1 + Σ λ(e)`, longer than any simple path, so distances are unchanged.
    pub fn triangulate(&self) -> Result<PlaneGraph<T>> {
        if !self.g.is_connected() {
            return Err(IglError::invalid("triangulation needs a connected graph"));
        }
        self.check_euler()?;
        let n = self.n();
        if n < 3 {
            return Ok(self.clone());
        }
        let mut big = T::one();
        for (_, _, w) in self.g.edges() {
            big += w;
        }
        let mut edges: Vec<(VertexId, VertexId, T)> = self.g.edges().map(|(u, v, w)| (u, v, w.clone())).collect();
        let mut rot = self.rot.clone();
        let mut adj: HashSet<(VertexId, VertexId)> = edges.iter().map(|&(u, v, _)| (u.min(v), u.max(v))).collect();
        let tail = |edges: &[(VertexId, VertexId, T)], a: ArcId| {
            let (u, v, _) = &edges[a >> 1];
            if a & 1 == 0 {
                *u
            } else {
                *v
            }
        };
        let mut queue: Vec<Vec<ArcId>> = self.faces.iter().filter(|f| f.len() > 3).cloned().collect();
        while let Some(face) = queue.pop() {
            let k = face.len();
            let vs: Vec<VertexId> = face.iter().map(|&a| tail(&edges, a)).collect();
            let pick = (0..k).find(|&i| {
                let (x, y) = (vs[i], vs[(i + 2) % k]);
                x != y && !adj.contains(&(x.min(y), x.max(y)))
            });
            let Some(i) = pick else {
                return Err(IglError::invariant("no admissible diagonal while triangulating a face"));
            };
            let a_in = face[(i + k - 1) % k];
            let a_next = face[(i + 1) % k];
            let (x, y) = (vs[i], vs[(i + 2) % k]);
            let e = edges.len();
            edges.push((x, y, big.clone()));
            adj.insert((x.min(y), x.max(y)));
            // at x: right after the edge of the incoming arc
            let px = rot[x].iter().position(|&f| f == a_in >> 1).unwrap();
            rot[x].insert(px + 1, e);
            // at y: right after the edge of arc y-1 → y
            let py = rot[y].iter().position(|&f| f == a_next >> 1).unwrap();
            rot[y].insert(py + 1, e);
            if k - 1 > 3 {
                let mut rest = Vec::with_capacity(k - 1);
                rest.push(2 * e);
                for j in 2..k {
                    rest.push(face[(i + j) % k]);
                }
                queue.push(rest);
            }
        }
        let g = WeightedGraph::from_edges(n, edges)?;
        let out = PlaneGraph::new(g, rot)?;
        out.check_euler()?;
        debug_assert!(out.is_triangulated());
        Ok(out)
    }
}

impl PlaneGraph<BigRational> {
    /// Builds from parsed input; parallel edges keep the shortest copy and
    /// drop the others from the rotation.
    pub fn from_parsed(p: &ParsedGraph) -> Result<Self> {
        let rotation = p.rotation.as_ref().ok_or_else(|| IglError::invalid("plane input needs rotation lines"))?;
        let mut keep: Vec<Option<usize>> = vec![None; p.edges.len()];
        let mut best: std::collections::HashMap<(VertexId, VertexId), usize> = Default::default();
        for (i, (u, v, w)) in p.edges.iter().enumerate() {
            let key = ((*u).min(*v), (*u).max(*v));
            match best.get(&key) {
                Some(&j) if p.edges[j].2 <= *w => {}
                _ => {
                    best.insert(key, i);
                }
            }
        }
        let mut chosen: Vec<usize> = best.values().copied().collect();
        chosen.sort_unstable();
        let mut edges = Vec::with_capacity(chosen.len());
        for (new_id, &i) in chosen.iter().enumerate() {
            keep[i] = Some(new_id);
            edges.push(p.edges[i].clone());
        }
        let g = WeightedGraph::from_edges(p.n, edges)?;
        let mut rot = Vec::with_capacity(p.n);
        for (v, r) in rotation.iter().enumerate() {
            for &e in r {
                let (a, b, _) = &p.edges[e];
                if *a != v && *b != v {
                    return Err(IglError::invalid(format!("rotation of vertex {v} lists edge {e} not incident to it")));
                }
            }
            rot.push(r.iter().filter_map(|&e| keep[e]).collect());
        }
        let pg = PlaneGraph::new(g, rot)?;
        pg.check_euler()?;
        Ok(pg)
    }
}

impl<T: Scalar> PlaneGraph<T> {
    /// Edge list followed by rotation lines.
    pub fn to_text(&self) -> String {
        let mut out = crate::graph::io::write_edge_list(&self.g);
        for v in 0..self.n() {
            write!(out, "R {v}").unwrap();
            for e in &self.rot[v] {
                write!(out, " {e}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

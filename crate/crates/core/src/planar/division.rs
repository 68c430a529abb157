use std::collections::VecDeque;

use super::embedding::{edge_of, ArcId, FaceId, PlaneGraph};
use crate::error::{IglError, Result};
use crate::graph::{EdgeId, VertexId};
use crate::scalar::Scalar;

/// Boundary budget is `BOUNDARY_C · √r`.
pub const BOUNDARY_C: f64 = 4.0;
pub const HOLE_BUDGET: usize = 6;

/// A connected subgraph of the host, on local ids.
#[derive(Clone, Debug)]
pub struct Piece<T> {
    pub plane: PlaneGraph<T>,
    /// Local → host vertex.
    pub vmap: Vec<VertexId>,
    /// Local → host edge.
    pub emap: Vec<EdgeId>,
    /// Local ids of vertices with a host edge outside the piece, sorted.
    pub boundary: Vec<VertexId>,
    /// Faces of the piece that are not faces of the host.
    pub holes: Vec<FaceId>,
}

impl<T: Scalar> Piece<T> {
    /// Carves the piece on `edges` out of `host`.
    pub fn new(host: &PlaneGraph<T>, edges: &[EdgeId]) -> Self {
        let (plane, vmap, emap) = host.subgraph(edges);
        let mut mine = vec![false; host.m()];
        for &e in &emap {
            mine[e] = true;
        }
        let g = host.graph();
        let boundary = (0..vmap.len())
            .filter(|&v| g.neighbors(vmap[v]).iter().any(|&(_, e)| !mine[e]))
            .collect();
        let holes = (0..plane.faces().len())
            .filter(|&f| {
                plane.faces()[f].iter().any(|&a| {
                    let ga = lift(host, &plane, &vmap, &emap, a);
                    let gb = lift(host, &plane, &vmap, &emap, plane.next(a));
                    host.next(ga) != gb
                })
            })
            .collect();
        Piece { plane, vmap, emap, boundary, holes }
    }

    pub fn n(&self) -> usize {
        self.vmap.len()
    }

    pub fn is_boundary(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n()];
        for &b in &self.boundary {
            mask[b] = true;
        }
        mask
    }

    /// Host arc of a local arc.
    pub fn host_arc(&self, host: &PlaneGraph<T>, a: ArcId) -> ArcId {
        lift(host, &self.plane, &self.vmap, &self.emap, a)
    }
}

fn lift<T: Scalar>(host: &PlaneGraph<T>, plane: &PlaneGraph<T>, vmap: &[VertexId], emap: &[EdgeId], a: ArcId) -> ArcId {
    host.arc_from(emap[edge_of(a)], vmap[plane.tail(a)])
}

#[derive(Clone, Debug, Default, PartialEq, serde::Serialize)]
pub struct DivisionStats {
    pub pieces: usize,
    pub max_vertices: usize,
    pub max_boundary: usize,
    pub max_holes: usize,
    pub total_boundary: usize,
    /// `max_boundary / √r`.
    pub boundary_constant: f64,
}

#[derive(Clone, Debug)]
pub struct RDivision<T> {
    pub pieces: Vec<Piece<T>>,
    pub r: usize,
    pub stats: DivisionStats,
}

struct Pending {
    edges: Vec<EdgeId>,
    extra_split_used: bool,
}

/// Edge partition into connected pieces of at most `r` vertices. Pieces
/// are split along fundamental cycles of a BFS tree; a piece that fits but
/// has more than `BOUNDARY_C·√r` boundary vertices or more than
/// `HOLE_BUDGET` holes is split once more.
pub fn r_division<T: Scalar>(pg: &PlaneGraph<T>, r: usize) -> Result<RDivision<T>> {
    if r < 4 {
        return Err(IglError::invalid("r-division needs r ≥ 4"));
    }
    if !pg.graph().is_connected() {
        return Err(IglError::invalid("r-division needs a connected graph"));
    }
    let budget = (BOUNDARY_C * (r as f64).sqrt()).floor() as usize;
    let mut stack = vec![Pending { edges: (0..pg.m()).collect(), extra_split_used: false }];
    let mut done: Vec<Piece<T>> = Vec::new();
    while let Some(job) = stack.pop() {
        if job.edges.is_empty() {
            continue;
        }
        let piece = Piece::new(pg, &job.edges);
        let too_big = piece.n() > r;
        let crowded = piece.boundary.len() > budget || piece.holes.len() > HOLE_BUDGET;
        if !too_big && (!crowded || job.extra_split_used || job.edges.len() < 2) {
            done.push(piece);
            continue;
        }
        let extra = job.extra_split_used || !too_big;
        let (inside, outside) = split(&piece);
        for side in [inside, outside] {
            for part in edge_components(&piece, &side) {
                let edges = part.into_iter().map(|e| piece.emap[e]).collect();
                stack.push(Pending { edges, extra_split_used: extra });
            }
        }
    }
    done.sort_by_key(|p| p.emap[0]);
    let stats = DivisionStats {
        pieces: done.len(),
        max_vertices: done.iter().map(Piece::n).max().unwrap_or(0),
        max_boundary: done.iter().map(|p| p.boundary.len()).max().unwrap_or(0),
        max_holes: done.iter().map(|p| p.holes.len()).max().unwrap_or(0),
        total_boundary: done.iter().map(|p| p.boundary.len()).sum(),
        boundary_constant: done.iter().map(|p| p.boundary.len()).max().unwrap_or(0) as f64 / (r as f64).sqrt(),
    };
    Ok(RDivision { pieces: done, r, stats })
}

/// Two nonempty edge sets (local ids). The separating cycle is a
/// fundamental cycle of a BFS tree in a triangulation of the piece, chosen
/// to balance the number of triangles on each side.
fn split<T: Scalar>(piece: &Piece<T>) -> (Vec<EdgeId>, Vec<EdgeId>) {
    let m = piece.plane.m();
    if let Ok(tri) = piece.plane.triangulate() {
        if let Some(found) = cycle_split(piece, &tri) {
            return found;
        }
    }
    let g = piece.plane.graph();
    let rank = bfs(g, 0).0;
    let mut edges: Vec<EdgeId> = (0..m).collect();
    edges.sort_by_key(|&e| {
        let (u, v, _) = g.edge(e);
        (rank[u].max(rank[v]), e)
    });
    let outside = edges.split_off((m / 2).max(1));
    (edges, outside)
}

fn bfs<T: Scalar>(g: &crate::graph::WeightedGraph<T>, root: VertexId) -> (Vec<usize>, Vec<bool>) {
    let mut rank = vec![usize::MAX; g.n()];
    let mut tree_edge = vec![false; g.m()];
    let mut order = vec![root];
    rank[root] = 0;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &(v, e) in g.neighbors(u) {
            if rank[v] == usize::MAX {
                rank[v] = order.len();
                tree_edge[e] = true;
                order.push(v);
            }
        }
    }
    (rank, tree_edge)
}

fn cycle_split<T: Scalar>(piece: &Piece<T>, tri: &PlaneGraph<T>) -> Option<(Vec<EdgeId>, Vec<EdgeId>)> {
    let m = piece.plane.m();
    let (_, tree_edge) = bfs(tri.graph(), 0);
    let nf = tri.faces().len();
    let mut fparent: Vec<Option<FaceId>> = vec![None; nf];
    let mut fseen = vec![false; nf];
    let mut forder = vec![0];
    fseen[0] = true;
    let mut i = 0;
    while i < forder.len() {
        let f = forder[i];
        i += 1;
        for &a in &tri.faces()[f] {
            let h = tri.right(a);
            if !tree_edge[edge_of(a)] && !fseen[h] {
                fseen[h] = true;
                fparent[h] = Some(f);
                forder.push(h);
            }
        }
    }
    let mut weight = vec![1usize; nf];
    let mut children: Vec<Vec<FaceId>> = vec![Vec::new(); nf];
    for &f in forder.iter().rev() {
        if let Some(p) = fparent[f] {
            weight[p] += weight[f];
            children[p].push(f);
        }
    }
    let mut candidates: Vec<FaceId> = (0..nf).filter(|&f| fparent[f].is_some()).collect();
    candidates.sort_by_key(|&f| ((2 * weight[f]).abs_diff(nf), f));

    for &f in candidates.iter().take(8) {
        let mut in_sub = vec![false; nf];
        let mut stack = vec![f];
        while let Some(x) = stack.pop() {
            in_sub[x] = true;
            stack.extend(children[x].iter().copied());
        }
        let mut inside = Vec::new();
        let mut outside = Vec::new();
        let mut touched = vec![false; piece.n()];
        for e in 0..m {
            if in_sub[tri.left(2 * e)] || in_sub[tri.right(2 * e)] {
                inside.push(e);
                let (u, v, _) = piece.plane.graph().edge(e);
                touched[u] = true;
                touched[v] = true;
            } else {
                outside.push(e);
            }
        }
        // fragments hanging only off the cycle join the inside
        let mut kept = Vec::new();
        for comp in edge_components(piece, &outside) {
            let g = piece.plane.graph();
            if comp.iter().all(|&e| {
                let (u, v, _) = g.edge(e);
                touched[u] && touched[v]
            }) {
                inside.extend(comp);
            } else {
                kept.extend(comp);
            }
        }
        if !inside.is_empty() && !kept.is_empty() {
            inside.sort_unstable();
            kept.sort_unstable();
            return Some((inside, kept));
        }
    }
    None
}

/// Connected components of an edge set of `piece` (local ids).
fn edge_components<T: Scalar>(piece: &Piece<T>, edges: &[EdgeId]) -> Vec<Vec<EdgeId>> {
    let g = piece.plane.graph();
    let mut member = vec![false; g.m()];
    for &e in edges {
        member[e] = true;
    }
    let mut seen = vec![false; g.m()];
    let mut out = Vec::new();
    for &e0 in edges {
        if seen[e0] {
            continue;
        }
        seen[e0] = true;
        let mut comp = vec![e0];
        let mut queue = VecDeque::from([e0]);
        while let Some(e) = queue.pop_front() {
            let (u, v, _) = g.edge(e);
            for x in [u, v] {
                for &(_, f) in g.neighbors(x) {
                    if member[f] && !seen[f] {
                        seen[f] = true;
                        comp.push(f);
                        queue.push_back(f);
                    }
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Audits a division of `pg`: every edge in exactly one piece, pieces
/// connected with at most `r` vertices, boundaries and holes as recorded,
/// every boundary vertex on a hole, interiors pairwise disjoint, and each
/// piece's interior separated from the rest of the graph by its boundary.
pub fn check_division<T: Scalar>(pg: &PlaneGraph<T>, div: &RDivision<T>) -> Result<()> {
    let mut owner = vec![usize::MAX; pg.m()];
    for (i, p) in div.pieces.iter().enumerate() {
        for &e in &p.emap {
            if owner[e] != usize::MAX {
                return Err(IglError::invariant(format!("edge {e} in pieces {} and {i}", owner[e])));
            }
            owner[e] = i;
        }
    }
    if let Some(e) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(IglError::invariant(format!("edge {e} in no piece")));
    }
    let mut interior_of = vec![usize::MAX; pg.n()];
    let g = pg.graph();
    for (i, p) in div.pieces.iter().enumerate() {
        if p.n() > div.r {
            return Err(IglError::invariant(format!("piece {i} has {} > r vertices", p.n())));
        }
        if !p.plane.graph().is_connected() {
            return Err(IglError::invariant(format!("piece {i} is disconnected")));
        }
        let fresh = Piece::new(pg, &p.emap);
        if fresh.boundary != p.boundary || fresh.holes != p.holes {
            return Err(IglError::invariant(format!("piece {i} has stale boundary or holes")));
        }
        let mut on_hole = vec![false; p.n()];
        for &f in &p.holes {
            for v in p.plane.face_vertices(f) {
                on_hole[v] = true;
            }
        }
        let is_b = p.is_boundary();
        for v in 0..p.n() {
            if is_b[v] {
                if !on_hole[v] {
                    return Err(IglError::invariant(format!("boundary vertex {} of piece {i} on no hole", p.vmap[v])));
                }
                continue;
            }
            let hv = p.vmap[v];
            if interior_of[hv] != usize::MAX {
                return Err(IglError::invariant(format!("vertex {hv} interior to two pieces")));
            }
            interior_of[hv] = i;
            if g.neighbors(hv).iter().any(|&(_, e)| owner[e] != i) {
                return Err(IglError::invariant(format!("interior vertex {hv} of piece {i} leaves the piece")));
            }
        }
    }
    Ok(())
}

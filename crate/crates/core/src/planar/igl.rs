use std::collections::HashMap;

use rayon::prelude::*;

use super::division::{r_division, Piece};
use super::dual::DualCycle;
use super::embedding::PlaneGraph;
use super::isw::{isw_star_cycles, whole_piece_sums, ArcSubtreeMap, StarCycleQuery, SubPath};
use super::voronoi::{dual_description, extract_patches, families_for, voronoi, BisectorFamily};
use crate::error::{IglError, Result};
use crate::graph::{dijkstra, GraphBuilder, VertexId};
use crate::poly::DistanceKernel;
use crate::scalar::{Dist, Scalar};

const AUDIT_MAX_N: usize = 4096;

#[derive(Clone, Debug)]
pub struct PlanarOptions {
    pub kernel: DistanceKernel,
    /// Piece size; defaults to `⌈n^{2/5}⌉` clamped to `[16, n]`.
    pub r: Option<usize>,
    /// Pair-channel audit (small graphs) and per-piece identity checks.
    pub audit: bool,
    pub parallel: bool,
}

impl Default for PlanarOptions {
    fn default() -> Self {
        PlanarOptions { kernel: DistanceKernel::Inverse, r: None, audit: false, parallel: true }
    }
}

pub fn default_r(n: usize) -> usize {
    let r = (n as f64).powf(0.4).ceil() as usize;
    r.max(16).min(n).max(4)
}

/// Work counters. `tau_terms − sigma_terms` must equal `expected_terms`,
/// which is `outside · piece_vertices` summed over pieces: the cells of
/// every diagram partition the piece.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct PieceCounters {
    pub outside: usize,
    pub piece_vertices: usize,
    pub expected_terms: usize,
    pub diagrams: usize,
    pub cycles: usize,
    pub patches: usize,
    pub bisectors_built: usize,
    pub tau_terms: usize,
    pub sigma_terms: usize,
    pub identity_checks: usize,
    pub identity_failures: usize,
}

impl PieceCounters {
    pub fn add(&mut self, o: &PieceCounters) {
        self.outside += o.outside;
        self.piece_vertices += o.piece_vertices;
        self.expected_terms += o.expected_terms;
        self.diagrams += o.diagrams;
        self.cycles += o.cycles;
        self.patches += o.patches;
        self.bisectors_built += o.bisectors_built;
        self.tau_terms += o.tau_terms;
        self.sigma_terms += o.sigma_terms;
        self.identity_checks += o.identity_checks;
        self.identity_failures += o.identity_failures;
    }

    pub fn balanced(&self) -> bool {
        self.tau_terms == self.sigma_terms + self.expected_terms
    }
}

/// Sums from the vertices outside a piece into it.
#[derive(Clone, Debug)]
pub struct PieceResult<T> {
    /// Host ids.
    pub outside: Vec<VertexId>,
    /// `IGL(a, V(P))`.
    pub total: Vec<T>,
    /// `IGL(a, ∂P)`.
    pub boundary: Vec<T>,
}

impl<T: Scalar> PieceResult<T> {
    /// `IGL(a, V(P) ∖ ∂P)`.
    pub fn interior(&self, i: usize) -> T {
        self.total[i].clone() - &self.boundary[i]
    }
}

/// `IGL(a, V(P))` for every host vertex `a` in `outside` (all outside the
/// piece). `dg[j]` is the host distance row of boundary vertex `j` of the
/// piece. Each `a` splits the piece into Voronoi cells of the boundary with
/// weights `d_G(s, a)`; a cell is the whole piece minus the exteriors of its
/// cycles, and those exterior sums come from bisector segment trees.
pub fn igl_per_piece<T: Scalar>(
    piece: &Piece<T>,
    outside: &[VertexId],
    dg: &[&[Dist<T>]],
    kernel: DistanceKernel,
    audit: bool,
) -> Result<(PieceResult<T>, PieceCounters)> {
    let b = piece.boundary.len();
    let np = piece.n();
    let mut counters = PieceCounters {
        outside: outside.len(),
        piece_vertices: np,
        expected_terms: outside.len() * np,
        ..Default::default()
    };
    if outside.is_empty() {
        return Ok((PieceResult { outside: Vec::new(), total: Vec::new(), boundary: Vec::new() }, counters));
    }
    if b == 0 || dg.len() != b {
        return Err(IglError::invalid("piece with outside vertices needs its boundary distance rows"));
    }
    let pg = &piece.plane;
    let sites = &piece.boundary;
    let rows: Vec<Vec<T>> = sites
        .iter()
        .map(|&s| {
            dijkstra(pg.graph(), s)
                .dist
                .into_iter()
                .map(|d| d.finite().cloned().ok_or_else(|| IglError::invariant("piece is disconnected")))
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<_>>()?;
    let maps: Vec<ArcSubtreeMap> = sites.iter().map(|&s| ArcSubtreeMap::build(pg, s)).collect::<Result<_>>()?;
    let families: Vec<Vec<Option<BisectorFamily<T>>>> = (0..b).map(|s| families_for(s, sites, &rows)).collect();

    let mut delta_of: Vec<Vec<T>> = Vec::with_capacity(outside.len());
    let mut boundary_sum = Vec::with_capacity(outside.len());
    for &a in outside {
        let delta = (0..b)
            .map(|j| dg[j][a].finite().cloned().ok_or_else(|| IglError::invalid("graph is disconnected")))
            .collect::<Result<Vec<T>>>()?;
        let mut bs = T::zero();
        for d in &delta {
            bs += kernel.apply(d);
        }
        boundary_sum.push(bs);
        delta_of.push(delta);
    }

    // per site: the outside vertices whose cell is nonempty, their cycles as
    // patch queries, and the bisectors those patches refer to
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); b];
    let mut queries: Vec<Vec<StarCycleQuery<T>>> = vec![Vec::new(); b];
    let mut query_owner: Vec<Vec<usize>> = vec![Vec::new(); b];
    let mut base_ids: Vec<HashMap<(usize, usize), usize>> = vec![HashMap::new(); b];
    let mut bases: Vec<Vec<&DualCycle>> = vec![Vec::new(); b];
    let mut direct: Vec<Vec<T>> = vec![Vec::new(); b];
    for (ai, delta) in delta_of.iter().enumerate() {
        let vd = voronoi(pg, sites, delta)?;
        counters.diagrams += 1;
        let mut cell_sum = audit.then(|| vec![T::zero(); b]);
        if let Some(cs) = cell_sum.as_mut() {
            for (v, &s) in vd.cell.iter().enumerate().take(np) {
                cs[s] += kernel.apply(&(delta[s].clone() + &rows[s][v]));
            }
        }
        for s in 0..b {
            if vd.is_empty(s) {
                continue;
            }
            owners[s].push(ai);
            if let Some(cs) = &cell_sum {
                direct[s].push(cs[s].clone());
            }
            for gamma in dual_description(pg, &vd, s)? {
                counters.cycles += 1;
                let patches = extract_patches(pg, &vd, s, &gamma, &families[s])?;
                counters.patches += patches.len();
                let mut parts = Vec::with_capacity(patches.len());
                for p in patches {
                    let key = (p.t, p.threshold);
                    let id = match base_ids[s].get(&key) {
                        Some(&id) => id,
                        None => {
                            let fam = families[s][p.t].as_ref().expect("family of another site");
                            let id = bases[s].len();
                            bases[s].push(&fam.bisector(pg, p.threshold)?.cycle);
                            base_ids[s].insert(key, id);
                            id
                        }
                    };
                    parts.push(SubPath { cycle: id, start: p.start, len: p.len });
                }
                queries[s].push(StarCycleQuery { parts, shift: delta[s].clone() });
                query_owner[s].push(owners[s].len() - 1);
            }
        }
    }

    let mut total = vec![T::zero(); outside.len()];
    for s in 0..b {
        if owners[s].is_empty() {
            continue;
        }
        let shifts: Vec<T> = owners[s].iter().map(|&ai| delta_of[ai][s].clone()).collect();
        let mut x = whole_piece_sums(&rows[s], &shifts, kernel)?;
        counters.tau_terms += shifts.len() * np;
        let (sigma, st) =
            isw_star_cycles(pg, &maps[s], &rows[s], None, &bases[s], &queries[s], kernel, audit)?;
        counters.sigma_terms += st.pair_terms;
        for (qi, v) in sigma.into_iter().enumerate() {
            x[query_owner[s][qi]] -= v;
        }
        for (k, &ai) in owners[s].iter().enumerate() {
            if audit {
                counters.identity_checks += 1;
                if !close(&x[k], &direct[s][k]) {
                    counters.identity_failures += 1;
                }
            }
            total[ai] += x[k].clone();
        }
        counters.bisectors_built += families[s].iter().flatten().map(BisectorFamily::built).sum::<usize>();
    }
    Ok((PieceResult { outside: outside.to_vec(), total, boundary: boundary_sum }, counters))
}

fn close<T: Scalar>(a: &T, b: &T) -> bool {
    if T::MODE == crate::scalar::ArithMode::Exact {
        a == b
    } else {
        let (x, y) = (a.to_f64(), b.to_f64());
        (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1e-300)
    }
}

/// Per-pair bookkeeping of the recombination: every ordered pair `(a, v)`
/// must be summed exactly once, and `(a, v)`, `(v, a)` through the same
/// channel (boundary, cross-piece or own-piece).
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ChannelAudit {
    pub pairs: usize,
    pub miscounted: usize,
    pub asymmetric: usize,
    pub boundary_pairs: usize,
    pub cross_pairs: usize,
    pub own_pairs: usize,
}

#[derive(Clone, Debug, Default, PartialEq, serde::Serialize)]
pub struct PlanarStats {
    pub r: usize,
    pub pieces: usize,
    pub boundary_vertices: usize,
    pub max_piece: usize,
    pub max_boundary: usize,
    pub max_holes: usize,
    pub boundary_constant: f64,
    pub work: PieceCounters,
}

#[derive(Clone, Debug)]
pub struct PlanarOutcome<T> {
    pub per_vertex: Vec<T>,
    pub stats: PlanarStats,
    pub audit: Option<ChannelAudit>,
}

const BOUNDARY: u8 = 1;
const CROSS: u8 = 2;
const OWN: u8 = 3;

struct Channels {
    n: usize,
    count: Vec<u8>,
    tag: Vec<u8>,
}

impl Channels {
    fn hit(&mut self, a: VertexId, v: VertexId, tag: u8) {
        let k = a * self.n + v;
        self.count[k] = self.count[k].saturating_add(1);
        self.tag[k] = tag;
    }
}

/// `IGL(a, V ∖ {a})` for every vertex of a connected plane graph.
pub fn igl_planar_all_sources<T: Scalar>(pg: &PlaneGraph<T>, opts: &PlanarOptions) -> Result<PlanarOutcome<T>> {
    let snapped;
    let pg = if T::is_exact() {
        pg
    } else {
        snapped = snap_lengths(pg);
        &snapped
    };
    let n = pg.n();
    let g = pg.graph();
    let kernel = opts.kernel;
    if n <= 1 {
        return Ok(PlanarOutcome { per_vertex: vec![T::zero(); n], stats: PlanarStats::default(), audit: None });
    }
    if !g.is_connected() {
        return Err(IglError::invalid("per-vertex planar sums need a connected graph"));
    }
    pg.check_euler()?;
    if opts.audit && n > AUDIT_MAX_N {
        return Err(IglError::invalid(format!("pair audit is limited to n ≤ {AUDIT_MAX_N}")));
    }
    let r = opts.r.unwrap_or_else(|| default_r(n));
    let div = r_division(pg, r)?;
    let pieces = &div.pieces;

    let mut bpos = vec![usize::MAX; n];
    let mut bverts: Vec<VertexId> = Vec::new();
    for p in pieces {
        for &v in &p.boundary {
            let h = p.vmap[v];
            if bpos[h] == usize::MAX {
                bpos[h] = 0;
                bverts.push(h);
            }
        }
    }
    bverts.sort_unstable();
    for (i, &v) in bverts.iter().enumerate() {
        bpos[v] = i;
    }
    let mut home = vec![usize::MAX; n];
    for (i, p) in pieces.iter().enumerate() {
        let is_b = p.is_boundary();
        for v in 0..p.n() {
            if !is_b[v] {
                home[p.vmap[v]] = i;
            }
        }
    }
    if (0..n).any(|v| bpos[v] == usize::MAX && home[v] == usize::MAX) {
        return Err(IglError::invariant("vertex neither on a boundary nor inside a piece"));
    }

    let brows: Vec<Vec<Dist<T>>> = if opts.parallel {
        bverts.par_iter().map(|&b| dijkstra(g, b).dist).collect()
    } else {
        bverts.iter().map(|&b| dijkstra(g, b).dist).collect()
    };

    let run_piece = |p: &Piece<T>| -> Result<(PieceResult<T>, PieceCounters)> {
        let mut inside = vec![false; n];
        for &v in &p.vmap {
            inside[v] = true;
        }
        let outside: Vec<VertexId> = (0..n).filter(|&v| !inside[v] && bpos[v] == usize::MAX).collect();
        let dg: Vec<&[Dist<T>]> = p.boundary.iter().map(|&v| brows[bpos[p.vmap[v]]].as_slice()).collect();
        igl_per_piece(p, &outside, &dg, kernel, opts.audit)
    };
    let results: Vec<(PieceResult<T>, PieceCounters)> = if opts.parallel {
        pieces.par_iter().map(run_piece).collect::<Result<_>>()?
    } else {
        pieces.iter().map(run_piece).collect::<Result<_>>()?
    };

    let own_piece = |i: usize| -> Result<Vec<(VertexId, T)>> {
        let p = &pieces[i];
        let mut bld = GraphBuilder::new(p.n());
        for (u, v, w) in p.plane.graph().edges() {
            bld.add_edge(u, v, w.clone())?;
        }
        for (x, &u) in p.boundary.iter().enumerate() {
            for &v in &p.boundary[x + 1..] {
                let d = brows[bpos[p.vmap[u]]][p.vmap[v]].finite().cloned();
                bld.add_edge(u, v, d.ok_or_else(|| IglError::invalid("graph is disconnected"))?)?;
            }
        }
        let aug = bld.build();
        let is_b = p.is_boundary();
        let mut out = Vec::new();
        for a in (0..p.n()).filter(|&a| !is_b[a]) {
            let row = dijkstra(&aug, a).dist;
            let mut sum = T::zero();
            for v in (0..p.n()).filter(|&v| v != a && !is_b[v]) {
                sum += row[v].kernel_value(kernel);
            }
            out.push((p.vmap[a], sum));
        }
        Ok(out)
    };
    let own: Vec<Vec<(VertexId, T)>> = if opts.parallel {
        (0..pieces.len()).into_par_iter().map(own_piece).collect::<Result<_>>()?
    } else {
        (0..pieces.len()).map(own_piece).collect::<Result<_>>()?
    };

    let mut value = vec![T::zero(); n];
    let mut channels = opts.audit.then(|| Channels { n, count: vec![0; n * n], tag: vec![0; n * n] });
    for (bi, &b) in bverts.iter().enumerate() {
        let mut sum = T::zero();
        for v in (0..n).filter(|&v| v != b) {
            sum += brows[bi][v].kernel_value(kernel);
            if let Some(c) = channels.as_mut() {
                c.hit(b, v, BOUNDARY);
            }
        }
        value[b] = sum;
    }
    for a in (0..n).filter(|&a| bpos[a] == usize::MAX) {
        let mut sum = T::zero();
        for row in &brows {
            sum += row[a].kernel_value(kernel);
        }
        value[a] = sum;
        if let Some(c) = channels.as_mut() {
            for &b in &bverts {
                c.hit(a, b, BOUNDARY);
            }
        }
    }
    let mut work = PieceCounters::default();
    for (i, (res, counters)) in results.iter().enumerate() {
        work.add(counters);
        if opts.audit && !counters.balanced() {
            return Err(IglError::invariant(format!("piece {i}: τ/σ term counts do not balance")));
        }
        if counters.identity_failures > 0 {
            return Err(IglError::invariant(format!("piece {i}: cell sums disagree with τ − Σσ")));
        }
        let interior: Vec<VertexId> = if channels.is_some() {
            let is_b = pieces[i].is_boundary();
            (0..pieces[i].n()).filter(|&v| !is_b[v]).map(|v| pieces[i].vmap[v]).collect()
        } else {
            Vec::new()
        };
        for (k, &a) in res.outside.iter().enumerate() {
            value[a] += res.interior(k);
            if let Some(c) = channels.as_mut() {
                for &v in &interior {
                    c.hit(a, v, CROSS);
                }
            }
        }
    }
    for (i, list) in own.into_iter().enumerate() {
        for (a, s) in list {
            value[a] += s;
            if let Some(c) = channels.as_mut() {
                let is_b = pieces[i].is_boundary();
                for v in (0..pieces[i].n()).filter(|&v| !is_b[v]).map(|v| pieces[i].vmap[v]) {
                    if v != a {
                        c.hit(a, v, OWN);
                    }
                }
            }
        }
    }

    let audit = channels.map(|c| {
        let mut au = ChannelAudit::default();
        for a in 0..n {
            for v in 0..n {
                if a == v {
                    continue;
                }
                let k = a * n + v;
                au.pairs += 1;
                if c.count[k] != 1 {
                    au.miscounted += 1;
                }
                if c.tag[k] != c.tag[v * n + a] {
                    au.asymmetric += 1;
                }
                match c.tag[k] {
                    BOUNDARY => au.boundary_pairs += 1,
                    CROSS => au.cross_pairs += 1,
                    OWN => au.own_pairs += 1,
                    _ => {}
                }
            }
        }
        au
    });
    if let Some(au) = &audit {
        if au.miscounted > 0 || au.asymmetric > 0 {
            return Err(IglError::invariant(format!(
                "{} ordered pairs miscounted, {} summed through different channels",
                au.miscounted, au.asymmetric
            )));
        }
    }
    let stats = PlanarStats {
        r,
        pieces: pieces.len(),
        boundary_vertices: bverts.len(),
        max_piece: div.stats.max_vertices,
        max_boundary: div.stats.max_boundary,
        max_holes: div.stats.max_holes,
        boundary_constant: div.stats.boundary_constant,
        work,
    };
    Ok(PlanarOutcome { per_vertex: value, stats, audit })
}

#[derive(Clone, Debug)]
pub struct PlanarSummary<T> {
    pub value: T,
    pub components: usize,
    /// Stats of the largest component.
    pub stats: PlanarStats,
    pub audit: Option<ChannelAudit>,
}

/// Float mode: edge lengths on a grid where every path length, and every
/// sum or difference of two, is exact. Ties in the Voronoi diagrams then
/// resolve as they would in exact arithmetic.
fn snap_lengths<T: Scalar>(pg: &PlaneGraph<T>) -> PlaneGraph<T> {
    let span = pg.graph().edges().fold(T::zero(), |acc, (_, _, w)| acc + w);
    pg.map_weights(|w| {
        let mut x = w.clone();
        T::snap_to_grid(&mut [&mut x], &span);
        x
    })
}

pub fn igl_planar<T: Scalar>(pg: &PlaneGraph<T>) -> Result<T> {
    Ok(igl_planar_with(pg, &PlanarOptions::default())?.value)
}

/// Half the sum of the per-vertex values, per connected component.
pub fn igl_planar_with<T: Scalar>(pg: &PlaneGraph<T>, opts: &PlanarOptions) -> Result<PlanarSummary<T>> {
    let g = pg.graph();
    let comps = g.components();
    let mut total = T::zero();
    let mut stats = PlanarStats::default();
    let mut audit: Option<ChannelAudit> = None;
    let mut biggest = 0;
    for comp in &comps {
        if comp.len() < 2 {
            continue;
        }
        let out = if comps.len() == 1 {
            igl_planar_all_sources(pg, opts)?
        } else {
            let mut in_comp = vec![false; g.n()];
            for &v in comp {
                in_comp[v] = true;
            }
            let edges: Vec<usize> = (0..g.m()).filter(|&e| in_comp[g.edge(e).0]).collect();
            let (sub, _, _) = pg.subgraph(&edges);
            igl_planar_all_sources(&sub, opts)?
        };
        let mut sum = T::zero();
        for v in out.per_vertex {
            sum += v;
        }
        total += sum;
        if comp.len() > biggest {
            biggest = comp.len();
            stats = out.stats;
        }
        if let Some(a) = out.audit {
            let acc = audit.get_or_insert_with(ChannelAudit::default);
            acc.pairs += a.pairs;
            acc.boundary_pairs += a.boundary_pairs;
            acc.cross_pairs += a.cross_pairs;
            acc.own_pairs += a.own_pairs;
        }
    }
    Ok(PlanarSummary { value: total * T::from_ratio(1, 2), components: comps.len(), stats, audit })
}

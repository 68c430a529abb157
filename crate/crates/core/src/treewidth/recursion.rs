use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::separation::{balanced_separation, igl_across_counted, BagSide};
use super::TreeDecomposition;
use crate::error::{IglError, Result};
use crate::graph::{dijkstra, kernel_sum_brute, GraphBuilder, VertexId, WeightedGraph};
use crate::poly::DistanceKernel;
use crate::scalar::{Dist, Scalar};

const AUDIT_MAX_N: usize = 4096;

#[derive(Clone, Debug)]
pub struct TreewidthOptions {
    pub kernel: DistanceKernel,
    /// Graphs with at most this many vertices go to the all-pairs oracle.
    /// Defaults to `max(32, 4 (width + 1))`.
    pub base_threshold: Option<usize>,
    /// Track how often each vertex pair is counted (small graphs only).
    pub audit: bool,
    pub parallel: bool,
}

impl Default for TreewidthOptions {
    fn default() -> Self {
        TreewidthOptions { kernel: DistanceKernel::Inverse, base_threshold: None, audit: false, parallel: true }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct TreewidthStats {
    pub separations: usize,
    pub base_cases: usize,
    pub max_depth: usize,
    pub max_separator: usize,
    pub canonical_sets: usize,
}

/// Outcome of the pair-count audit: every connected pair must be counted
/// exactly once and every disconnected pair never.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct PairAudit {
    pub pairs: usize,
    pub miscounted: usize,
}

#[derive(Clone, Debug)]
pub struct TreewidthOutcome<T> {
    pub value: T,
    pub stats: TreewidthStats,
    pub audit: Option<PairAudit>,
}

struct Ctx {
    opts: TreewidthOptions,
    n0: usize,
    counts: Option<Mutex<Vec<i32>>>,
    separations: AtomicUsize,
    base_cases: AtomicUsize,
    max_depth: AtomicUsize,
    max_separator: AtomicUsize,
    canonical_sets: AtomicUsize,
}

impl Ctx {
    fn bump(&self, orig: &[VertexId], xs: &[VertexId], ys: &[VertexId], delta: i32) {
        if let Some(m) = &self.counts {
            let mut m = m.lock().unwrap();
            for &x in xs {
                for &y in ys {
                    let (u, v) = (orig[x], orig[y]);
                    m[u * self.n0 + v] += delta;
                    m[v * self.n0 + u] += delta;
                }
            }
        }
    }

    fn bump_within(&self, orig: &[VertexId], xs: &[VertexId], delta: i32) {
        if let Some(m) = &self.counts {
            let mut m = m.lock().unwrap();
            for (i, &x) in xs.iter().enumerate() {
                for &y in &xs[i + 1..] {
                    let (u, v) = (orig[x], orig[y]);
                    m[u * self.n0 + v] += delta;
                    m[v * self.n0 + u] += delta;
                }
            }
        }
    }
}

pub fn igl_treewidth<T: Scalar>(g: &WeightedGraph<T>, td: &TreeDecomposition) -> Result<T> {
    Ok(igl_treewidth_with(g, td, &TreewidthOptions::default())?.value)
}

/// Divide and conquer over balanced separations: pairs split by the
/// separator are summed through range queries, both sides recurse with a
/// shortcut clique on `S`, and the `S`–`S` pairs counted twice are removed.
pub fn igl_treewidth_with<T: Scalar>(
    g: &WeightedGraph<T>,
    td: &TreeDecomposition,
    opts: &TreewidthOptions,
) -> Result<TreewidthOutcome<T>> {
    td.validate(g)?;
    let n = g.n();
    if opts.audit && n > AUDIT_MAX_N {
        return Err(IglError::invalid(format!("pair audit is limited to n ≤ {AUDIT_MAX_N}")));
    }
    let ctx = Ctx {
        opts: opts.clone(),
        n0: n,
        counts: opts.audit.then(|| Mutex::new(vec![0; n * n])),
        separations: AtomicUsize::new(0),
        base_cases: AtomicUsize::new(0),
        max_depth: AtomicUsize::new(0),
        max_separator: AtomicUsize::new(0),
        canonical_sets: AtomicUsize::new(0),
    };
    let orig: Vec<VertexId> = (0..n).collect();
    let value = solve(g, td, &orig, 0, &ctx)?;
    let audit = match &ctx.counts {
        Some(m) => {
            let m = m.lock().unwrap();
            let comps = g.components();
            let mut label = vec![0; n];
            for (ci, c) in comps.iter().enumerate() {
                for &v in c {
                    label[v] = ci;
                }
            }
            let mut a = PairAudit::default();
            for u in 0..n {
                for v in u + 1..n {
                    a.pairs += 1;
                    let want = i32::from(label[u] == label[v]);
                    if m[u * n + v] != want {
                        a.miscounted += 1;
                    }
                }
            }
            Some(a)
        }
        None => None,
    };
    if let Some(a) = &audit {
        if a.miscounted > 0 {
            return Err(IglError::invariant(format!("{} vertex pairs miscounted by the recursion", a.miscounted)));
        }
    }
    Ok(TreewidthOutcome {
        value,
        stats: TreewidthStats {
            separations: ctx.separations.into_inner(),
            base_cases: ctx.base_cases.into_inner(),
            max_depth: ctx.max_depth.into_inner(),
            max_separator: ctx.max_separator.into_inner(),
            canonical_sets: ctx.canonical_sets.into_inner(),
        },
        audit,
    })
}

fn brute<T: Scalar>(g: &WeightedGraph<T>, orig: &[VertexId], ctx: &Ctx) -> T {
    ctx.base_cases.fetch_add(1, Ordering::Relaxed);
    let all: Vec<VertexId> = (0..g.n()).collect();
    ctx.bump_within(orig, &all, 1);
    kernel_sum_brute(g, ctx.opts.kernel)
}

fn child<T: Scalar>(
    g: &WeightedGraph<T>,
    td: &TreeDecomposition,
    orig: &[VertexId],
    vertices: &[VertexId],
    keep_bag: &[bool],
    clique: &[(VertexId, VertexId, T)],
) -> (WeightedGraph<T>, TreeDecomposition, Vec<VertexId>) {
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in vertices.iter().enumerate() {
        local[v] = i;
    }
    let mut b = GraphBuilder::new(vertices.len());
    for (u, v, w) in g.edges() {
        if local[u] != usize::MAX && local[v] != usize::MAX {
            b.add_edge(local[u], local[v], w.clone()).expect("child edge");
        }
    }
    for (u, v, w) in clique {
        b.add_edge(local[*u], local[*v], w.clone()).expect("shortcut edge");
    }
    let sub_td = td.restrict(keep_bag, &local);
    let sub_orig = vertices.iter().map(|&v| orig[v]).collect();
    (b.build(), sub_td, sub_orig)
}

fn solve<T: Scalar>(
    g: &WeightedGraph<T>,
    td: &TreeDecomposition,
    orig: &[VertexId],
    depth: usize,
    ctx: &Ctx,
) -> Result<T> {
    ctx.max_depth.fetch_max(depth, Ordering::Relaxed);
    let n = g.n();
    if n < 2 {
        return Ok(T::zero());
    }
    let comps = g.components();
    if comps.len() > 1 {
        let mut total = T::zero();
        for comp in comps {
            if comp.len() < 2 {
                continue;
            }
            let mut in_comp = vec![false; n];
            for &v in &comp {
                in_comp[v] = true;
            }
            let keep: Vec<bool> = td.bags.iter().map(|b| b.iter().any(|&v| in_comp[v])).collect();
            let (cg, ctd, corig) = child(g, td, orig, &comp, &keep, &[]);
            total += solve(&cg, &ctd, &corig, depth, ctx)?;
        }
        return Ok(total);
    }
    let base = ctx.opts.base_threshold.unwrap_or_else(|| 32.max(4 * (td.width() + 1)));
    if n <= base {
        return Ok(brute(g, orig, ctx));
    }
    let bs = match balanced_separation(td, g) {
        Ok(bs) if !bs.separation.a.is_empty() && !bs.separation.b.is_empty() => bs,
        _ => return Ok(brute(g, orig, ctx)),
    };
    ctx.separations.fetch_add(1, Ordering::Relaxed);
    let sep = &bs.separation;
    ctx.max_separator.fetch_max(sep.s.len(), Ordering::Relaxed);

    let rows: Vec<Vec<Dist<T>>> = if ctx.opts.parallel {
        use rayon::prelude::*;
        sep.s.par_iter().map(|&s| dijkstra(g, s).dist).collect()
    } else {
        sep.s.iter().map(|&s| dijkstra(g, s).dist).collect()
    };
    let (across, sets) = igl_across_counted(g, sep, &rows, ctx.opts.kernel)?;
    ctx.canonical_sets.fetch_add(sets, Ordering::Relaxed);
    ctx.bump(orig, &sep.a, &sep.b, 1);

    let mut clique = Vec::new();
    let mut within = T::zero();
    for (j, &s) in sep.s.iter().enumerate() {
        for &t in &sep.s[j + 1..] {
            let d = rows[j][t].finite().ok_or_else(|| IglError::invariant("separator not connected"))?;
            within += DistanceKernel::apply(ctx.opts.kernel, d);
            clique.push((s, t, d.clone()));
        }
    }
    ctx.bump_within(orig, &sep.s, -1);

    let side_job = |side: BagSide| -> Result<T> {
        let part = if side == BagSide::A { &sep.a } else { &sep.b };
        let mut vertices: Vec<VertexId> = part.iter().chain(&sep.s).copied().collect();
        vertices.sort_unstable();
        let keep: Vec<bool> = bs.bag_side.iter().map(|&s| s == side || s == BagSide::Center).collect();
        let (cg, ctd, corig) = child(g, td, orig, &vertices, &keep, &clique);
        solve(&cg, &ctd, &corig, depth + 1, ctx)
    };
    let (ra, rb) = if ctx.opts.parallel {
        rayon::join(|| side_job(BagSide::A), || side_job(BagSide::B))
    } else {
        (side_job(BagSide::A), side_job(BagSide::B))
    };
    Ok(across + ra? + rb? - within)
}

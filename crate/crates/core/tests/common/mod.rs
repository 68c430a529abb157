//! Seeded randomized trials shared by the module tests and the acceptance
//! suite. Each trial compares a fast routine with a direct oracle and
//! returns the number of comparisons made, or a description of the first
//! mismatch.
#![allow(dead_code)]

use std::ops::Bound;

use igl_core::generate::{ktree, random_triangulation, rng, WeightSpec};
use igl_core::graph::dijkstra;
use igl_core::isw::{isw_batch, isw_scan, IswQuery};
use igl_core::planar::{
    dual_description, exterior, extract_patches, families_for, patch_arcs, voronoi, whole_piece_sums,
    isw_star_cycles, ArcSubtreeMap, CycleSegmentTree, DualCycle, PlaneGraph, StarCycleQuery, SubPath,
};
use igl_core::poly::{batched_rational_sum_eval, DistanceKernel, RationalFn};
use igl_core::range_tree::{Interval, PointSet, QueryBox, RangeTree};
use igl_core::treewidth::{assignment_index, balanced_separation, projected_point, separation_box};
use igl_core::{Rational, Scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Trial = Result<usize, String>;

pub fn ratio(r: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    Rational::from_ratio(r.gen_range(0..=max_num), r.gen_range(1..=max_den))
}

pub fn positive(r: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    Rational::from_ratio(r.gen_range(1..=max_num), r.gen_range(1..=max_den))
}

pub fn kernel(r: &mut ChaCha8Rng) -> DistanceKernel {
    DistanceKernel::ALL[r.gen_range(0..DistanceKernel::ALL.len())]
}

fn bound(r: &mut ChaCha8Rng) -> Bound<Rational> {
    match r.gen_range(0..5) {
        0 => Bound::Unbounded,
        1 | 2 => Bound::Included(Rational::from_i64(r.gen_range(-1..10))),
        _ => Bound::Excluded(Rational::from_i64(r.gen_range(-1..10))),
    }
}

pub fn random_box(r: &mut ChaCha8Rng, d: usize) -> QueryBox<Rational> {
    QueryBox { dims: (0..d).map(|_| Interval { lo: bound(r), hi: bound(r) }).collect() }
}

/// Small integer coordinates so that ties between points are common.
pub fn random_points(r: &mut ChaCha8Rng, n: usize, d: usize) -> PointSet<Rational> {
    let mut ps = PointSet::new(d);
    for i in 0..n {
        let c = (0..d).map(|_| Rational::from_i64(r.gen_range(0..9))).collect();
        ps.push(c, i).unwrap();
    }
    ps
}

/// Returned canonical sets are pairwise disjoint and their union is `P ∩ R`.
pub fn range_tree_trial(seed: u64, boxes: usize) -> Trial {
    let mut r = rng(seed);
    let d = r.gen_range(1..=4);
    let n = r.gen_range(1..150);
    let ps = random_points(&mut r, n, d);
    let tree = RangeTree::build(ps.clone()).map_err(|e| e.to_string())?;
    for _ in 0..boxes {
        let q = random_box(&mut r, d);
        let mut seen = vec![0u32; n];
        for id in tree.query(&q).map_err(|e| e.to_string())? {
            for &p in tree.members(id) {
                seen[p as usize] += 1;
            }
        }
        for i in 0..n {
            let want = u32::from(q.contains(ps.point(i)));
            if seen[i] != want {
                return Err(format!("seed {seed}: point {i} covered {} times, expected {want}", seen[i]));
            }
        }
    }
    Ok(boxes)
}

pub fn isw_batch_trial(seed: u64) -> Trial {
    let mut r = rng(seed);
    let d = r.gen_range(1..=4);
    let n = r.gen_range(0..90);
    let ps = random_points(&mut r, n, d);
    let omega: Vec<Rational> = (0..n).map(|_| positive(&mut r, 30, 6)).collect();
    let k = kernel(&mut r);
    let queries: Vec<IswQuery<Rational>> =
        (0..r.gen_range(1..25)).map(|_| IswQuery { region: random_box(&mut r, d), shift: ratio(&mut r, 20, 4) }).collect();
    let want = isw_scan(&ps, &omega, &queries, k);
    let got = isw_batch(ps, &omega, &queries, k).map_err(|e| e.to_string())?;
    if got != want {
        return Err(format!("seed {seed}: isw_batch differs from the linear scan"));
    }
    Ok(queries.len())
}

pub fn batched_sum_trial(seed: u64) -> Trial {
    let mut r = rng(seed);
    let m = if r.gen_bool(0.2) { r.gen_range(64..160) } else { r.gen_range(0..64) };
    let k = kernel(&mut r);
    let functions: Vec<RationalFn<Rational>> = (0..m).map(|_| k.shifted(&positive(&mut r, 40, 5))).collect();
    let np = if m >= 64 { r.gen_range(64..100) } else { r.gen_range(1..40) };
    let points: Vec<Rational> = (0..np).map(|_| ratio(&mut r, 60, 7)).collect();
    let got = batched_rational_sum_eval(&functions, &points).map_err(|e| e.to_string())?;
    for (x, g) in points.iter().zip(&got) {
        let mut want = Rational::zero();
        for f in &functions {
            want += f.eval(x).map_err(|e| e.to_string())?;
        }
        if *g != want {
            return Err(format!("seed {seed}: value at {x} is {g}, direct sum {want}"));
        }
    }
    Ok(points.len())
}

pub fn whole_piece_trial(seed: u64) -> Trial {
    let mut r = rng(seed);
    let omega: Vec<Rational> = (0..r.gen_range(1..120)).map(|_| ratio(&mut r, 50, 4)).collect();
    let shifts: Vec<Rational> = (0..r.gen_range(0..40)).map(|_| positive(&mut r, 50, 4)).collect();
    let k = kernel(&mut r);
    let got = whole_piece_sums(&omega, &shifts, k).map_err(|e| e.to_string())?;
    if got.len() != shifts.len() {
        return Err(format!("seed {seed}: {} values for {} shifts", got.len(), shifts.len()));
    }
    for (d, g) in shifts.iter().zip(&got) {
        let want = omega.iter().fold(Rational::zero(), |acc, w| acc + k.apply(&(d.clone() + w)));
        if *g != want {
            return Err(format!("seed {seed}: shift {d}"));
        }
    }
    Ok(shifts.len())
}

/// A weighted triangulation with a few sites, their distance rows and a
/// random additive weight per site.
pub struct Scene {
    pub pg: PlaneGraph<Rational>,
    pub sites: Vec<usize>,
    pub rows: Vec<Vec<Rational>>,
    pub delta: Vec<Rational>,
}

pub fn scene(r: &mut ChaCha8Rng, n_lo: usize, n_hi: usize, max_sites: usize) -> Scene {
    let n = r.gen_range(n_lo..n_hi);
    let pg = random_triangulation(n, WeightSpec::Integer { lo: 1, hi: 9 }, 2 * n, r.gen()).unwrap();
    let mut sites: Vec<usize> = Vec::new();
    let want = r.gen_range(1..=max_sites.min(n));
    while sites.len() < want {
        let v = r.gen_range(0..n);
        if !sites.contains(&v) {
            sites.push(v);
        }
    }
    let rows = sites
        .iter()
        .map(|&s| dijkstra(pg.graph(), s).dist.into_iter().map(|d| d.finite().unwrap().clone()).collect())
        .collect();
    let delta = sites.iter().map(|_| Rational::from_i64(r.gen_range(0..12))).collect();
    Scene { pg, sites, rows, delta }
}

fn direct_sum(vs: impl IntoIterator<Item = usize>, omega: &[Rational], mask: Option<&[bool]>, shift: &Rational, k: DistanceKernel) -> Rational {
    let mut acc = Rational::zero();
    for v in vs {
        if mask.map_or(true, |m| m[v]) {
            acc += k.apply(&(shift.clone() + &omega[v]));
        }
    }
    acc
}

fn random_mask(r: &mut ChaCha8Rng, n: usize) -> Option<Vec<bool>> {
    r.gen_bool(0.3).then(|| (0..n).map(|_| r.gen_bool(0.7)).collect())
}

/// Random subpaths of Voronoi boundary cycles against the arcs × U double
/// loop; whole cycles also against the flood-filled exterior.
pub fn cycle_partsum_trial(seed: u64) -> Trial {
    let mut r = rng(seed);
    let sc = scene(&mut r, 10, 70, 5);
    let vd = voronoi(&sc.pg, &sc.sites, &sc.delta).map_err(|e| e.to_string())?;
    let n = sc.pg.n();
    let omega: Vec<Rational> = (0..n).map(|_| positive(&mut r, 30, 5)).collect();
    let mask = random_mask(&mut r, n);
    let k = kernel(&mut r);
    let mut checked = 0;
    for (i, &s) in sc.sites.iter().enumerate() {
        if vd.is_empty(i) {
            continue;
        }
        let map = ArcSubtreeMap::build(&sc.pg, s).map_err(|e| e.to_string())?;
        for gamma in dual_description(&sc.pg, &vd, i).map_err(|e| e.to_string())? {
            let tree = CycleSegmentTree::build(&sc.pg, &map, &gamma.arcs, &omega, mask.as_deref());
            let m = gamma.arcs.len();
            let mut queries: Vec<(usize, usize, Rational)> = (0..8)
                .map(|_| (r.gen_range(0..m), r.gen_range(1..=m), positive(&mut r, 20, 3)))
                .collect();
            queries.push((r.gen_range(0..m), m, positive(&mut r, 20, 3)));
            let (vals, _) = tree.partsum(&queries, k).map_err(|e| e.to_string())?;
            for ((start, len, d), v) in queries.iter().zip(&vals) {
                let members = (0..*len).flat_map(|j| map.members(&sc.pg, gamma.arcs[(start + j) % m]).iter().copied());
                let want = direct_sum(members, &omega, mask.as_deref(), d, k);
                if *v != want {
                    return Err(format!("seed {seed}: subpath ({start}, {len}) of a cycle of length {m}"));
                }
                if *len == m {
                    let ext = exterior(&sc.pg, &gamma).map_err(|e| e.to_string())?;
                    if direct_sum(ext, &omega, mask.as_deref(), d, k) != want {
                        return Err(format!("seed {seed}: whole cycle differs from its exterior"));
                    }
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Voronoi-derived query cycles built from bisector patches, against the
/// flood-filled exterior of each cycle.
pub fn star_cycles_trial(seed: u64) -> Trial {
    let mut r = rng(seed);
    let sc = scene(&mut r, 12, 60, 6);
    let n = sc.pg.n();
    let omega: Vec<Rational> = (0..n).map(|_| positive(&mut r, 30, 5)).collect();
    let mask = random_mask(&mut r, n);
    let k = kernel(&mut r);
    let s = r.gen_range(0..sc.sites.len());
    let map = ArcSubtreeMap::build(&sc.pg, sc.sites[s]).map_err(|e| e.to_string())?;
    let fams = families_for(s, &sc.sites, &sc.rows);
    let mut keys: Vec<(usize, usize)> = Vec::new();
    let mut queries: Vec<StarCycleQuery<Rational>> = Vec::new();
    let mut cycles: Vec<DualCycle> = Vec::new();
    for _ in 0..4 {
        let delta: Vec<Rational> = sc.sites.iter().map(|_| Rational::from_i64(r.gen_range(0..12))).collect();
        let vd = voronoi(&sc.pg, &sc.sites, &delta).map_err(|e| e.to_string())?;
        if vd.is_empty(s) {
            continue;
        }
        let shift = positive(&mut r, 20, 3);
        for gamma in dual_description(&sc.pg, &vd, s).map_err(|e| e.to_string())? {
            let patches = extract_patches(&sc.pg, &vd, s, &gamma, &fams).map_err(|e| e.to_string())?;
            let mut parts = Vec::new();
            for p in patches {
                let key = (p.t, p.threshold);
                let id = keys.iter().position(|&k| k == key).unwrap_or_else(|| {
                    keys.push(key);
                    keys.len() - 1
                });
                parts.push(SubPath { cycle: id, start: p.start, len: p.len });
            }
            queries.push(StarCycleQuery { parts, shift: shift.clone() });
            cycles.push(gamma);
        }
    }
    let mut bases = Vec::with_capacity(keys.len());
    for &(t, j) in &keys {
        let fam = fams[t].as_ref().ok_or("patch names the site's own family")?;
        bases.push(fam.bisector(&sc.pg, j).map_err(|e| e.to_string())?);
    }
    let base_refs: Vec<&DualCycle> = bases.iter().map(|b| &b.cycle).collect();
    let (vals, _) = isw_star_cycles(&sc.pg, &map, &omega, mask.as_deref(), &base_refs, &queries, k, true)
        .map_err(|e| e.to_string())?;
    for ((q, gamma), v) in queries.iter().zip(&cycles).zip(&vals) {
        let ext = exterior(&sc.pg, gamma).map_err(|e| e.to_string())?;
        if *v != direct_sum(ext, &omega, mask.as_deref(), &q.shift, k) {
            return Err(format!("seed {seed}: query cycle of length {} differs from its exterior", gamma.arcs.len()));
        }
    }
    Ok(queries.len())
}

/// Cells match the per-site argmin with the index tie rule, are star-shaped
/// in the site's shortest-path tree, and equal the piece minus the disjoint
/// exteriors of their dual description.
pub fn voronoi_trial(seed: u64) -> Trial {
    let mut r = rng(seed);
    let sc = scene(&mut r, 8, 80, 7);
    let vd = voronoi(&sc.pg, &sc.sites, &sc.delta).map_err(|e| e.to_string())?;
    let n = sc.pg.n();
    for v in 0..n {
        let mut best = 0;
        for i in 1..sc.sites.len() {
            if sc.delta[i].clone() + &sc.rows[i][v] < sc.delta[best].clone() + &sc.rows[best][v] {
                best = i;
            }
        }
        if vd.cell[v] != best {
            return Err(format!("seed {seed}: vertex {v} in cell {} instead of {best}", vd.cell[v]));
        }
    }
    for (i, &s) in sc.sites.iter().enumerate() {
        let tree = dijkstra(sc.pg.graph(), s);
        for v in vd.members(i) {
            if let Some((p, _)) = tree.parent[v] {
                if vd.cell[p] != i {
                    return Err(format!("seed {seed}: cell {i} not star-shaped at {v}"));
                }
            }
        }
        if vd.is_empty(i) {
            continue;
        }
        let mut covered = vec![0usize; n];
        for gamma in dual_description(&sc.pg, &vd, i).map_err(|e| e.to_string())? {
            gamma.check(&sc.pg).map_err(|e| e.to_string())?;
            for v in exterior(&sc.pg, &gamma).map_err(|e| e.to_string())? {
                covered[v] += 1;
            }
        }
        for v in 0..n {
            if covered[v] > 1 || (covered[v] == 0) != (vd.cell[v] == i) {
                return Err(format!("seed {seed}: reconstruction of cell {i} fails at {v}"));
            }
        }
    }
    Ok(n)
}

/// Patches of every boundary cycle concatenate to the cycle itself.
pub fn patch_trial(seed: u64) -> Trial {
    let mut r = rng(seed);
    let sc = scene(&mut r, 8, 60, 6);
    let vd = voronoi(&sc.pg, &sc.sites, &sc.delta).map_err(|e| e.to_string())?;
    let mut cycles = 0;
    for s in 0..sc.sites.len() {
        let fams = families_for(s, &sc.sites, &sc.rows);
        for gamma in dual_description(&sc.pg, &vd, s).map_err(|e| e.to_string())? {
            let mut arcs = Vec::new();
            for p in extract_patches(&sc.pg, &vd, s, &gamma, &fams).map_err(|e| e.to_string())? {
                arcs.extend(patch_arcs(&sc.pg, &p, &fams).map_err(|e| e.to_string())?);
            }
            let Some(shift) = gamma.arcs.iter().position(|&a| Some(&a) == arcs.first()) else {
                return Err(format!("seed {seed}: patches start off the cycle"));
            };
            let mut rotated = gamma.arcs.clone();
            rotated.rotate_left(shift);
            if arcs != rotated {
                return Err(format!("seed {seed}: patches of site {s} do not concatenate to its cycle"));
            }
            cycles += 1;
        }
    }
    Ok(cycles)
}

/// `A(b,i)` from the all-pairs table (smallest index among the separator
/// vertices on a shortest path) partitions `A` and agrees with box
/// membership of the projected points.
pub fn separation_trial(seed: u64) -> Trial {
    let mut r = rng(seed);
    let k = r.gen_range(1..=3);
    let n = r.gen_range(10..45);
    let (g, td) = ktree(n, k, WeightSpec::Integer { lo: 1, hi: 6 }, 0.2, seed).map_err(|e| e.to_string())?;
    let sep = balanced_separation(&td, &g).map_err(|e| e.to_string())?.separation;
    sep.validate(&g).map_err(|e| e.to_string())?;
    let apsp = g.all_pairs();
    let far = g.edges().fold(Rational::one(), |acc, (_, _, w)| acc + w);
    let len = |u: usize, v: usize| apsp[u][v].finite().cloned().unwrap_or_else(|| far.clone());
    let mut checked = 0;
    for &a in &sep.a {
        for &b in &sep.b {
            let Some(dab) = apsp[a][b].finite() else { continue };
            let through: Vec<Option<Rational>> = sep
                .s
                .iter()
                .map(|&s| Some(apsp[a][s].finite()?.clone() + apsp[s][b].finite()?))
                .collect();
            let owner = through.iter().position(|t| t.as_ref() == Some(dab));
            let Some(owner) = owner else {
                return Err(format!("seed {seed}: no shortest {a}-{b} path through S"));
            };
            let ad: Vec<Rational> = sep.s.iter().map(|&s| len(a, s)).collect();
            let bd: Vec<Rational> = sep.s.iter().map(|&s| len(s, b)).collect();
            if assignment_index(&ad, &bd) != owner {
                return Err(format!("seed {seed}: A(b,i) assignment of ({a},{b})"));
            }
            for i in 0..sep.s.len() {
                let (p, _) = projected_point(&ad, i);
                if separation_box(&bd, i).contains(&p) != (i == owner) {
                    return Err(format!("seed {seed}: box membership of ({a},{b}) at {i}"));
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn compensated(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = sum + x;
        c += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + c
}

/// Float batched evaluation against Horner on each shifted kernel, summed
/// with compensation. Returns the largest relative error.
pub fn float_numerics_trial(seed: u64) -> Result<f64, String> {
    let mut r = rng(seed);
    let m = r.gen_range(1..=4096);
    let k = kernel(&mut r);
    let weights: Vec<f64> = (0..m).map(|_| r.gen_range(0.0..=1e6)).collect();
    let points: Vec<f64> = (0..r.gen_range(1..=256)).map(|_| r.gen_range(0.0..=1e6)).collect();
    let got = f64::kernel_sum_eval(k, &weights, &points).map_err(|e| e.to_string())?;
    let fns: Vec<RationalFn<f64>> = weights.iter().map(|w| k.shifted(w)).collect();
    let mut worst = 0.0f64;
    for (x, g) in points.iter().zip(&got) {
        let want = compensated(fns.iter().map(|f| f.eval(x).unwrap()));
        worst = worst.max(((g - want) / want).abs());
    }
    Ok(worst)
}

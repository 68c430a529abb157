mod common;

use igl_core::generate::{grid, random_triangulation, rng, WeightSpec};
use igl_core::graph::dijkstra;
use igl_core::planar::{
    dual_description, exterior, extract_patches, families_for, patch_arcs, r_division, voronoi, BisectorFamily,
    PlaneGraph, VoronoiDiagram,
};
use igl_core::{Rational, Scalar};
use rand::Rng;

fn rows(pg: &PlaneGraph<Rational>, sites: &[usize]) -> Vec<Vec<Rational>> {
    sites
        .iter()
        .map(|&s| dijkstra(pg.graph(), s).dist.into_iter().map(|d| d.finite().unwrap().clone()).collect())
        .collect()
}

/// Pieces of a division of a weighted triangulation, with their boundary
/// vertices as sites and random additive weights.
fn cases(count: u64) -> Vec<(PlaneGraph<Rational>, Vec<usize>, Vec<Rational>)> {
    let mut out = Vec::new();
    for seed in 0..count {
        let host = random_triangulation(150, WeightSpec::Integer { lo: 1, hi: 9 }, 200, seed).unwrap();
        let div = r_division(&host, 40).unwrap();
        let mut r = rng(seed);
        for p in div.pieces.iter().filter(|p| p.boundary.len() >= 2).take(3) {
            let delta = p.boundary.iter().map(|_| Rational::from_i64(r.gen_range(0..12))).collect();
            out.push((p.plane.clone(), p.boundary.clone(), delta));
        }
    }
    out
}

fn oracle_cell(vd_rows: &[Vec<Rational>], delta: &[Rational], v: usize) -> usize {
    let mut best = 0;
    for i in 1..delta.len() {
        if delta[i].clone() + &vd_rows[i][v] < delta[best].clone() + &vd_rows[best][v] {
            best = i;
        }
    }
    best
}

fn check_diagram(pg: &PlaneGraph<Rational>, vd: &VoronoiDiagram<Rational>, d: &[Vec<Rational>]) {
    for v in 0..pg.n() {
        assert_eq!(vd.cell[v], oracle_cell(d, &vd.delta, v));
    }
    for (i, &s) in vd.sites.iter().enumerate() {
        let tree = dijkstra(pg.graph(), s);
        for v in vd.members(i) {
            if let Some((p, _)) = tree.parent[v] {
                assert_eq!(vd.cell[p], i, "cell {i} not star-shaped at {v}");
            }
        }
        if vd.is_empty(i) {
            continue;
        }
        let mut covered = vec![0usize; pg.n()];
        for gamma in dual_description(pg, vd, i).unwrap() {
            for v in exterior(pg, &gamma).unwrap() {
                covered[v] += 1;
            }
        }
        for v in 0..pg.n() {
            assert!(covered[v] <= 1);
            assert_eq!(covered[v] == 0, vd.cell[v] == i);
        }
    }
}

#[test]
fn cells_partition_and_reconstruct() {
    for (pg, sites, delta) in cases(8) {
        let d = rows(&pg, &sites);
        let vd = voronoi(&pg, &sites, &delta).unwrap();
        check_diagram(&pg, &vd, &d);
    }
}

#[test]
fn zero_weights_on_grid() {
    let pg = grid(6, 5, WeightSpec::Unit, 0).unwrap();
    let sites = vec![0, 5, 14, 29];
    let delta = vec![Rational::from_i64(0); 4];
    let vd = voronoi(&pg, &sites, &delta).unwrap();
    check_diagram(&pg, &vd, &rows(&pg, &sites));
}

#[test]
fn patches_concatenate_to_cycles() {
    for (pg, sites, delta) in cases(8) {
        let d = rows(&pg, &sites);
        let vd = voronoi(&pg, &sites, &delta).unwrap();
        for s in 0..sites.len() {
            let fams = families_for(s, &sites, &d);
            for gamma in dual_description(&pg, &vd, s).unwrap() {
                let patches = extract_patches(&pg, &vd, s, &gamma, &fams).unwrap();
                let mut arcs = Vec::new();
                for p in &patches {
                    arcs.extend(patch_arcs(&pg, p, &fams).unwrap());
                }
                assert_eq!(arcs.len(), gamma.arcs.len());
                let shift = gamma.arcs.iter().position(|&a| a == arcs[0]).unwrap();
                let mut rotated = gamma.arcs.clone();
                rotated.rotate_left(shift);
                assert_eq!(arcs, rotated);
            }
        }
    }
}

#[test]
fn bisector_families_are_nested() {
    for (pg, sites, _) in cases(4) {
        let d = rows(&pg, &sites);
        for t in 1..sites.len().min(4) {
            let fam = BisectorFamily::new(0, t, sites[0], &d[0], &d[t]);
            let all = fam.all(&pg).unwrap();
            for j in 1..fam.len().saturating_sub(1) {
                let (outer, inner) = (fam.cell_s(j), fam.cell_s(j + 1));
                assert!(inner.iter().zip(&outer).all(|(i, o)| !i || *o));
            }
            for b in all {
                let ext = exterior(&pg, &b.cycle).unwrap();
                let cell = fam.cell_s(b.threshold);
                assert!(ext.iter().all(|&v| !cell[v]));
                assert_eq!(ext.len() + cell.iter().filter(|&&x| x).count(), pg.n());
            }
        }
    }
}

#[test]
fn random_diagrams_and_patches() {
    for seed in 0..60 {
        common::voronoi_trial(seed).unwrap();
        common::patch_trial(seed).unwrap();
    }
}

mod common;

use igl_core::generate::{grid, WeightSpec};
use igl_core::graph::WeightedGraph;
use igl_core::planar::{whole_piece_sums, ArcSubtreeMap, PlaneGraph};
use igl_core::{DistanceKernel, Rational, Scalar};

fn path(n: usize) -> PlaneGraph<Rational> {
    let g = WeightedGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1, Rational::one()))).unwrap();
    let rot = (0..n)
        .map(|v| {
            let mut r = Vec::new();
            if v > 0 {
                r.push(v - 1);
            }
            if v + 1 < n {
                r.push(v);
            }
            r
        })
        .collect();
    PlaneGraph::new(g, rot).unwrap()
}

fn star(leaves: usize) -> PlaneGraph<Rational> {
    let g = WeightedGraph::from_edges(leaves + 1, (0..leaves).map(|i| (0, i + 1, Rational::one()))).unwrap();
    let mut rot = vec![(0..leaves).collect::<Vec<_>>()];
    rot.extend((0..leaves).map(|e| vec![e]));
    PlaneGraph::new(g, rot).unwrap()
}

#[test]
fn path_subtrees() {
    let pg = path(5);
    let map = ArcSubtreeMap::build(&pg, 0).unwrap();
    assert_eq!(map.order, vec![0, 1, 2, 3, 4]);
    let a = pg.arc_from(1, 1);
    assert_eq!(map.members(&pg, a), &[2, 3, 4]);
    assert!(map.members(&pg, pg.arc_from(1, 2)).is_empty());
    let map = ArcSubtreeMap::build(&pg, 2).unwrap();
    assert_eq!(map.members(&pg, pg.arc_from(2, 2)), &[3, 4]);
    assert_eq!(map.members(&pg, pg.arc_from(1, 2)), &[1, 0]);
    assert!(map.is_antichain(&pg, &[pg.arc_from(2, 2), pg.arc_from(1, 2)]));
}

#[test]
fn star_subtrees() {
    let pg = star(4);
    let map = ArcSubtreeMap::build(&pg, 0).unwrap();
    for e in 0..4 {
        assert_eq!(map.members(&pg, pg.arc_from(e, 0)), &[e + 1]);
    }
    let map = ArcSubtreeMap::build(&pg, 3).unwrap();
    let hub = pg.arc_from(2, 3);
    let mut got = map.members(&pg, hub).to_vec();
    got.sort();
    assert_eq!(got, vec![0, 1, 2, 4]);
    assert!(!map.is_antichain(&pg, &[hub, pg.arc_from(0, 0)]));
    assert!(ArcSubtreeMap::build(&pg, 9).is_err());
}

#[test]
fn subtrees_cover_reachable_vertices() {
    let pg = grid(5, 5, WeightSpec::Integer { lo: 1, hi: 4 }, 3).unwrap();
    let map = ArcSubtreeMap::build(&pg, 12).unwrap();
    assert_eq!(map.order.len(), 25);
    assert!((0..25).all(|v| map.reaches(v)));
    let out: Vec<usize> = pg.rotation(12).iter().map(|&e| pg.arc_from(e, 12)).collect();
    let total: usize = out.iter().map(|&a| map.members(&pg, a).len()).sum();
    assert_eq!(total, 24);
    assert!(map.is_antichain(&pg, &out));
}

#[test]
fn whole_piece_examples() {
    let omega = [Rational::from_i64(0), Rational::from_i64(1), Rational::from_i64(3)];
    let shifts = [Rational::from_i64(1), Rational::from_ratio(1, 2)];
    let got = whole_piece_sums(&omega, &shifts, DistanceKernel::Inverse).unwrap();
    let want = [
        Rational::from_ratio(1, 1) + Rational::from_ratio(1, 2) + Rational::from_ratio(1, 4),
        Rational::from_ratio(2, 1) + Rational::from_ratio(2, 3) + Rational::from_ratio(2, 7),
    ];
    assert_eq!(got, want);
    assert!(whole_piece_sums(&omega, &[], DistanceKernel::Inverse).unwrap().is_empty());
}

#[test]
fn random_whole_piece_sums() {
    for seed in 0..60 {
        common::whole_piece_trial(seed).unwrap();
    }
}

#[test]
fn random_cycle_partial_sums() {
    for seed in 0..80 {
        common::cycle_partsum_trial(seed).unwrap();
    }
}

#[test]
fn random_star_cycle_queries() {
    for seed in 0..80 {
        common::star_cycles_trial(seed).unwrap();
    }
}

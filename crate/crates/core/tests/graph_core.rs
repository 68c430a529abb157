use igl_core::generate::{random_connected, random_gnp, WeightSpec};
use igl_core::graph::io::{parse_edge_list, parse_graph, write_edge_list};
use igl_core::graph::{dijkstra, dijkstra_multi, diameter2_identity, igl_brute, igl_pairs, GraphBuilder, WeightedGraph};
use igl_core::{Dist, IglError, Rational, Scalar};
use proptest::prelude::*;

fn unit(n: usize, edges: &[(usize, usize)]) -> WeightedGraph<Rational> {
    WeightedGraph::from_edges(n, edges.iter().map(|&(u, v)| (u, v, Rational::one()))).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

#[test]
fn dijkstra_on_weighted_path_with_shortcut() {
    let g = WeightedGraph::from_edges(4, [(0, 1, q(1, 2)), (1, 2, q(1, 3)), (2, 3, q(1, 1)), (0, 3, q(3, 2))]).unwrap();
    let sp = dijkstra(&g, 0);
    let d: Vec<Rational> = (0..4).map(|v| sp.finite(v).unwrap().clone()).collect();
    assert_eq!(d, vec![q(0, 1), q(1, 2), q(5, 6), q(3, 2)]);
    assert_eq!(sp.parent[3].map(|p| p.0), Some(0));
    assert_eq!(sp.order(), vec![0, 1, 2, 3]);
}

#[test]
fn unreachable_vertices_are_infinite() {
    let g = unit(3, &[(0, 1)]);
    let sp = dijkstra(&g, 0);
    assert_eq!(sp.dist[2], Dist::Infinite);
    assert_eq!(sp.order(), vec![0, 1]);
}

#[test]
fn multi_source_claims_nearest_site() {
    let g = unit(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
    let sp = dijkstra_multi(&g, &[(0, q(0, 1)), (4, q(1, 1))]);
    let sites: Vec<Option<usize>> = sp.site.clone();
    assert_eq!(sites, vec![Some(0), Some(0), Some(0), Some(1), Some(1)]);
}

#[test]
fn brute_force_examples() {
    assert_eq!(igl_brute(&unit(4, &[(0, 1), (1, 2), (2, 3)])), q(13, 3));
    assert_eq!(igl_brute(&unit(2, &[])), Rational::zero());
    assert_eq!(igl_brute(&unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])), q(5, 1));
    assert_eq!(igl_brute(&unit(1, &[])), Rational::zero());
}

#[test]
fn pair_sums_split_the_total() {
    let g = random_connected(12, 20, WeightSpec::Rational { max_num: 9, max_den: 4 }, 3);
    let a: Vec<usize> = (0..5).collect();
    let b: Vec<usize> = (5..12).collect();
    let inside = |s: &[usize]| {
        let mut t = Rational::zero();
        for (i, &u) in s.iter().enumerate() {
            for &v in &s[i + 1..] {
                t += igl_pairs(&g, &[u], &[v]).unwrap();
            }
        }
        t
    };
    let across = igl_pairs(&g, &a, &b).unwrap();
    assert_eq!(across.clone() + inside(&a) + inside(&b), igl_brute(&g));
    assert_eq!(igl_pairs(&g, &b, &a).unwrap(), across);
    assert!(matches!(igl_pairs(&g, &[0, 1], &[1]), Err(IglError::InvalidInput(_))));
}

fn petersen() -> WeightedGraph<Rational> {
    let mut e = Vec::new();
    for i in 0..5 {
        e.extend([(i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)]);
    }
    unit(10, &e)
}

#[test]
fn diameter_two_identity() {
    let c5 = unit(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
    let k4 = unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let star = unit(4, &[(0, 1), (0, 2), (0, 3)]);
    for (g, want) in [(c5, q(15, 2)), (k4, q(6, 1)), (star, q(9, 2)), (petersen(), q(30, 1))] {
        assert_eq!(diameter2_identity(&g).unwrap(), want);
        assert_eq!(igl_brute(&g), want);
    }
    let p5 = unit(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
    assert!(diameter2_identity(&p5).is_err());
    let weighted = WeightedGraph::from_edges(2, [(0, 1, q(2, 1))]).unwrap();
    assert!(diameter2_identity(&weighted).is_err());
}

#[test]
fn random_diameter_two_graphs() {
    let mut seen = 0;
    for seed in 0..60 {
        let g = random_gnp(12, 0.6, WeightSpec::Unit, seed);
        if let Ok(v) = diameter2_identity(&g) {
            assert_eq!(v, igl_brute(&g), "seed {seed}");
            seen += 1;
        }
    }
    assert!(seen > 10);
}

#[test]
fn parallel_edges_keep_the_shortest() {
    let mut b = GraphBuilder::new(3);
    let e = b.add_edge(0, 1, q(5, 1)).unwrap();
    assert_eq!(b.add_edge(1, 0, q(2, 1)).unwrap(), e);
    assert_eq!(b.add_edge(0, 1, q(7, 1)).unwrap(), e);
    b.add_edge(1, 2, q(1, 1)).unwrap();
    let g = b.build();
    assert_eq!(g.m(), 2);
    assert_eq!(*g.length(e), q(2, 1));
    assert!(GraphBuilder::<Rational>::new(2).add_edge(0, 0, q(1, 1)).is_err());
    assert!(GraphBuilder::<Rational>::new(2).add_edge(0, 1, q(0, 1)).is_err());
    assert!(GraphBuilder::<Rational>::new(2).add_edge(0, 2, q(1, 1)).is_err());
}

#[test]
fn parse_errors_name_the_line() {
    assert!(matches!(parse_graph("3 2\n0 1 1\n"), Err(IglError::Parse { .. })));
    assert!(matches!(parse_graph("2 1\n0 1 x\n"), Err(IglError::Parse { .. })));
    assert!(parse_graph("").is_err());
    let e = parse_graph("2 1\n# comment\n0 1 -1\n");
    assert!(e.is_err());
}

#[test]
fn float_brute_agrees() {
    let g = random_connected(30, 60, WeightSpec::Rational { max_num: 20, max_den: 7 }, 1);
    let exact = igl_brute(&g).to_f64();
    let got = igl_brute(&g.map_weights(|w| w.to_f64()));
    assert!((got - exact).abs() <= 1e-12 * exact);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn edge_list_round_trip(seed in 0u64..10_000, n in 2usize..25) {
        let g = random_connected(n, 2 * n, WeightSpec::Rational { max_num: 50, max_den: 9 }, seed);
        let again = parse_edge_list(&write_edge_list(&g)).unwrap();
        prop_assert_eq!(again.n(), g.n());
        let a: Vec<_> = g.edges().map(|(u, v, w)| (u, v, w.clone())).collect();
        let b: Vec<_> = again.edges().map(|(u, v, w)| (u, v, w.clone())).collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn distances_are_symmetric(seed in 0u64..10_000) {
        let g = random_connected(15, 30, WeightSpec::Integer { lo: 1, hi: 9 }, seed);
        let apsp = g.all_pairs();
        for u in 0..15 {
            for v in 0..15 {
                prop_assert_eq!(&apsp[u][v], &apsp[v][u]);
            }
        }
    }
}

mod common;

use igl_core::isw::{isw_batch, IswQuery};
use igl_core::range_tree::{Interval, PointSet, QueryBox};
use igl_core::{DistanceKernel, Rational, Scalar};

fn q(v: i64) -> Rational {
    Rational::from_i64(v)
}

#[test]
fn two_points_on_a_line() {
    let mut ps = PointSet::new(1);
    ps.push(vec![q(0)], 0).unwrap();
    ps.push(vec![q(5)], 1).unwrap();
    let queries = vec![
        IswQuery { region: QueryBox { dims: vec![Interval::closed(q(0), q(5))] }, shift: q(1) },
        IswQuery { region: QueryBox { dims: vec![Interval::open(q(0), q(5))] }, shift: q(1) },
    ];
    let got = isw_batch(ps, &[q(1), q(2)], &queries, DistanceKernel::Inverse).unwrap();
    assert_eq!(got, vec![Rational::from_ratio(5, 6), q(0)]);
}

#[test]
fn float_mode_agrees() {
    let mut ps = PointSet::new(2);
    let mut omega = Vec::new();
    for i in 0..200 {
        ps.push(vec![(i % 17) as f64, (i * 7 % 23) as f64], i).unwrap();
        omega.push(1.0 + (i % 5) as f64);
    }
    let queries: Vec<IswQuery<f64>> = (0..100)
        .map(|j| IswQuery {
            region: QueryBox { dims: vec![Interval::closed((j % 9) as f64, 16.0), Interval::closed(0.0, (j % 20) as f64)] },
            shift: j as f64 / 10.0,
        })
        .collect();
    let want = igl_core::isw::isw_scan(&ps, &omega, &queries, DistanceKernel::Inverse);
    let got = isw_batch(ps, &omega, &queries, DistanceKernel::Inverse).unwrap();
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() <= 1e-12 * w.abs().max(1.0));
    }
}

#[test]
fn random_batches_match_linear_scan() {
    for seed in 0..80 {
        common::isw_batch_trial(seed).unwrap();
    }
}

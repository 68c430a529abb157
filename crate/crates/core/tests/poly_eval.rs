mod common;

use igl_core::generate::rng;
use igl_core::poly::{
    batched_rational_sum_eval, fft_mul, karatsuba, multipoint_eval, multipoint_eval_subproduct, poly_mul, schoolbook,
    sum_inverse_shifted, DistanceKernel, Polynomial, RationalFn,
};
use igl_core::{Rational, Scalar};
use proptest::prelude::*;
use rand::Rng;

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn poly(c: &[i64]) -> Polynomial<Rational> {
    Polynomial::new(c.iter().map(|&v| Rational::from_i64(v)).collect())
}

#[test]
fn small_products() {
    assert_eq!(poly_mul(&poly(&[1, 1]), &poly(&[1, 1])), poly(&[1, 2, 1]));
    assert!(poly_mul(&poly(&[4, 0, 2]), &Polynomial::zero()).is_zero());
}

#[test]
fn sum_of_inverse_shifts() {
    let f = sum_inverse_shifted(&[q(1, 1), q(2, 1)], DistanceKernel::Inverse);
    let (c, d) = (f.num.coeffs()[1].clone(), f.den.coeffs()[2].clone());
    // normalize to a monic denominator before comparing
    let num: Vec<Rational> = f.num.coeffs().iter().map(|x| x.clone() / &d).collect();
    let den: Vec<Rational> = f.den.coeffs().iter().map(|x| x.clone() / &d).collect();
    assert_eq!(num, vec![q(3, 1), q(2, 1)]);
    assert_eq!(den, vec![q(2, 1), q(3, 1), q(1, 1)]);
    assert_eq!(c / d, q(2, 1));
    assert_eq!(multipoint_eval(&f, &[q(0, 1), q(1, 1)]).unwrap(), vec![q(3, 2), q(5, 6)]);

    let empty = sum_inverse_shifted::<Rational>(&[], DistanceKernel::Inverse);
    assert!(empty.num.is_zero());
    assert_eq!(multipoint_eval(&empty, &[q(3, 1), q(0, 1)]).unwrap(), vec![q(0, 1), q(0, 1)]);

    let g = sum_inverse_shifted(&[q(0, 1), q(1, 1), q(3, 1)], DistanceKernel::Inverse);
    assert_eq!(g.eval(&q(1, 1)).unwrap(), q(7, 4));
}

#[test]
fn batched_examples() {
    let fs = vec![DistanceKernel::Inverse.shifted(&q(1, 1)), DistanceKernel::Inverse.shifted(&q(2, 1))];
    assert_eq!(batched_rational_sum_eval(&fs, &[q(0, 1)]).unwrap(), vec![q(3, 2)]);
    let one = vec![DistanceKernel::InverseSquareWeighted.shifted(&q(1, 3))];
    let x = q(5, 2);
    assert_eq!(batched_rational_sum_eval(&one, std::slice::from_ref(&x)).unwrap(), vec![one[0].eval(&x).unwrap()]);
}

#[test]
fn hundred_weights_hundred_points() {
    let mut r = rng(3);
    let w: Vec<Rational> = (0..100).map(|_| common::positive(&mut r, 100, 7)).collect();
    let x: Vec<Rational> = (0..100).map(|_| common::ratio(&mut r, 100, 7)).collect();
    let got = multipoint_eval(&sum_inverse_shifted(&w, DistanceKernel::Inverse), &x).unwrap();
    for (xj, g) in x.iter().zip(&got) {
        let want = w.iter().fold(Rational::zero(), |acc, wi| acc + Rational::one() / (xj.clone() + wi));
        assert_eq!(*g, want);
    }
}

#[test]
fn subproduct_tree_matches_horner() {
    let mut r = rng(8);
    let p = Polynomial::new((0..120).map(|_| Rational::from_i64(r.gen_range(-50..50))).collect());
    let x: Vec<Rational> = (0..80).map(|_| common::ratio(&mut r, 40, 9)).collect();
    let want: Vec<Rational> = x.iter().map(|v| p.eval(v)).collect();
    assert_eq!(multipoint_eval_subproduct(&p, &x), want);
}

#[test]
fn sixty_four_unit_fractions() {
    let mut r = rng(5);
    let fs: Vec<RationalFn<Rational>> =
        (0..64).map(|_| DistanceKernel::Inverse.shifted(&Rational::from_i64(r.gen_range(1..50)))).collect();
    let x: Vec<Rational> = (0..64).map(|_| Rational::from_i64(r.gen_range(0..=100))).collect();
    let got = batched_rational_sum_eval(&fs, &x).unwrap();
    for (xj, g) in x.iter().zip(&got) {
        let want = fs.iter().fold(Rational::zero(), |acc, f| acc + f.eval(xj).unwrap());
        assert_eq!(*g, want);
    }
}

#[test]
fn fft_degree_fifty() {
    let mut r = rng(2);
    let a: Vec<f64> = (0..51).map(|_| r.gen_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..51).map(|_| r.gen_range(-1.0..1.0)).collect();
    let want = schoolbook(&a, &b);
    let scale = want.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    for (g, w) in fft_mul(&a, &b).iter().zip(&want) {
        assert!((g - w).abs() <= 1e-10 * scale, "{g} vs {w}");
    }
}

#[test]
fn random_batched_sums() {
    for seed in 0..60 {
        common::batched_sum_trial(seed).unwrap();
    }
}

#[test]
fn float_batches_are_accurate() {
    for seed in 0..10 {
        let err = common::float_numerics_trial(seed).unwrap();
        assert!(err <= 1e-10, "seed {seed}: {err}");
    }
}

fn int_poly() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-20i64..20, 0..129)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_commutes_and_distributes(a in int_poly(), b in int_poly(), c in int_poly()) {
        let (pa, pb, pc) = (poly(&a), poly(&b), poly(&c));
        prop_assert_eq!(poly_mul(&pa, &pb), poly_mul(&pb, &pa));
        prop_assert_eq!(poly_mul(&pa, &pb.add(&pc)), poly_mul(&pa, &pb).add(&poly_mul(&pa, &pc)));
        let (ra, rb): (Vec<Rational>, Vec<Rational>) =
            (pa.coeffs().to_vec(), pb.coeffs().to_vec());
        prop_assert_eq!(Polynomial::new(karatsuba(&ra, &rb)), Polynomial::new(schoolbook(&ra, &rb)));
    }

    #[test]
    fn merge_order_does_not_change_values(ws in prop::collection::vec(1i64..30, 1..20), x in 0i64..40) {
        let w: Vec<Rational> = ws.iter().map(|&v| Rational::from_i64(v)).collect();
        let x = Rational::from_i64(x);
        let balanced = sum_inverse_shifted(&w, DistanceKernel::Inverse).eval(&x).unwrap();
        let sequential = w.iter().fold(RationalFn::zero(), |acc, wi| acc.add(&DistanceKernel::Inverse.shifted(wi)));
        prop_assert_eq!(balanced, sequential.eval(&x).unwrap());
    }
}

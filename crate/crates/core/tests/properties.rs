use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use proptest::prelude::*;

use riemann_sums::arith::{
    coprime_fraction, iep_mobius_identity_check, iep_odd_identity_check, mobius_sieve, BallFunction, BoxFunction,
    PrimitivePoints, PrimitiveSetKind,
};
use riemann_sums::fourier::{n_of_xi, poisson_check_auto, Gaussian, Lattice};
use riemann_sums::pythagoras::{exact_angle, ppt_from_pair};
use riemann_sums::riemann::{riemann_sum, LinearCombination, PointSource, TestFunction};

fn rational() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=25).prop_map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
}

fn box_function(dim: usize, reach: i64) -> impl Strategy<Value = BoxFunction> {
    (
        prop::collection::vec(-reach..=reach, dim),
        prop::collection::vec(0..=reach, dim),
        rational(),
    )
        .prop_map(move |(lo, ext, w)| {
            let hi = lo.iter().zip(&ext).map(|(a, e)| (a + e).min(reach)).collect();
            BoxFunction::weighted(lo, hi, w).unwrap()
        })
}

fn ball_function(dim: usize, reach: i64) -> impl Strategy<Value = BallFunction> {
    (prop::collection::vec(-reach / 2..=reach / 2, dim), 0..=(reach * reach / 4) as u64, rational())
        .prop_map(|(center, radius_sq, weight)| BallFunction {
            center,
            radius_sq,
            weight,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_triples_are_valid(m in 2i64..3000, n in 1i64..3000) {
        prop_assume!(n < m && (m - n) % 2 == 1 && m.gcd(&n) == 1);
        let t = ppt_from_pair(m, n).unwrap();
        prop_assert!(t.is_valid());
    }

    #[test]
    fn mobius_is_multiplicative(a in 1usize..3000, b in 1usize..3000) {
        prop_assume!(a.gcd(&b) == 1);
        let t = mobius_sieve(a * b).unwrap();
        prop_assert_eq!(t.mu(a * b), t.mu(a) * t.mu(b));
    }

    #[test]
    fn mobius_identity_on_boxes_2d(f in box_function(2, 14)) {
        prop_assert!(iep_mobius_identity_check(&f).unwrap().equal);
        prop_assert!(iep_odd_identity_check(&f).unwrap().equal);
    }

    #[test]
    fn mobius_identity_on_balls_2d(f in ball_function(2, 14)) {
        prop_assert!(iep_mobius_identity_check(&f).unwrap().equal);
        prop_assert!(iep_odd_identity_check(&f).unwrap().equal);
    }

    #[test]
    fn mobius_identity_in_3d(f in box_function(3, 8), g in ball_function(3, 8)) {
        prop_assert!(iep_mobius_identity_check(&f).unwrap().equal);
        prop_assert!(iep_mobius_identity_check(&g).unwrap().equal);
    }

    #[test]
    fn n_of_xi_is_lcm_and_periodic(
        nums in prop::collection::vec(-50i64..50, 1..4),
        dens in prop::collection::vec(1i64..30, 4),
        shift in prop::collection::vec(-5i64..5, 4),
    ) {
        let xi: Vec<Ratio<i64>> = nums.iter().zip(&dens).map(|(&a, &b)| Ratio::new(a, b)).collect();
        let lcm = xi.iter().fold(1i64, |acc, r| acc.lcm(r.denom())) as u64;
        prop_assert_eq!(n_of_xi(&xi), lcm);
        let shifted: Vec<Ratio<i64>> = xi.iter().zip(&shift).map(|(r, &s)| r + s).collect();
        prop_assert_eq!(n_of_xi(&shifted), lcm);
    }

    #[test]
    fn coprime_fraction_matches_pairwise_count(n in 1u64..60) {
        let count = (1..=n).flat_map(|a| (1..=n).map(move |b| (a, b))).filter(|&(a, b)| a.gcd(&b) == 1).count() as u64;
        prop_assert_eq!(coprime_fraction(n).unwrap(), Ratio::new(count, n * n));
    }

    #[test]
    fn enumeration_is_nested(r1 in 0.0f64..12.0, extra in 0.0f64..6.0) {
        let src = PrimitivePoints::new(PrimitiveSetKind::Prim(2)).unwrap();
        let small = src.enumerate(r1).unwrap();
        let big = src.enumerate(r1 + extra).unwrap();
        prop_assert!(small.iter().all(|p| big.contains(p)));
        prop_assert!(small.iter().all(|p| p.point.norm() <= r1));
    }

    #[test]
    fn riemann_sum_is_linear(
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        eps in 0.01f64..0.3,
        lo in prop::collection::vec(-1.0f64..0.0, 2),
    ) {
        let f = TestFunction::box_indicator(lo.clone(), vec![0.0, 0.0]).unwrap();
        let g = TestFunction::ball(vec![1.5, 1.5], 0.7).unwrap();
        let combo = LinearCombination::new(vec![(a, f.clone()), (b, g.clone())]).unwrap();
        let src = PrimitivePoints::new(PrimitiveSetKind::Prim(2)).unwrap();
        let lhs = riemann_sum(&combo, &src, eps).unwrap();
        let rhs = riemann_sum(&f, &src, eps).unwrap() * a + riemann_sum(&g, &src, eps).unwrap() * b;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn gaussian_poisson_holds(t in 0.3f64..3.0, e0 in -1.0f64..1.0, e1 in -1.0f64..1.0) {
        let g = Gaussian::new(2, t).unwrap();
        let r = poisson_check_auto(&g, &Lattice::integer(2).unwrap(), &[e0, e1]).unwrap();
        prop_assert!(r.abs_err < 1e-10);
    }

    #[test]
    fn angles_stay_in_range(a in -10_000i64..10_000, b in -10_000i64..10_000) {
        prop_assume!(a != 0 || b != 0);
        let t = exact_angle(a, b);
        prop_assert!((0.0..std::f64::consts::TAU).contains(&t));
        prop_assert!((t.cos() * (a as f64).hypot(b as f64) - a as f64).abs() < 1e-8);
    }
}

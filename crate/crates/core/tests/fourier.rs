use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use riemann_sums::arith::mobius_sieve;
use riemann_sums::fourier::{
    generalized_poisson_check, model_set, n_of_xi, poisson_check_auto, prim_coefficient, prim_coefficient_limit,
    prim_expansion, prim_poisson_check, qc_spectrum, spectral_sum_check, twisted_density_check, CutProjectScheme,
    Gaussian, Lattice, ModelSet, Window,
};
use riemann_sums::riemann::{estimate_density, halving_schedule, IntegerLattice, TestFunction};
use riemann_sums::Error;

fn random_lattice(rng: &mut ChaCha8Rng, d: usize) -> Lattice {
    loop {
        let m = DMatrix::from_fn(d, d, |_, _| rng.gen_range(-2.0..2.0));
        if let Ok(l) = Lattice::new(m) {
            let sv = l.basis().singular_values();
            if sv.max() / sv.min() < 50.0 {
                return l;
            }
        }
    }
}

#[test]
fn random_dual_pairs_are_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let l = random_lattice(&mut rng, 2);
    let dual = l.dual().unwrap();
    for _ in 0..100 {
        let a: Vec<i64> = (0..2).map(|_| rng.gen_range(-20..=20)).collect();
        let b: Vec<i64> = (0..2).map(|_| rng.gen_range(-20..=20)).collect();
        let (z, eta) = (l.point(&a), dual.point(&b));
        let ip: f64 = z.iter().zip(&eta).map(|(x, y)| x * y).sum();
        assert!((ip - ip.round()).abs() < 1e-9);
    }
}

#[test]
fn dual_involution_and_covolumes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..100 {
        let l = random_lattice(&mut rng, 2 + i % 3);
        let dual = l.dual().unwrap();
        let back = dual.dual().unwrap();
        assert!((back.gram() - l.gram()).abs().max() < 1e-9);
        assert!((l.covolume() * dual.covolume() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn poisson_family() {
    for d in [1, 2] {
        for eta in [vec![0.0; d], {
            let mut e = vec![0.0; d];
            e[0] = 1.0 / 3.0;
            e
        }] {
            for t in [0.25, 1.0, 4.0] {
                let g = Gaussian::new(d, t).unwrap();
                let r = poisson_check_auto(&g, &Lattice::integer(d).unwrap(), &eta).unwrap();
                assert!(r.abs_err < 1e-10, "d = {d}, t = {t}, eta = {eta:?}");
            }
        }
    }
}

#[test]
fn poisson_on_skew_lattice() {
    let l = Lattice::from_columns(&[vec![1.0, 0.2], vec![0.5, 1.3]]).unwrap();
    let g = Gaussian::new(2, 1.5).unwrap();
    let r = poisson_check_auto(&g, &l, &[0.1, -0.25]).unwrap();
    assert!(r.abs_err < 1e-10);
}

#[test]
fn fibonacci_density_by_counting_and_estimation() {
    let s = CutProjectScheme::fibonacci();
    let n = s.points_within(1000.0).unwrap().len() as f64;
    assert!((n / 2000.0 / s.density() - 1.0).abs() < 0.01);
    let f = TestFunction::ball(vec![0.0], 1.0).unwrap();
    let est = estimate_density(&f, &ModelSet::new(s.clone()), &halving_schedule(0.0625, 1e-3).unwrap()).unwrap();
    assert!((est.extrapolated.re / s.density() - 1.0).abs() < 0.01);
}

#[test]
fn finite_model_set_matches_scheme() {
    let s = CutProjectScheme::fibonacci();
    let finite = model_set(&s, 30.0).unwrap();
    assert_eq!(finite.len(), s.points_within(30.0).unwrap().len());
}

#[test]
fn spectrum_origin_is_density() {
    let s = CutProjectScheme::fibonacci();
    let peaks = qc_spectrum(&s, 3.0, 1e-3).unwrap();
    assert_eq!(peaks[0].xi, vec![0.0]);
    assert!((peaks[0].amplitude.re - s.density()).abs() < 1e-14);
    assert!(peaks.windows(2).all(|w| w[0].xi[0].abs() <= w[1].xi[0].abs()));
    assert!(peaks.iter().all(|e| e.amplitude.norm() >= 1e-3 && e.xi[0].abs() <= 3.0));
}

#[test]
fn spectrum_internal_parts_are_unique() {
    let s = CutProjectScheme::fibonacci();
    let dual = s.lattice().dual().unwrap();
    let peaks = qc_spectrum(&s, 2.0, 1e-3).unwrap();
    for e in &peaks {
        let re = dual.point(&e.coeffs);
        assert!((re[0] - e.xi[0]).abs() < 1e-9);
        assert!((re[1] - e.xi_internal[0]).abs() < 1e-9);
        // any other dual vector with the same physical part differs in internal part by far more than 1e-9
        let twins = peaks
            .iter()
            .filter(|o| (o.xi[0] - e.xi[0]).abs() < 1e-9)
            .count();
        assert_eq!(twins, 1);
    }
}

#[test]
fn spectral_sum_reproduces_point_sum() {
    let s = CutProjectScheme::fibonacci();
    let f = TestFunction::bump(vec![0.0], 10.0).unwrap();
    let coarse = spectral_sum_check(&s, &f, &qc_spectrum(&s, 2.0, 1e-2).unwrap()).unwrap();
    let fine = spectral_sum_check(&s, &f, &qc_spectrum(&s, 2.0, 1e-4).unwrap()).unwrap();
    assert!(fine.abs_err < 1e-3);
    assert!(fine.abs_err < coarse.abs_err);
}

#[test]
fn non_box_window_data_is_rejected() {
    assert!(CutProjectScheme::from_json(r#"{"total_dim":2,"physical_dim":1,"basis":[[1,0],[0,1]],"window":[[1,0]]}"#).is_err());
    assert!(Window::new(vec![0.0], vec![]).is_err());
    let f = TestFunction::ball(vec![0.0], 1.0).unwrap();
    let s = CutProjectScheme::fibonacci();
    assert!(matches!(generalized_poisson_check(&s, &f, 4, 5.0), Err(Error::Unsupported(_))));
}

#[test]
fn generalized_poisson_converges() {
    let s = CutProjectScheme::fibonacci();
    let f = TestFunction::bump(vec![0.0], 10.0).unwrap();
    let errs: Vec<f64> = [5.0, 10.0, 20.0, 40.0]
        .iter()
        .map(|&c| generalized_poisson_check(&s, &f, 4, c).unwrap().abs_err)
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(errs[3] < 1e-2, "{errs:?}");
}

#[test]
fn n_of_xi_examples() {
    let r = Ratio::new;
    assert_eq!(n_of_xi(&[r(1, 2), r(1, 3)]), 6);
    assert_eq!(n_of_xi(&[r(0, 1), r(0, 1)]), 1);
    assert_eq!(n_of_xi(&[r(3, 4), r(5, 6)]), 12);
}

#[test]
fn expansion_examples() {
    let e = prim_expansion(2, 10, 0.6).unwrap();
    let origin = &e.entries[0];
    assert_eq!(origin.n_xi, 1);
    assert!((origin.a_limit - 6.0 / (PI * PI)).abs() < 1e-15);
    let half = e.entries.iter().find(|x| x.xi == vec![Ratio::new(1, 2), Ratio::new(0, 1)]).unwrap();
    assert!((half.a_limit + 2.0 / (PI * PI)).abs() < 1e-15);
    assert!(e.entries.iter().all(|x| x.n_xi % 4 != 0 && x.n_xi <= 10));
    assert_eq!(e.mertens, mobius_sieve(10).unwrap().mertens(10));
    let table = mobius_sieve(1000).unwrap();
    assert!((prim_coefficient(&table, 2, 1000, 2) - half.a_limit).abs() < 1e-3);
    assert!(prim_expansion(2, 1000, 0.6).is_err());
}

#[test]
fn truncated_coefficients_converge_monotonically() {
    let table = mobius_sieve(1000).unwrap();
    let dens: Vec<u64> = (1..=40).filter(|&k| table.mu(k as usize) != 0).take(20).collect();
    assert_eq!(dens.len(), 20);
    for d in [2, 3] {
        for &den in &dens {
            let limit = prim_coefficient_limit(d, den).unwrap();
            let gaps: Vec<f64> = [10, 100, 1000]
                .iter()
                .map(|&n| (prim_coefficient(&table, d, n, den) - limit).abs())
                .collect();
            assert!(gaps[0] >= gaps[1] && gaps[1] >= gaps[2], "d = {d}, D = {den}: {gaps:?}");
        }
    }
}

#[test]
fn prim_poisson_convergence() {
    let f = TestFunction::bump(vec![0.0, 0.0], 6.0).unwrap();
    let runs: Vec<_> = [4.0, 8.0, 16.0].iter().map(|&c| prim_poisson_check(2, &f, 8, c).unwrap()).collect();
    assert!(runs.windows(2).all(|w| w[1].abs_err <= w[0].abs_err));
    assert!(runs[2].abs_err < 1e-2 * runs[2].lhs);
    assert_eq!(runs[0].mertens, -2);
}

#[test]
fn prim_poisson_off_centre_has_no_extra_term() {
    // f(0) = 0, so the Mertens correction drops out
    let f = TestFunction::bump(vec![3.0, 4.0], 5.0).unwrap();
    assert_eq!(f.eval(&[0.0, 0.0]), 0.0);
    let errs: Vec<f64> = [4.0, 8.0, 16.0]
        .iter()
        .map(|&c| prim_poisson_check(2, &f, 10, c).unwrap().abs_err)
        .collect();
    assert!(errs.windows(2).all(|w| w[1] <= w[0]), "{errs:?}");
    assert!(errs[2] < 1e-8, "{errs:?}");
}

#[test]
fn twist_by_integer_vector_changes_nothing() {
    let f = TestFunction::ball(vec![0.0, 0.0], 1.0).unwrap();
    let schedule = [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0];
    let zero = twisted_density_check(vec![Ratio::new(0, 1), Ratio::new(0, 1)], &f, &schedule).unwrap();
    let int = twisted_density_check(vec![Ratio::new(3, 1), Ratio::new(-2, 1)], &f, &schedule).unwrap();
    assert_eq!(zero.estimate.extrapolated, int.estimate.extrapolated);
    assert!((zero.a_limit - 6.0 / (PI * PI)).abs() < 1e-15);
}

#[test]
fn twisted_density_half() {
    let f = TestFunction::ball(vec![0.0, 0.0], 1.0).unwrap();
    let r = twisted_density_check(vec![Ratio::new(1, 2), Ratio::new(0, 1)], &f, &halving_schedule(0.0625, 1e-3).unwrap())
        .unwrap();
    assert!((r.estimate.extrapolated.re / r.a_limit - 1.0).abs() < 0.03);
}

#[test]
fn integer_lattice_sources_agree() {
    use riemann_sums::riemann::PointSource;
    let a = Lattice::integer(2).unwrap().enumerate(4.0).unwrap();
    let b = IntegerLattice::new(2).unwrap().enumerate(4.0).unwrap();
    assert_eq!(a, b);
}

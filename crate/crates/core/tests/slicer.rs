use std::f64::consts::PI;

use bvlab::bvcalc::{Bv1d, OpenSet1D};
use bvlab::slicer::{c_n, f_eval_2d, f_eval_2d_mc, f_eval_2d_report, variation_decomposition_2d, Bv2d, Form2D, Region, SliceQuadrature};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// `Γ(m / 2)` for positive integers `m`.
fn gamma_half(m: u32) -> f64 {
    match m {
        1 => PI.sqrt(),
        2 => 1.0,
        _ => (m as f64 / 2.0 - 1.0) * gamma_half(m - 2),
    }
}

fn disk() -> Bv2d {
    Bv2d::new(Form2D::indicator(Region::disk([0.1, -0.05], 0.3).unwrap(), 1.0), Region::centered_square(1.0).unwrap())
}

#[test]
fn sphere_constants_match_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=5u32 {
        let area = 2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n);
        let samples = 200_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..samples {
            let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let f = area * v[0].abs() / r;
            s1 += f;
            s2 += f * f;
        }
        let mean = s1 / samples as f64;
        let se = ((s2 / samples as f64 - mean * mean) / samples as f64).sqrt();
        let c = c_n(n).unwrap();
        assert!((c - mean).abs() <= 5.0 * se + 1e-12, "n = {n}: {c} vs {mean} ± {se}");
    }
    assert!(c_n(0).is_err());
}

#[test]
fn disk_perimeter_and_limit() {
    let u = disk();
    let d = variation_decomposition_2d(&u).unwrap();
    assert!((d.jump - 2.0 * PI * 0.3).abs() < 1e-12 && d.abs == 0.0 && d.cantor == 0.0);
    let e = f_eval_2d(&u, 1.0, 1e4, &SliceQuadrature::default()).unwrap();
    let lim = 4.0 / 2.0 * 2.0 * PI * 0.3;
    assert!((e.value - lim).abs() < 0.01 * lim, "{} vs {lim}", e.value);
}

#[test]
fn step_ridge_matches_monte_carlo_and_limit() {
    let profile = Bv1d::step(0.2, 1.0, OpenSet1D::interval(-2.0, 2.0).unwrap()).unwrap();
    let u = Bv2d::new(Form2D::ridge(profile, [1.0, 0.0]).unwrap(), Region::centered_square(1.0).unwrap());
    let q = f_eval_2d_report(&u, 1.0, 100.0, &SliceQuadrature::default()).unwrap();
    let (mc, se) = f_eval_2d_mc(&u, 1.0, 100.0, 4_000_000, 3).unwrap();
    let e = q.estimate;
    assert!((e.value - mc).abs() <= 4.0 * se + e.error_bound + q.angular_error, "{} vs {mc} ± {se}", e.value);
    let far = f_eval_2d(&u, 1.0, 1e5, &SliceQuadrature::default()).unwrap();
    assert!((far.value - 4.0).abs() < 0.02 * 4.0, "{}", far.value);
}

#[test]
fn rejects_bad_quadrature() {
    let q = SliceQuadrature { n_directions: 2, ..SliceQuadrature::default() };
    assert!(f_eval_2d(&disk(), 1.0, 10.0, &q).is_err());
    assert!(f_eval_2d(&disk(), 0.0, 10.0, &SliceQuadrature::default()).is_err());
    assert!(Region::disk([0.0, 0.0], -1.0).is_err());
    assert!(Region::polygon(vec![[0.0, 0.0], [1.0, 0.0], [0.2, 0.2], [0.0, 1.0]]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn rotation_equivariance(theta in 0.0..(2.0 * PI), lambda in 10.0..1e3f64) {
        let u = disk();
        let q = SliceQuadrature::default();
        let a = f_eval_2d_report(&u, 1.0, lambda, &q).unwrap();
        let b = f_eval_2d_report(&u.rotated(theta), 1.0, lambda, &q).unwrap();
        let tol = a.estimate.error_bound + b.estimate.error_bound + a.angular_error + b.angular_error;
        prop_assert!((a.estimate.value - b.estimate.value).abs() <= tol, "{} vs {} (tol {tol})", a.estimate.value, b.estimate.value);
    }

    #[test]
    fn rotated_regions_keep_geometry(theta in 0.0..(2.0 * PI), h in 0.2..2.0f64) {
        let sq = Region::centered_square(h).unwrap();
        let r = sq.rotated(theta);
        prop_assert!((r.area() - sq.area()).abs() < 1e-12 * sq.area());
        prop_assert!((r.perimeter() - sq.perimeter()).abs() < 1e-12 * sq.perimeter());
        prop_assert!((r.diameter() - sq.diameter()).abs() < 1e-12 * sq.diameter());
    }
}

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;

use common::kernel_by_quadrature;
use fracavity::cavity::{CavityConfig, Mirror, PumpProfile, RoundTrip};
use fracavity::fractional_ops::LevyIndex;
use fracavity::grid::{Field, Grid1D};
use fracavity::modesolver::{
    dense_eigenvalues, diagonalize_momentum, fox_li, identify_mode, threshold_search, FoxLiOptions, Seed,
    ThresholdOptions,
};
use fracavity::oracle::airy_mode;
use fracavity::propagator::Potential;

fn small_cavity(n: usize, alpha: f64, beta: f64, pump: Option<PumpProfile>, transmittance: f64) -> CavityConfig {
    CavityConfig {
        lambda: 1.064,
        focal: 1.0e4,
        alpha: LevyIndex::new(alpha).unwrap(),
        beta,
        mirror: Mirror::Spherical { radius: 5.0e5 },
        transmittance,
        pump,
        grid: Grid1D::new(-600.0, 600.0, n).unwrap(),
    }
}

fn random_field(grid: Grid1D, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..grid.len())
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect()
}

fn rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn factorised_round_trip_equals_kernel_quadrature(
        alpha in 0.5f64..=2.0,
        beta in 0.0f64..2e-2,
        g0 in 0.0f64..0.3,
        rho in 0.0f64..300.0,
        seed in any::<u64>(),
    ) {
        let pump = PumpProfile::new(g0, rho, 60.0).unwrap();
        let c = small_cavity(64, alpha, beta, Some(pump), 0.97);
        let psi = random_field(c.grid, seed);
        let mut fast = psi.clone();
        RoundTrip::new(&c).unwrap().apply(&mut fast);
        let slow = kernel_by_quadrature(&c, &psi);
        prop_assert!(rel(&fast, &slow) <= 1e-8, "rel {}", rel(&fast, &slow));
    }

    #[test]
    fn power_iteration_matches_dense_spectrum(
        g0 in 0.1f64..0.4,
        rho in 0.0f64..150.0,
        alpha in 1.0f64..=2.0,
    ) {
        let pump = PumpProfile::new(g0, rho, 80.0).unwrap();
        let c = small_cavity(64, alpha, 5e-3, Some(pump), 0.97);
        let dense = dense_eigenvalues(RoundTrip::new(&c).unwrap().to_dense()).unwrap();
        let mut by_size = dense.clone();
        by_size.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
        // power iteration can only resolve a strictly dominant eigenvalue
        prop_assume!(by_size[1].norm() < 0.999 * by_size[0].norm());
        let opts = FoxLiOptions { tol: 1e-12, max_iter: 200_000, ..Default::default() };
        let r = fox_li(&c, &opts).unwrap();
        prop_assert!((r.sigma - by_size[0]).norm() <= 1e-8 * by_size[0].norm(),
            "power {} dense {}", r.sigma, by_size[0]);
    }

    #[test]
    fn identification_ignores_phase_and_scale(
        phase in 0.0f64..(2.0 * PI),
        scale in 1e-3f64..1e3,
        n in 0usize..6,
    ) {
        let g = Grid1D::centered(50.0, 256).unwrap();
        let family: Vec<Field> = (0..6)
            .map(|k| Field::from_real_fn(g, move |x| {
                let u = x / 8.0;
                fracavity::oracle::hermite_polynomial(k, u) * (-u * u / 2.0).exp()
            }).normalized())
            .collect();
        let mut f = family[n].clone();
        f.scale(Complex64::from_polar(scale, phase));
        let id = identify_mode(&f, &family);
        prop_assert_eq!(id.index, Some(n));
        prop_assert!((id.overlap - 1.0).abs() < 1e-10);
        let reflected = identify_mode(&family[n].reflected(), &family);
        prop_assert_eq!(reflected.index, Some(n));
    }
}

#[test]
fn threshold_rises_with_output_coupling() {
    let mut last = 0.0;
    for t in [0.99, 0.97, 0.93, 0.88] {
        let pump = PumpProfile::new(0.0, 0.0, 60.0).unwrap();
        let c = small_cavity(256, 1.0, 5e-3, Some(pump), t);
        let opts = ThresholdOptions {
            fox_li: FoxLiOptions { seed: Seed::Random(3), ..Default::default() },
            ..Default::default()
        };
        let r = threshold_search(&c, &opts).unwrap();
        assert!(r.g0_threshold > last, "T={t}: {} <= {last}", r.g0_threshold);
        assert!((r.sigma.norm() - 1.0).abs() <= opts.tol);
        last = r.g0_threshold;
    }
}

#[test]
fn threshold_rises_with_pump_offset_for_the_ground_mode() {
    // a pump sliding off axis overlaps the lowest mode less and less
    let mut last = 0.0;
    for rho in [0.0, 20.0, 40.0] {
        let pump = PumpProfile::new(0.0, rho, 60.0).unwrap();
        let c = small_cavity(256, 1.0, 5e-3, Some(pump), 0.97);
        let r = threshold_search(&c, &ThresholdOptions::default()).unwrap();
        assert!(r.g0_threshold > last, "rho={rho}");
        last = r.g0_threshold;
    }
}

#[test]
fn flat_mirror_mask_is_accepted_by_the_kernel() {
    let c = CavityConfig {
        mirror: Mirror::FlatWithMask(Potential::PowerLaw { beta: 1e-4, alpha: 2.0 }),
        ..small_cavity(64, 1.5, 1e-2, None, 1.0)
    };
    let psi = random_field(c.grid, 9);
    let mut out = psi.clone();
    RoundTrip::new(&c).unwrap().apply(&mut out);
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    assert!((norm(&out) / norm(&psi) - 1.0).abs() < 1e-12);
}

#[test]
fn dominant_gain_is_nondecreasing_in_pump() {
    let mut last = 0.0;
    for k in 0..8 {
        let g0 = 0.02 + 0.28 * k as f64 / 7.0;
        let pump = PumpProfile::new(g0, 80.0, 60.0).unwrap();
        let c = small_cavity(256, 1.0, 5e-3, Some(pump), 0.97);
        let r = fox_li(&c, &FoxLiOptions::default()).unwrap();
        assert!(r.sigma.norm() >= last, "g0={g0}: {} < {last}", r.sigma.norm());
        last = r.sigma.norm();
    }
}

#[test]
fn centred_pump_lases_on_an_even_mode() {
    let pump = PumpProfile::new(0.0, 0.0, 20.0 * 2f64.sqrt()).unwrap();
    let c = CavityConfig {
        pump: Some(pump),
        ..small_cavity(4096, 1.0, 5e-3, None, 0.97)
    };
    let r = threshold_search(&c, &ThresholdOptions::default()).unwrap();
    assert!(r.even_weight > 0.999, "even weight {}", r.even_weight);
    let family: Vec<Field> = (0..8).map(|n| airy_mode(n, &c, &c.fourier_grid()).unwrap().1).collect();
    assert_eq!(identify_mode(&r.field_q, &family).index, Some(0));
}

#[test]
fn finite_differences_reproduce_the_analytic_modes() {
    let c = small_cavity(4096, 1.0, 5e-3, None, 0.97);
    let spec = diagonalize_momentum(c.alpha, c.beta, c.lambda, c.focal, 5.0e5, &c.grid, 21).unwrap();
    for (n, numeric) in spec.modes.iter().enumerate() {
        let (_, exact) = airy_mode(n, &c, &c.grid).unwrap();
        let ov = numeric.inner(&exact).norm_sqr() / (numeric.norm_l2() * exact.norm_l2()).powi(2);
        assert!(ov >= 0.9999, "n={n}: overlap {ov}");
    }
}

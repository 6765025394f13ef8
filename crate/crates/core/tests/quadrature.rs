use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use sml_core::quadrature::{integrate_oscillatory, lp_norm_radial, QuadratureSpec, RadialGrid, RadialProfile};
use sml_core::radial_fourier::MeansSpec;
use sml_core::test_function::{chi, TestFunctionSpec};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn phase(lambda: f64) -> impl Fn(f64) -> Complex64 {
    move |r| Complex64::new(0.0, -2.0 * PI * lambda * r).exp()
}

#[test]
fn constant_and_full_periods() {
    let q = QuadratureSpec::default();
    let one = integrate_oscillatory(|_| c(1.0, 0.0), (0.0, 1.0), 0.0, &q).unwrap();
    assert!((one - c(1.0, 0.0)).norm() < 1e-15);
    let zero = integrate_oscillatory(phase(100.0), (0.0, 1.0), 2.0 * PI * 100.0, &q).unwrap();
    assert!(zero.norm() < 1e-13, "{zero}");
}

#[test]
fn cancellation_decays_like_inverse_frequency() {
    // Integer λ gives exact cancellation; a quarter offset keeps |1 - e^{-2πiλ}| = √2.
    let q = QuadratureSpec::default();
    let lams = [100.25, 1000.25, 10000.25];
    let mut logs = Vec::new();
    for lam in lams {
        let v = integrate_oscillatory(phase(lam), (0.0, 1.0), 2.0 * PI * lam, &q).unwrap();
        let exact = (c(1.0, 0.0) - Complex64::new(0.0, -2.0 * PI * lam).exp()) / c(0.0, 2.0 * PI * lam);
        assert!((v - exact).norm() < 1e-9 * exact.norm());
        logs.push((lam.ln(), v.norm().ln()));
    }
    let slope = (logs[2].1 - logs[0].1) / (logs[2].0 - logs[0].0);
    assert!((slope + 1.0).abs() < 0.02, "slope {slope}");
}

#[test]
fn test_function_integrand_matches_oversampled_reference() {
    let spec = TestFunctionSpec::new(MeansSpec::real(0.0, 2).unwrap(), 64.0).unwrap();
    let amplitude = |r: f64| phase(64.0)(r) * chi(&spec.bump, r) * r;
    let freq = 2.0 * PI * 64.0;
    let base = QuadratureSpec::default();
    let reference_spec = QuadratureSpec { max_phase_per_panel: base.max_phase_per_panel / 10.0, ..base };
    let v = integrate_oscillatory(amplitude, spec.bump.support, freq, &base).unwrap();
    let reference = integrate_oscillatory(amplitude, spec.bump.support, freq, &reference_spec).unwrap();
    // The integral cancels to ~1e-8 of its terms, so the error is measured
    // against the integrand's L¹ mass.
    let mass = integrate_oscillatory(|r| c(amplitude(r).norm(), 0.0), spec.bump.support, freq, &base).unwrap().re;
    let scale = reference.norm().max(mass);
    assert!((v - reference).norm() < 1e-8 * scale, "{v} vs {reference}");
}

#[test]
fn refinement_stability() {
    let base = QuadratureSpec::default();
    for lam in [64.0, 512.0, 2048.0] {
        let spec = TestFunctionSpec::new(MeansSpec::real(0.0, 3).unwrap(), lam).unwrap();
        let f = |r: f64| spec.radial_weight(r);
        let freq = 2.0 * PI * lam;
        let a = integrate_oscillatory(f, spec.bump.support, freq, &base).unwrap();
        let b = integrate_oscillatory(f, spec.bump.support, freq, &base.refined()).unwrap();
        let scale = (2.0f64).powi(3) * 1.5;
        assert!((a - b).norm() < base.rel_tol * scale, "λ={lam}: {a} vs {b}");
    }
}

#[test]
fn under_resolved_rule_is_reported() {
    let q = QuadratureSpec::default();
    // Claiming a frequency bound far below the truth must be caught by the doubling check.
    let r = integrate_oscillatory(phase(5000.3), (0.0, 1.0), 10.0, &q);
    assert!(r.is_err());
}

#[test]
fn norm_examples() {
    let grid = RadialGrid::from_breaks(&[0.0, 0.5, 1.0], 16).unwrap();
    let disk = RadialProfile::sample(grid, |_| c(1.0, 0.0));
    assert!((lp_norm_radial(&disk, 1.0, 2).unwrap() - PI).abs() < 1e-13);
    let breaks: Vec<f64> = (0..=40).map(|k| k as f64 * 0.2).collect();
    let grid = RadialGrid::from_breaks(&breaks, 16).unwrap();
    let gauss = RadialProfile::sample(grid, |r| c((-PI * r * r).exp(), 0.0));
    assert!((lp_norm_radial(&gauss, 2.0, 2).unwrap() - 0.5f64.sqrt()).abs() < 1e-13);
    // The same Gaussian in three dimensions: ∫ e^{-2π|x|²} = 2^{-3/2}.
    assert!((lp_norm_radial(&gauss, 2.0, 3).unwrap() - 2f64.powf(-0.75)).abs() < 1e-13);
    assert!(lp_norm_radial(&gauss, 0.5, 2).is_err());
}

#[test]
fn grid_weights_sum_to_length() {
    let breaks = [0.0, 0.1, 0.35, 1.0, 3.0];
    let grid = RadialGrid::from_breaks(&breaks, 12).unwrap();
    let total: f64 = grid.weights().iter().sum();
    assert!((total - 3.0).abs() < 1e-12 * 3.0);
    assert!(grid.radii().windows(2).all(|w| w[0] < w[1]));
}

fn random_profile(values: &[(f64, f64)]) -> RadialProfile {
    let breaks: Vec<f64> = (0..=values.len() / 8).map(|k| k as f64 * 0.5).collect();
    let grid = RadialGrid::from_breaks(&breaks, 8).unwrap();
    let vals = values.iter().take(grid.len()).map(|(a, b)| c(*a, *b)).collect();
    RadialProfile::new(grid, vals).unwrap()
}

proptest! {
    #[test]
    fn lp_norm_homogeneous_and_subadditive(
        raw in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 32),
        other in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 32),
        scale in (-4.0f64..4.0, -4.0f64..4.0),
        p_idx in 0usize..3,
        n in 2u32..5,
    ) {
        let p = [2.0, 4.0, 6.0][p_idx];
        let f = random_profile(&raw);
        let g = random_profile(&other);
        let s = c(scale.0, scale.1);
        let nf = lp_norm_radial(&f, p, n).unwrap();
        let ng = lp_norm_radial(&g, p, n).unwrap();
        let scaled = RadialProfile::new(f.grid.clone(), f.values.iter().map(|v| s * v).collect()).unwrap();
        let ns = lp_norm_radial(&scaled, p, n).unwrap();
        prop_assert!((ns - s.norm() * nf).abs() <= 1e-12 * (1.0 + s.norm() * nf));
        let sum = RadialProfile::new(f.grid.clone(), f.values.iter().zip(&g.values).map(|(a, b)| a + b).collect()).unwrap();
        let nsum = lp_norm_radial(&sum, p, n).unwrap();
        prop_assert!(nsum <= nf + ng + 1e-12 * (nf + ng));
    }
}

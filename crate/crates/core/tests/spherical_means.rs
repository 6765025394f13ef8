use std::f64::consts::PI;

use num_complex::Complex64;
use sml_core::quadrature::QuadratureSpec;
use sml_core::radial_fourier::MeansSpec;
use sml_core::spherical_means::{
    evaluate_mean, evaluations_to_csv, far_components, gaussian_fourier_profile, maximal_scan, mean_direct_oracle,
    mean_multiplier_route, mean_of_radial_transform, origin_components, GAUSSIAN_SUPPORT,
};
use sml_core::test_function::TestFunctionSpec;
use sml_core::SmlError;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gaussian(r: f64) -> Complex64 {
    c((-PI * r * r).exp(), 0.0)
}

/// Least-squares slope of log|y| against log x.
fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn lambdas(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(k)).collect()
}

#[test]
fn gaussian_cross_route_matrix() {
    let quad = QuadratureSpec::default();
    for n in [2, 3] {
        for a in [0.5, 1.0, 1.5] {
            let spec = MeansSpec::real(a, n).unwrap();
            for t in [0.5, 1.0, 2.0] {
                for radius in [0.0, 0.6, 1.0, 2.5] {
                    let m =
                        mean_of_radial_transform(&spec, t, gaussian_fourier_profile, GAUSSIAN_SUPPORT, radius, &quad)
                            .unwrap();
                    let d = mean_direct_oracle(&spec, t, gaussian, radius, 1e-9).unwrap();
                    let rel = (m - d).norm() / d.norm();
                    assert!(rel < 1e-6, "n={n} a={a} t={t} radius={radius}: {m} vs {d}");
                }
            }
        }
    }
}

#[test]
fn gaussian_cross_route_complex_alpha() {
    let spec = MeansSpec::new(c(0.7, 0.4), 3).unwrap();
    let m = mean_of_radial_transform(
        &spec,
        1.5,
        gaussian_fourier_profile,
        GAUSSIAN_SUPPORT,
        0.8,
        &QuadratureSpec::default(),
    )
    .unwrap();
    let d = mean_direct_oracle(&spec, 1.5, gaussian, 0.8, 1e-9).unwrap();
    assert!((m - d).norm() < 1e-6 * d.norm(), "{m} vs {d}");
}

#[test]
fn multiplier_route_is_linear() {
    let spec = MeansSpec::new(c(0.3, -0.5), 2).unwrap();
    let quad = QuadratureSpec::default();
    let scale = c(-1.5, 2.25);
    let base = mean_of_radial_transform(&spec, 1.2, gaussian_fourier_profile, GAUSSIAN_SUPPORT, 0.4, &quad).unwrap();
    let scaled =
        mean_of_radial_transform(&spec, 1.2, |s| scale * gaussian_fourier_profile(s), GAUSSIAN_SUPPORT, 0.4, &quad)
            .unwrap();
    assert!((scaled - scale * base).norm() < 1e-13 * scaled.norm());
}

#[test]
fn origin_slope_and_component_structure() {
    let quad = QuadratureSpec::sweep();
    for (n, a) in [(2, 0.2), (2, 0.0), (3, 0.0), (3, 0.5)] {
        let spec = MeansSpec::real(a, n).unwrap();
        let lams = lambdas(7, 11);
        let mut totals = Vec::new();
        let mut rema = Vec::new();
        let mut mains = Vec::new();
        for &lam in &lams {
            let tf = TestFunctionSpec::new(spec, lam).unwrap();
            let parts = origin_components(&spec, &tf, 0.0, &quad).unwrap();
            if lam == 1024.0 {
                assert!(parts.counter.norm() < 1e-6 * parts.main.norm(), "n={n} a={a}");
            }
            totals.push(parts.total.norm());
            rema.push(parts.remainder.norm());
            mains.push(parts.main.norm());
        }
        let slope = log_slope(&lams[1..], &totals[1..]);
        let predicted = (n as f64 + 1.0) / 2.0 - a;
        assert!((slope - predicted).abs() < 0.05, "n={n} a={a}: slope {slope}");
        // When the multiplier has an exact two-wave form the remainder is
        // rounding noise and carries no exponent.
        if rema.iter().zip(&mains).all(|(r, m)| r / m > 1e-12) {
            let rs = log_slope(&lams, &rema);
            assert!(rs <= (n as f64 - 1.0) / 2.0 - a + 0.05, "n={n} a={a}: remainder slope {rs}");
        }
    }
}

#[test]
fn origin_at_mean_definition_point() {
    let spec = MeansSpec::real(0.2, 2).unwrap();
    let tf = TestFunctionSpec::new(spec, 512.0).unwrap();
    let quad = QuadratureSpec::default();
    let direct = mean_multiplier_route(&spec, 1.0, &tf, 0.0, &quad).unwrap();
    let parts = origin_components(&spec, &tf, 0.0, &quad).unwrap();
    assert_eq!(parts.total, direct);
    // c₀ variant: |x| = 0.05/λ keeps the same leading size.
    let near = mean_multiplier_route(&spec, 1.0, &tf, 0.05 / 512.0, &quad).unwrap();
    assert!((near.norm() / direct.norm() - 1.0).abs() < 0.05);
}

#[test]
fn tuned_far_slope_and_error_hierarchy() {
    let quad = QuadratureSpec::sweep();
    for (n, a) in [(2, 0.0), (2, 0.2), (2, 0.5), (3, 0.0), (3, 0.2), (3, 0.5)] {
        let spec = MeansSpec::real(a, n).unwrap();
        let lams = lambdas(7, 11);
        let mut totals = Vec::new();
        let mut ratios = Vec::new();
        for &lam in &lams {
            let tf = TestFunctionSpec::new(spec, lam).unwrap();
            let parts = far_components(&spec, &tf, 2.0, 3.0, &quad).unwrap();
            totals.push(parts.total.norm());
            ratios.push(parts.detuned().norm() / parts.zero_phase().norm());
        }
        let slope = log_slope(&lams[1..], &totals[1..]);
        assert!((slope - (1.0 - a)).abs() < 0.05, "n={n} a={a}: slope {slope}");
        if ratios.iter().all(|r| *r > 1e-11) {
            let rs = log_slope(&lams, &ratios);
            assert!(rs <= -1.0 + 0.05, "n={n} a={a}: detuned slope {rs}");
        } else {
            assert!(ratios.iter().all(|r| *r < 1e-10), "n={n} a={a}: {ratios:?}");
        }
    }
}

#[test]
fn detuned_time_is_much_smaller() {
    let spec = MeansSpec::real(0.2, 2).unwrap();
    let tf = TestFunctionSpec::new(spec, 512.0).unwrap();
    let quad = QuadratureSpec::default();
    let tuned = mean_multiplier_route(&spec, 3.0, &tf, 2.0, &quad).unwrap().norm();
    let detuned = mean_multiplier_route(&spec, 3.5, &tf, 2.0, &quad).unwrap().norm();
    assert!(tuned >= 10.0 * detuned, "{tuned} vs {detuned}");
}

#[test]
fn maximal_scan_finds_tuned_time() {
    let spec = MeansSpec::real(0.2, 2).unwrap();
    let tf = TestFunctionSpec::new(spec, 512.0).unwrap();
    let quad = QuadratureSpec::sweep();
    let grid = [2.5, 2.75, 3.0, 3.25, 3.5];
    let scan = maximal_scan(&spec, &tf, 2.0, &grid, &quad).unwrap();
    assert_eq!(scan.t_at_max, 3.0);
    let refined: Vec<f64> = (0..=8).map(|k| 2.5 + 0.125 * k as f64).collect();
    let finer = maximal_scan(&spec, &tf, 2.0, &refined, &quad).unwrap();
    assert!((finer.max - scan.max).abs() < 0.05 * scan.max);
}

#[test]
fn complex_alpha_origin_slope_matches_real_part() {
    let quad = QuadratureSpec::sweep();
    let lams = lambdas(8, 11);
    let slope_for = |alpha: Complex64| {
        let spec = MeansSpec::new(alpha, 2).unwrap();
        let vals: Vec<f64> = lams
            .iter()
            .map(|&lam| {
                let tf = TestFunctionSpec::new(spec, lam).unwrap();
                mean_multiplier_route(&spec, 1.0, &tf, 0.0, &quad).unwrap().norm()
            })
            .collect();
        log_slope(&lams, &vals)
    };
    let a = slope_for(c(0.2, 0.0));
    let b = slope_for(c(0.2, 1.0));
    assert!((a - b).abs() < 0.02, "{a} vs {b}");
}

#[test]
fn pole_and_domain_errors_propagate() {
    // n/2 + α = 0 puts a pole of 1/Γ into the multiplier.
    let spec = MeansSpec::real(-1.0, 2).unwrap();
    let tf = TestFunctionSpec::new(spec, 16.0).unwrap();
    let quad = QuadratureSpec::default();
    assert!(matches!(mean_multiplier_route(&spec, 1.0, &tf, 0.0, &quad), Err(SmlError::Pole(_))));
    let ok = MeansSpec::real(0.2, 2).unwrap();
    let tf = TestFunctionSpec::new(ok, 16.0).unwrap();
    assert!(mean_multiplier_route(&ok, 1.0, &tf, -1.0, &quad).is_err());
    assert!(far_components(&ok, &tf, 1e-4, 1.0, &quad).is_err());
}

#[test]
fn evaluation_csv_round_trip() {
    let spec = MeansSpec::real(0.2, 2).unwrap();
    let tf = TestFunctionSpec::new(spec, 64.0).unwrap();
    let e = evaluate_mean(&spec, 1.0, &tf, 0.0, &QuadratureSpec::default()).unwrap();
    let csv = evaluations_to_csv(&[e, e]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    let abs: f64 = lines[1].split(',').nth(8).unwrap().parse().unwrap();
    assert_eq!(abs, e.value.norm());
    assert!(csv.ends_with('\n') && !csv.contains('\r'));
}

//! Quadrature oracles for the closed-form special functions and densities.

use std::f64::consts::PI;

use blab::special::quad::{integrate, QuadConfig};
use blab::special::*;
use proptest::prelude::*;

fn tight() -> QuadConfig {
    QuadConfig {
        abs_tol: 0.0,
        rel_tol: 1e-14,
        max_intervals: 8000,
    }
}

fn oracle_tail(x: f64) -> f64 {
    integrate(|z| (-0.5 * z * z).exp(), x, f64::INFINITY, &tight()).unwrap().value
}

/// `exp(l²/2) ∫_l^∞ exp(-z²/2) dz` after the shift `z = l + t`.
fn oracle_h(l: f64) -> f64 {
    integrate(|t| (-l * t - 0.5 * t * t).exp(), 0.0, f64::INFINITY, &tight())
        .unwrap()
        .value
}

#[test]
fn gauss_tail_against_quadrature() {
    for &x in &[-5.0, -1.0, 0.0, 0.2, 0.5, 1.0, 2.0, 3.0, 4.0, 5.5, 8.0] {
        let want = oracle_tail(x);
        let got = gauss_tail(x);
        assert!(((got - want) / want).abs() < 1e-12, "x={x}: {got} vs {want}");
    }
    assert!((gauss_tail(0.0) - 1.253_314_137_3).abs() < 1e-10);
    assert!((gauss_tail(1.0) - (2.0 * PI).sqrt() * (1.0 - normal_cdf(1.0))).abs() < 1e-14);
    assert!((gauss_tail(1.0) - 0.397_69).abs() < 1e-5);
}

#[test]
fn mills_h_against_shifted_quadrature() {
    for &l in &[0.0, 0.01, 0.3, 1.0, 2.0, 5.0, 12.0, 25.0, 40.0, 50.0] {
        let want = oracle_h(l);
        let got = mills_h(l).unwrap();
        assert!(((got - want) / want).abs() < 1e-12, "l={l}: {got} vs {want}");
    }
    assert!((mills_h(0.0).unwrap() - 1.253_314_137_3).abs() < 1e-10);
    assert!((mills_h(1.0).unwrap() - 0.655_68).abs() < 1e-5);
}

#[test]
fn h_double_identity_on_log_grid() {
    let mut worst: f64 = 0.0;
    for i in 0..=60 {
        let l = 1e-2 * (5000f64).powf(i as f64 / 60.0);
        let d = (mills_h(l).unwrap() - h_via_quadrature(l).unwrap()).abs();
        worst = worst.max(d);
    }
    assert!(worst < 1e-8, "max deviation {worst}");
    for &l in &[0.1, 1.0, 10.0] {
        assert!((mills_h(l).unwrap() - h_via_quadrature(l).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn reference_densities_have_unit_mass() {
    for d in [
        DensitySpec::rayleigh(),
        DensitySpec::half_normal(),
        DensitySpec::std_normal(),
        DensitySpec::bu(),
        DensitySpec::mu(),
        DensitySpec::r1(),
        DensitySpec::ru(),
        DensitySpec::uniform01(),
    ] {
        let m = d.mass().unwrap();
        assert!((m - 1.0).abs() < 1e-8, "{}: mass {m}", d.name());
        assert_eq!(d.normalization(), 1.0);
    }
    for &l in &[0.5, 1.0, 2.0] {
        let m = DensitySpec::bu_given_lambda(l).unwrap().mass().unwrap();
        assert!((m - 1.0).abs() < 1e-8, "l={l}: mass {m}");
    }
}

#[test]
fn joint_density_has_unit_mass() {
    let cfg = tight();
    let inner = |x: f64| {
        integrate(|l| joint_density_b1_l1(x, l).unwrap(), 0.0, f64::INFINITY, &cfg)
            .unwrap()
            .value
    };
    let half = integrate(inner, 0.0, f64::INFINITY, &cfg).unwrap().value;
    assert!((2.0 * half - 1.0).abs() < 1e-8);
}

#[test]
fn conditional_bu_mixes_to_unconditional() {
    let cfg = tight();
    let mix = |y: f64| {
        integrate(
            |l| pdf_bu_given_lambda(y, l).unwrap() * pdf_lambda10(l).unwrap(),
            0.0,
            f64::INFINITY,
            &cfg,
        )
        .unwrap()
        .value
    };
    for &y in &[0.0, 0.1, -0.4, 1.0] {
        assert!((mix(y) - pdf_bu(y)).abs() < 1e-10, "y={y}");
    }
    let total = 2.0 * integrate(mix, 0.0, f64::INFINITY, &cfg).unwrap().value;
    assert!((total - 1.0).abs() < 1e-7);
}

#[test]
fn moments_by_quadrature() {
    let cfg = tight();
    let m = |f: &dyn Fn(f64) -> f64| integrate(f, 0.0, f64::INFINITY, &cfg).unwrap().value;
    let sqrt_2_pi = (2.0 / PI).sqrt();
    assert!((m(&|y| y * pdf_r1(y)) - 2.0 * sqrt_2_pi).abs() < 1e-10);
    assert!((m(&|y| pdf_r1(y) / y) - sqrt_2_pi).abs() < 1e-10);
    assert!((m(&|y| y * pdf_mu(y)) - 0.75 * (PI / 2.0).sqrt()).abs() < 1e-10);
    // E[sqrt(2E)] = sqrt(pi/2)
    assert!((m(&|e| (2.0 * e).sqrt() * (-e).exp()) - (PI / 2.0).sqrt()).abs() < 1e-9);
    let integrated = m(&|r| mills_h(r).unwrap() * pdf_r1(r) / (r * r));
    assert!((integrated - sqrt_2_pi).abs() < 1e-8);
    let half_normal_mass = integrate(pdf_half_normal, 0.0, 0.5, &cfg).unwrap().value;
    assert!((half_normal_mass - 0.382_924_922_548).abs() < 1e-10);
}

#[test]
fn mu_density_positive_and_bu_peak() {
    for i in 1..500 {
        assert!(pdf_mu(i as f64 * 0.01) > 0.0);
    }
    assert!((pdf_bu(0.0) - (PI / 2.0).sqrt()).abs() < 1e-15);
}

#[test]
fn tabulated_cdfs_match_quadrature() {
    let d = DensitySpec::ru();
    let c = cdf_from_density(&d).unwrap();
    for &y in &[0.05, 0.5, 1.0, 1.7, 3.0] {
        let want = d.integrate_over(0.0, y).unwrap();
        assert!((c.cdf(y) - want).abs() < 1e-9);
    }
    let bu = cdf_from_density(&DensitySpec::bu()).unwrap();
    assert!((bu.cdf(0.0) - 0.5).abs() < 1e-9);
    assert!((bu.cdf(-3.0) + bu.cdf(3.0) - 1.0).abs() < 1e-9);
}

proptest! {
    #[test]
    fn tail_reflection(x in -30.0f64..30.0) {
        let s = gauss_tail(x) + gauss_tail(-x);
        prop_assert!((s - (2.0 * PI).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn h_is_decreasing_and_below_mills_bound(a in 0.0f64..60.0, b in 0.0f64..60.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(mills_h(lo).unwrap() >= mills_h(hi).unwrap());
        // l/(l²+1) < H(l) < 1/l for l > 0
        if hi > 0.0 {
            let h = mills_h(hi).unwrap();
            prop_assert!(h < 1.0 / hi);
            prop_assert!(h > hi / (hi * hi + 1.0));
        }
    }

    #[test]
    fn joint_density_symmetry(x in -6.0f64..6.0, l in 0.0f64..6.0) {
        let a = joint_density_b1_l1(x, l).unwrap();
        let b = joint_density_b1_l1(l, x.abs()).unwrap();
        prop_assert!((a - b).abs() < 1e-15);
    }
}

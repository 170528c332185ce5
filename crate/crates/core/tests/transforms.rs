use std::f64::consts::PI;

use approx::assert_relative_eq;
use lebedev_core::quadrature::QuadratureConfig;
use lebedev_core::special_functions::KernelFamily::{self, ProductKernel, SquaredKernel};
use lebedev_core::transforms::*;
use lebedev_core::Error;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

// Reference value: Phi_1(1) / pi from mpmath.
const F_A_SINE_AT_1: f64 = 0.626_454_516_206_381;

#[test]
fn sine_profile_reference_value() {
    let p = PeriodicProfile::sine_series(vec![1.0]).unwrap();
    assert_relative_eq!(
        build_f_from_profile_a(&p, 1.0, &cfg()).unwrap(),
        F_A_SINE_AT_1,
        max_relative = 1e-10
    );
}

#[test]
fn sine_profile_has_one_coefficient() {
    let p = PeriodicProfile::sine_series(vec![1.0]).unwrap();
    for family in [ProductKernel, SquaredKernel] {
        let c = coefficients_from_profile(&p, family, 6, &cfg()).unwrap();
        assert_relative_eq!(c.get(1), PI * PI / PI.sinh(), max_relative = 1e-12);
        for n in 2..=6 {
            assert!(c.get(n).abs() < 1e-14, "n={n}");
        }
    }
}

#[test]
fn cosine_profile_is_annihilated() {
    let p = PeriodicProfile::cosine_series(vec![1.0, -2.0]).unwrap();
    let c = coefficients_from_profile(&p, ProductKernel, 4, &cfg()).unwrap();
    assert!(c.values().iter().all(|v| v.abs() < 1e-14));
    for x in [0.5, 2.0] {
        assert!(build_f_from_profile_a(&p, x, &cfg()).unwrap().abs() < 1e-14);
        assert!(build_f_from_profile_b(&p, x, &cfg()).unwrap().abs() < 1e-14);
    }
}

#[test]
fn sawtooth_coefficients_match_fourier_series() {
    let c = coefficients_from_profile(&PeriodicProfile::sawtooth(), ProductKernel, 6, &cfg()).unwrap();
    for n in 1..=6 {
        let nf = f64::from(n);
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let exact = PI / (PI * nf).sinh() * sign * 2.0 * PI / nf;
        assert_relative_eq!(c.get(n), exact, max_relative = 1e-9);
    }
}

#[test]
fn sampled_sawtooth_tracks_the_closed_form() {
    let m = 2001;
    let us: Vec<f64> = (0..m).map(|i| -PI + 2.0 * PI * i as f64 / (m - 1) as f64).collect();
    let vs: Vec<f64> = us.clone();
    let p = PeriodicProfile::sampled(us, vs).unwrap();
    assert_eq!(p.lipschitz_bound(), 1.0);
    let c = coefficients_from_profile(&p, ProductKernel, 4, &cfg()).unwrap();
    for n in 1..=4 {
        let nf = f64::from(n);
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let exact = PI / (PI * nf).sinh() * sign * 2.0 * PI / nf;
        assert_relative_eq!(c.get(n), exact, max_relative = 1e-6);
    }
}

#[test]
fn sampled_profile_validation() {
    let us: Vec<f64> = (0..10).map(|i| -PI + 2.0 * PI * i as f64 / 9.0).collect();
    assert!(PeriodicProfile::sampled(us.clone(), vec![0.0; 10]).is_ok());
    assert!(PeriodicProfile::sampled(us[..5].to_vec(), vec![0.0; 5]).is_err());
    assert!(PeriodicProfile::sampled(us.clone(), vec![0.0; 9]).is_err());
    let mut shuffled = us.clone();
    shuffled.swap(3, 4);
    assert!(PeriodicProfile::sampled(shuffled, vec![0.0; 10]).is_err());
    let short: Vec<f64> = us.iter().map(|u| 0.5 * u).collect();
    assert!(PeriodicProfile::sampled(short, vec![0.0; 10]).is_err());
}

#[test]
fn profile_checks() {
    let p = PeriodicProfile::sine_series(vec![1.0, 0.5]).unwrap();
    assert_eq!(p.lipschitz_bound(), 2.0);
    p.check_lipschitz(500, 7).unwrap();
    p.check_periodicity().unwrap();
    let liar = PeriodicProfile::new("liar", 0.1, |u| (3.0 * u).sin()).unwrap();
    assert!(matches!(liar.check_lipschitz(500, 7), Err(Error::InvalidProfile(_))));
    let aperiodic = PeriodicProfile::new("aperiodic", 1.0, |u| (0.5 * u).sin()).unwrap();
    assert!(aperiodic.check_periodicity().is_err());
    assert!(PeriodicProfile::sine_series(vec![f64::NAN]).is_err());
}

#[test]
fn profile_generated_functions_are_linear() {
    let p = PeriodicProfile::sine_series(vec![1.0]).unwrap();
    let q = PeriodicProfile::sine_series(vec![0.0, 1.0]).unwrap();
    let sum = PeriodicProfile::sine_series(vec![2.0, -3.0]).unwrap();
    for family in [ProductKernel, SquaredKernel] {
        for x in [0.4, 1.5] {
            let lhs = build_f_from_profile(family, &sum, x, &cfg()).unwrap();
            let rhs = 2.0 * build_f_from_profile(family, &p, x, &cfg()).unwrap()
                - 3.0 * build_f_from_profile(family, &q, x, &cfg()).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1e-6), "{family} x={x}");
        }
    }
}

#[test]
fn forward_recovers_the_leading_coefficient() {
    let p = PeriodicProfile::sine_series(vec![1.0]).unwrap();
    let a = forward_a(|x| build_f_from_profile_a(&p, x, &cfg()), 1, &cfg()).unwrap();
    assert_relative_eq!(a.value, PI * PI / PI.sinh(), max_relative = 1e-8);
    let b = forward_b(|x| build_f_from_profile_b(&p, x, &cfg()), 1, &cfg()).unwrap();
    assert_relative_eq!(b.value, PI * PI / PI.sinh(), max_relative = 1e-8);
}

#[test]
fn fourier_profile_selects_one_mode() {
    let p = PeriodicProfile::sine_series(vec![0.0, 1.0]).unwrap();
    let rs = forward_many(
        SquaredKernel,
        |x| build_f_from_profile_b(&p, x, &cfg()),
        &[1, 2, 3],
        &cfg(),
    )
    .unwrap();
    assert!(rs[0].value.abs() < 1e-8);
    assert_relative_eq!(rs[1].value, PI * PI / (2.0 * PI).sinh(), max_relative = 1e-8);
    assert!(rs[2].value.abs() < 1e-8);
}

#[test]
fn single_mode_inversion_is_the_scaled_kernel() {
    let c = CoefficientSequence::single_mode(ProductKernel, 2, 1.5).unwrap();
    let x = 0.7;
    let phi = lebedev_core::kernels::phi_kernel(2, x, &cfg()).unwrap().value;
    let s = invert_a(&c, x, &cfg()).unwrap();
    assert_relative_eq!(
        s.value,
        (2.0 * PI).sinh() * 1.5 * phi / PI.powi(3),
        max_relative = 1e-14
    );
    assert_eq!(s.tail_ratio, 1.0);
    assert!(s.tail_warning);
}

#[test]
fn geometric_coefficients_converge_quickly() {
    let values: Vec<f64> = (1..=12).map(|n| (-(n as f64)).exp()).collect();
    let short = CoefficientSequence::new(SquaredKernel, values[..8].to_vec()).unwrap();
    let long = CoefficientSequence::new(SquaredKernel, values).unwrap();
    for x in [0.5, 2.0] {
        let a = synthesize_b(&short, x, &cfg()).unwrap();
        let b = synthesize_b(&long, x, &cfg()).unwrap();
        assert!((a - b).abs() <= 1e-3 * b.abs(), "x={x}");
    }
}

#[test]
fn algebraic_coefficients_match_extended_sums() {
    let values: Vec<f64> = (1..=40).map(|n| 1.0 / (n * n) as f64).collect();
    let c20 = CoefficientSequence::new(SquaredKernel, values[..20].to_vec()).unwrap();
    let c40 = CoefficientSequence::new(SquaredKernel, values).unwrap();
    assert!(c40.summability_probe().passes);
    let x = 1.0;
    let a = synthesize(&c20, x, &cfg()).unwrap();
    let b = synthesize(&c40, x, &cfg()).unwrap();
    assert!((a - b).abs() <= 1e-6 * b.abs().max(1e-12));
}

#[test]
fn summability_violation_is_rejected() {
    let growing: Vec<f64> = (1..=8).map(|n| (4.0 * n as f64).exp()).collect();
    let c = CoefficientSequence::new(ProductKernel, growing).unwrap();
    assert!(!c.summability_probe().passes);
    assert!(matches!(
        synthesize(&c, 1.0, &cfg()),
        Err(Error::SummabilityViolation(_))
    ));
    let nan = CoefficientSequence::new(SquaredKernel, vec![1.0, f64::NAN]).unwrap();
    assert!(!nan.summability_probe().passes);
}

#[test]
fn family_mismatch_is_rejected() {
    let c = CoefficientSequence::single_mode(SquaredKernel, 1, 1.0).unwrap();
    assert!(matches!(invert_a(&c, 1.0, &cfg()), Err(Error::FamilyMismatch { .. })));
    assert!(matches!(
        synthesize_a(&c, 1.0, &cfg()),
        Err(Error::FamilyMismatch { .. })
    ));
    assert!(invert_b(&c, 1.0, &cfg()).is_ok());
    assert!(CoefficientSequence::new(ProductKernel, vec![]).is_err());
}

#[test]
fn zero_coefficients_synthesize_to_zero() {
    let c = CoefficientSequence::new(ProductKernel, vec![0.0; 5]).unwrap();
    assert_eq!(synthesize(&c, 1.0, &cfg()).unwrap(), 0.0);
    let s = invert(&c, 1.0, &cfg()).unwrap();
    assert_eq!((s.value, s.tail_ratio, s.tail_warning), (0.0, 0.0, false));
}

fn check_roundtrip(family: KernelFamily) {
    let p = PeriodicProfile::sine_series(vec![1.0]).unwrap();
    let r = roundtrip_report(&p, family, 8, &[0.2, 1.0, 4.0], &cfg()).unwrap();
    assert!(r.is_consistent());
    assert!(r.max_rel_error <= 1e-4, "{family}: {}", r.max_rel_error);
    assert_eq!(r.terms_used, 8);
}

#[test]
fn roundtrip_product_family() {
    check_roundtrip(ProductKernel);
}

#[test]
fn roundtrip_squared_family() {
    check_roundtrip(SquaredKernel);
}

#[test]
fn roundtrip_of_annihilated_profiles_is_zero() {
    for p in [
        PeriodicProfile::zero(),
        PeriodicProfile::cosine_series(vec![1.0]).unwrap(),
    ] {
        let r = roundtrip_report(&p, ProductKernel, 4, &[0.5, 1.0], &cfg()).unwrap();
        assert!(r.max_abs_error < 1e-14, "{}", p.label());
        assert!(r.truth.iter().chain(&r.reconstructed).all(|v| v.abs() < 1e-14));
    }
    assert!(roundtrip_report(&PeriodicProfile::zero(), ProductKernel, 4, &[], &cfg()).is_err());
}

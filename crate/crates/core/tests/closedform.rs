mod common;

use std::f64::consts::{FRAC_PI_3, PI};

use adf_core::channel::channel_matrix;
use adf_core::closedform::{
    cadf_closed, closed_form_placement, gamma_norm, gamma_norm_checked, nearfield_factors, optimal_adf,
    positions_closed, simplified_adf, AdfFamilyParams, NearFieldFactors,
};
use adf_core::geometry::{discretize_adf, uniform_apf, ReceiveArray, TransmitArray};
use adf_core::rate::achievable_rate_discrete;
use adf_core::Error;
use common::*;
use proptest::prelude::*;
use statrs::function::gamma::ln_gamma;

/// Factors with `τ = 0` and a vanishing bias.
fn unbiased() -> NearFieldFactors {
    NearFieldFactors::new(0.0, 0.5, 3.0, 1e15).unwrap()
}

#[test]
fn factor_examples() {
    let (tx, rx) = arrays(64, 4, 3.0);
    let f = nearfield_factors(&tx, &rx, wavelength(), RHO).unwrap();
    assert_eq!(f.tau(), tx.theta().cos() * tx.aperture() / 6.0);
    assert!(f.tau().abs() < 1e-16);
    assert!((f.beta() - PI * tx.aperture() / 6.0).abs() < 1e-12);

    let tilted = TransmitArray::new(64, 0.945 / 63.0, FRAC_PI_3, 0.0).unwrap();
    let rx5 = ReceiveArray::new(4, wavelength() / 2.0, std::f64::consts::FRAC_PI_2, 0.0, 5.0).unwrap();
    let f = nearfield_factors(&tilted, &rx5, wavelength(), RHO).unwrap();
    assert!((f.tau() - 0.04725).abs() < 1e-12);

    let close = ReceiveArray::new(4, wavelength() / 2.0, std::f64::consts::FRAC_PI_2, 0.0, 0.1).unwrap();
    assert!(matches!(nearfield_factors(&tx, &close, wavelength(), RHO), Err(Error::OutOfRegime { .. })));
}

#[test]
fn gamma_examples() {
    assert!((gamma_norm(-0.25, 16, &unbiased()) - 15.0 / PI).abs() < 1e-9);
    // ∫(1−p²)^(−3/4) = √π Γ(1/4)/Γ(3/4).
    let integral = PI.sqrt() * (ln_gamma(0.25) - ln_gamma(0.75)).exp();
    let g = gamma_norm(-0.375, 16, &unbiased());
    assert!((g - 15.0 / integral).abs() < 1e-9);
    assert!((g - 2.8604).abs() < 1e-4);
    for alpha in [-0.45, -0.3, -0.1, -0.01] {
        let checked = gamma_norm_checked(alpha, 32, &NearFieldFactors::new(0.04, 0.6, 4.0, 10.0).unwrap());
        assert!(!checked.fallback, "alpha = {alpha}");
    }
}

#[test]
fn family_examples() {
    let flat = optimal_adf(&AdfFamilyParams::new(0.0, 16, unbiased()).unwrap()).unwrap();
    assert!(flat.values().iter().all(|v| (v - 7.5).abs() < 1e-9));

    let params = AdfFamilyParams::new(-0.25, 16, unbiased()).unwrap();
    assert!((params.density(0.0) - params.gamma()).abs() < 1e-15);
    assert!((params.gamma() - 15.0 / PI).abs() < 1e-9);

    let near = AdfFamilyParams::new(-1e-4, 16, unbiased()).unwrap();
    for i in 0..=200 {
        let p = -0.995 + 1.99 * i as f64 / 200.0;
        assert!((near.density(p) - 7.5).abs() < 1e-2 * 7.5, "p = {p}");
    }

    assert!(AdfFamilyParams::new(-0.5, 16, unbiased()).is_err());
    assert!(AdfFamilyParams::new(0.1, 16, unbiased()).is_err());
    let weak = NearFieldFactors::new(0.0, 2.5, 30.0, 0.1).unwrap();
    assert!(matches!(AdfFamilyParams::new(-0.25, 16, weak), Err(Error::InfeasibleParameters(_))));
}

#[test]
fn family_normalization_with_bias() {
    for (z0, alpha) in [(3.0, -0.25), (5.0, -0.375), (4.0, 0.0)] {
        let (tx, rx) = arrays(64, 4, z0);
        let f = nearfield_factors(&tx, &rx, wavelength(), RHO).unwrap();
        let params = AdfFamilyParams::new(alpha, 64, f).unwrap();
        let w = optimal_adf(&params).unwrap();
        assert!((w.integral() - 63.0).abs() < 1e-6);
        assert!(w.values().iter().all(|&v| v >= 0.0));
        assert!((params.cumulative(1.0) - 63.0).abs() < 1e-6);
    }
}

#[test]
fn simplified_matches_full_without_bias() {
    for alpha in [-0.4, -0.25, -0.1, 0.0] {
        let full = optimal_adf(
            &AdfFamilyParams::new(alpha, 32, NearFieldFactors::new(0.0, 0.5, 3.0, f64::MAX).unwrap()).unwrap(),
        )
        .unwrap();
        let simple = simplified_adf(alpha, 32).unwrap();
        for (a, b) in full.values().iter().zip(simple.values()) {
            assert!((a - b).abs() <= 1e-10 * b.max(1.0), "alpha = {alpha}");
        }
    }
}

#[test]
fn cadf_examples() {
    assert!((cadf_closed(0.0, -0.3, 16).unwrap() - 8.5).abs() < 1e-14);
    assert!((cadf_closed(1.0, -0.25, 16).unwrap() - 16.0).abs() < 1e-10);
    assert!((cadf_closed(-1.0, -0.25, 16).unwrap() - 1.0).abs() < 1e-10);
    assert!(cadf_closed(1.2, -0.25, 16).is_err());
}

#[test]
fn position_examples() {
    assert!(positions_closed(8.5, -0.25, 16).unwrap().abs() < 1e-14);
    assert!((positions_closed(12.0, -0.25, 16).unwrap() - 0.669131).abs() < 1e-4);
    assert!(positions_closed(0.5, -0.25, 16).is_err());
    assert!(positions_closed(17.0, -0.25, 16).is_err());
    let ula = uniform_apf(16).unwrap();
    let flat = closed_form_placement(0.0, 16).unwrap();
    for (a, b) in flat.positions().iter().zip(ula.positions()) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn closed_positions_match_numeric_pipeline() {
    for alpha in [-0.375, -0.25] {
        let numeric = discretize_adf(&simplified_adf(alpha, 16).unwrap(), 16).unwrap();
        for (k, &p) in numeric.positions().iter().enumerate() {
            let closed = positions_closed((k + 1) as f64, alpha, 16).unwrap();
            assert!((closed - p).abs() < 1e-4, "alpha = {alpha}, m = {}: {closed} vs {p}", k + 1);
        }
    }
}

#[test]
fn extreme_order_collapses_onto_endpoints() {
    assert!(closed_form_placement(-0.49, 64).is_err());
}

#[test]
fn rate_improves_as_order_decreases() {
    let (tx, rx) = arrays(64, 4, 3.0);
    let rate = |alpha: f64| {
        let p = closed_form_placement(alpha, 64).unwrap();
        achievable_rate_discrete(&channel_matrix(&p, &tx, &rx, &los()).unwrap(), RHO).unwrap()
    };
    let (r375, r25, r0) = (rate(-0.375), rate(-0.25), rate(0.0));
    assert!(r375 >= r25 && r25 >= r0 - 1e-3, "{r375} {r25} {r0}");
}

// Below α ≈ −0.4 the outer positions sit closer to ±1 than a double can
// resolve (1 − p² underflows), so the domain stops there.
proptest! {
    #[test]
    fn cadf_round_trip(alpha in -0.4f64..0.0, m in 2usize..200, t in 0.0f64..1.0) {
        let index = 1.0 + t * (m - 1) as f64;
        let p = positions_closed(index, alpha, m).unwrap();
        prop_assert!((-1.0..=1.0).contains(&p));
        prop_assert!((cadf_closed(p, alpha, m).unwrap() - index).abs() < 1e-8 * m as f64);
    }

    #[test]
    fn closed_placement_is_symmetric(alpha in -0.4f64..0.0, m in 2usize..100) {
        let p = closed_form_placement(alpha, m).unwrap();
        prop_assert!(p.endpoint_pinned());
        for k in 0..m {
            prop_assert!((p.positions()[k] + p.positions()[m - 1 - k]).abs() < 1e-10);
        }
    }
}

mod common;

use adiaprep_core::analyze::{
    diagnose_anticommuting, diagnose_general, oscillation_stats, oscillation_stats_for, predicted_series,
    relation, solve_beta_sq, transition_scale, OperatorRelation,
};
use adiaprep_core::evolve::decompose;
use adiaprep_core::measure::hold_series;
use adiaprep_core::model::{model_one, model_two};
use adiaprep_core::{Channel, Error, HoldOptions, HoldPropagation, ModelSpec, ShotSampler, StateVector};
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
use proptest::prelude::*;
use rand::Rng;

use common::{rng, superposition};

/// Hold over `periods` whole periods at 32 samples per period.
fn opts(spec: &ModelSpec, periods: f64, shots: u64) -> HoldOptions {
    let period = 2.0 * PI / spec.oscillation_frequency();
    HoldOptions {
        start_time: 36.0,
        duration: periods * period,
        sample_dt: period / 32.0,
        shots,
        propagation: HoldPropagation::Exact,
    }
}

fn prepared(spec: &ModelSpec, b2: f64, theta: f64) -> StateVector {
    superposition(&spec.reference_ground_state, &spec.reference_excited_state, b2, theta)
}

#[test]
fn synthetic_excitations_are_recovered() {
    let mut r = rng(2024);
    let sampler = ShotSampler::new(0);
    for k in 0..1000 {
        let j = if k % 2 == 0 { 1.0 } else { FRAC_PI_4 };
        let two = k % 4 >= 2;
        let spec = if two { model_two(j).unwrap() } else { model_one(j).unwrap() };
        let b2 = r.random_range(0.0..0.05);
        let theta = r.random_range(-PI..PI);
        let z = spec.observable("Z").unwrap();
        let s = hold_series(&prepared(&spec, b2, theta), &spec, z, &opts(&spec, 5.0, 0), &sampler).unwrap();
        let stats = oscillation_stats(&s, spec.oscillation_frequency()).unwrap();
        let diag = if two {
            diagnose_general(&stats, transition_scale(&spec, z)).unwrap()
        } else {
            diagnose_anticommuting(&stats).unwrap()
        };
        let err = (diag.beta_sq - b2).abs() / b2.max(1e-12);
        assert!(err < 1e-4, "case {k}: beta^2 {b2}, recovered {}", diag.beta_sq);
    }
}

#[test]
fn correction_moves_toward_the_reference() {
    let spec = model_two(FRAC_PI_4).unwrap();
    let z = spec.observable("Z").unwrap();
    for &b2 in &[1e-4, 1e-3, 1e-2, 0.05] {
        let s = hold_series(&prepared(&spec, b2, 0.4), &spec, z, &opts(&spec, 4.0, 0), &ShotSampler::new(0)).unwrap();
        let stats = oscillation_stats(&s, spec.oscillation_frequency()).unwrap();
        let diag = diagnose_general(&stats, 1.0).unwrap().with_reference(FRAC_1_SQRT_2);
        assert_eq!(diag.improved(), Some(true));
        assert!((diag.corrected_value - FRAC_1_SQRT_2).abs() < 1e-10);
        assert!((diag.raw_average - FRAC_1_SQRT_2 * (1.0 - 2.0 * b2)).abs() < 1e-10);
    }
}

#[test]
fn anticommuting_prediction_matches_conserved_observable() {
    let spec = model_one(1.0).unwrap();
    let v = prepared(&spec, 0.02, -1.1);
    let o = opts(&spec, 6.0, 0);
    let z = hold_series(&v, &spec, spec.observable("Z").unwrap(), &o, &ShotSampler::new(0)).unwrap();
    let mx = hold_series(&v, &spec, spec.observable("-X").unwrap(), &o, &ShotSampler::new(0)).unwrap();
    let diag = diagnose_anticommuting(&oscillation_stats(&z, 2.0).unwrap()).unwrap();
    assert!((diag.predicted_conserved.unwrap() - mx.exact_values[0]).abs() < 1e-12);
    assert!(diag.raw_average.abs() < 1e-12);
}

#[test]
fn predicted_series_matches_simulated_hold() {
    let mut r = rng(8);
    for spec in [model_one(1.0).unwrap(), model_two(FRAC_PI_4).unwrap()] {
        for _ in 0..10 {
            let v = prepared(&spec, r.random_range(0.0..0.1), r.random_range(-PI..PI));
            let dec = decompose(&v, &spec).unwrap();
            for o in &spec.observables {
                let s = hold_series(&v, &spec, o, &opts(&spec, 3.0, 0), &ShotSampler::new(0)).unwrap();
                let p = predicted_series(&dec, &spec, o.label(), s.times.clone(), s.origin).unwrap();
                for (a, b) in s.exact_values.iter().zip(&p.exact_values) {
                    assert!((a - b).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn shortcut_differs_from_root_by_beta_to_the_fourth() {
    for &b2 in &[0.0, 1e-6, 1e-4, 1e-2, 0.05, 0.2] {
        let ab2 = b2 * (1.0 - b2);
        let root = solve_beta_sq(ab2).unwrap();
        assert!((root - b2).abs() < 1e-15);
        assert!((b2 - ab2 - b2 * b2).abs() < 1e-15);
    }
    assert!(matches!(solve_beta_sq(0.25), Err(Error::NoValidRoot { .. })));
    assert!(solve_beta_sq(-1e-3).is_err());
}

#[test]
fn relations_of_preset_observables() {
    let one = model_one(1.0).unwrap();
    assert_eq!(relation(&one, one.observable("Z").unwrap()), OperatorRelation::AntiCommuting);
    assert_eq!(relation(&one, one.observable("-X").unwrap()), OperatorRelation::Commuting);
    let two = model_two(FRAC_PI_4).unwrap();
    let z = two.observable("Z").unwrap();
    assert_eq!(relation(&two, z), OperatorRelation::General);
    assert!((transition_scale(&two, z) - 1.0).abs() < 1e-12);
    assert!((transition_scale(&one, one.observable("Z").unwrap()) - 2.0).abs() < 1e-12);
}

#[test]
fn noise_floor_is_subtracted() {
    let spec = model_two(FRAC_PI_4).unwrap();
    let z = spec.observable("Z").unwrap();
    let b2 = 2e-3;
    let s = hold_series(&prepared(&spec, b2, 0.0), &spec, z, &opts(&spec, 25.0, 100_000), &ShotSampler::new(3))
        .unwrap();
    let stats = oscillation_stats_for(&s, spec.oscillation_frequency(), Channel::Sampled).unwrap();
    assert!(stats.noise_variance > 0.0);
    let diag = diagnose_general(&stats, 1.0).unwrap();
    // 800 points at 1e5 shots: variance estimate good to a few percent of b2.
    assert!((diag.beta_sq - b2).abs() < 0.1 * b2, "recovered {}", diag.beta_sq);
}

#[test]
fn short_or_coarse_windows_are_rejected() {
    let spec = model_one(1.0).unwrap();
    let v = prepared(&spec, 0.01, 0.0);
    let z = spec.observable("Z").unwrap();
    let mut o = opts(&spec, 0.5, 0);
    let s = hold_series(&v, &spec, z, &o, &ShotSampler::new(0)).unwrap();
    assert!(matches!(oscillation_stats(&s, 2.0), Err(Error::WindowTooShort { .. })));
    o.duration = 10.0;
    o.sample_dt = 0.25;
    let s = hold_series(&v, &spec, z, &o, &ShotSampler::new(0)).unwrap();
    assert!(matches!(oscillation_stats(&s, 2.0), Err(Error::TooFewSamples { .. })));
}

proptest! {
    #[test]
    fn window_variance_is_phase_independent(b2 in 1e-5f64..0.05, theta in -3.0f64..3.0) {
        let spec = model_one(1.0).unwrap();
        let z = spec.observable("Z").unwrap();
        let s = hold_series(&prepared(&spec, b2, theta), &spec, z, &opts(&spec, 2.0, 0), &ShotSampler::new(0)).unwrap();
        let stats = oscillation_stats(&s, 2.0).unwrap();
        prop_assert!((stats.variance - 2.0 * b2 * (1.0 - b2)).abs() < 1e-13);
        prop_assert!(stats.peak_to_peak <= 4.0 * (b2 * (1.0 - b2)).sqrt() + 1e-12);
    }
}

mod common;

use adiaprep_core::linalg::{expm_minus_i, ComplexMatrix};
use adiaprep_core::measure::{expectation, heisenberg_z_closed_form, hold_series, sample_estimate};
use adiaprep_core::model::{model_one, model_two, Pauli};
use adiaprep_core::{HoldOptions, HoldPropagation, ShotSampler, StateVector, C64};
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use rand::Rng;

use common::{rng, superposition};

fn hold(start: f64, duration: f64, dt: f64, shots: u64) -> HoldOptions {
    HoldOptions { start_time: start, duration, sample_dt: dt, shots, propagation: HoldPropagation::Exact }
}

#[test]
fn heisenberg_z_matches_numerical_conjugation() {
    let j = FRAC_PI_4;
    let h = Pauli::H.matrix().scale_real(-j);
    let z = Pauli::Z.matrix();
    let mut r = rng(3);
    for _ in 0..100 {
        let t = r.random_range(0.0..20.0);
        let u = expm_minus_i(&h, t).unwrap();
        let numeric = &(&u.adjoint() * &z) * &u;
        let closed = heisenberg_z_closed_form(t, j);
        assert!(numeric.max_abs_diff(closed.matrix()) < 1e-10, "t = {t}");
    }
}

#[test]
fn hold_series_matches_closed_forms() {
    let mut r = rng(4);
    for _ in 0..10 {
        let b2 = r.random_range(0.0..0.5);
        let theta = r.random_range(-PI..PI);

        let one = model_one(1.0).unwrap();
        let v = superposition(&one.reference_ground_state, &one.reference_excited_state, b2, theta);
        let ab = ((1.0 - b2) * b2).sqrt();
        let z = one.observable("Z").unwrap();
        let s = hold_series(&v, &one, z, &hold(36.0, 10.0, 0.125, 0), &ShotSampler::new(0)).unwrap();
        for (tau, x) in s.relative_times().zip(&s.exact_values) {
            assert!((x - 2.0 * ab * (2.0 * tau + theta).cos()).abs() < 1e-10);
        }
        let mx = one.observable("-X").unwrap();
        let s = hold_series(&v, &one, mx, &hold(36.0, 10.0, 0.125, 0), &ShotSampler::new(0)).unwrap();
        for x in &s.exact_values {
            assert!((x - (-1.0 + 2.0 * b2)).abs() < 1e-12);
        }

        let two = model_two(FRAC_PI_4).unwrap();
        let v = superposition(&two.reference_ground_state, &two.reference_excited_state, b2, theta);
        let z = two.observable("Z").unwrap();
        let s = hold_series(&v, &two, z, &hold(36.0, 10.0, 1.0 / 24.0, 0), &ShotSampler::new(0)).unwrap();
        assert_eq!(s.len(), 241);
        for (tau, x) in s.relative_times().zip(&s.exact_values) {
            let want = FRAC_1_SQRT_2 * (1.0 - 2.0 * b2) + SQRT_2 * ab * (FRAC_PI_2 * tau + theta).cos();
            assert!((x - want).abs() < 1e-10);
        }
    }
}

#[test]
fn trotter_hold_tracks_exact_hold() {
    let two = model_two(FRAC_PI_4).unwrap();
    let v = superposition(&two.reference_ground_state, &two.reference_excited_state, 0.1, 0.3);
    let z = two.observable("Z").unwrap();
    let mut opts = hold(0.0, 4.0, 1.0 / 96.0, 0);
    let exact = hold_series(&v, &two, z, &opts, &ShotSampler::new(0)).unwrap();
    opts.propagation = HoldPropagation::Trotter2;
    let split = hold_series(&v, &two, z, &opts, &ShotSampler::new(0)).unwrap();
    let err = exact.exact_values.iter().zip(&split.exact_values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err > 0.0 && err < 1e-3, "max deviation {err}");
}

#[test]
fn spectrum_peaks_at_twice_the_coupling() {
    let j = 1.0;
    let one = model_one(j).unwrap();
    let v = superposition(&one.reference_ground_state, &one.reference_excited_state, 0.05, 0.9);
    let z = one.observable("Z").unwrap();
    let dt = 0.125;
    let s = hold_series(&v, &one, z, &hold(0.0, 355.0, dt, 0), &ShotSampler::new(0)).unwrap();
    let n = s.len();
    let mean = s.exact_values.iter().sum::<f64>() / n as f64;
    let power = |k: usize| {
        let w = 2.0 * PI * k as f64 / n as f64;
        s.exact_values
            .iter()
            .enumerate()
            .map(|(m, x)| C64::from_polar(x - mean, -w * m as f64))
            .sum::<C64>()
            .norm_sqr()
    };
    let peak = (1..n / 2).max_by(|&a, &b| power(a).total_cmp(&power(b))).unwrap();
    let peak_omega = 2.0 * PI * peak as f64 / (n as f64 * dt);
    let bin = 2.0 * PI / (n as f64 * dt);
    assert!((peak_omega - 2.0 * j).abs() <= bin, "peak at {peak_omega}");
}

#[test]
fn shot_estimates_are_unbiased() {
    let v = StateVector::normalized(vec![C64::new(0.8, 0.0), C64::new(0.3, 0.5)]).unwrap();
    let z = Pauli::Z.operator();
    let truth = expectation(&v, &z).unwrap();
    let root = ShotSampler::new(17);
    let runs = 400;
    let shots = 10_000;
    let means: Vec<f64> = (0..runs)
        .map(|k| sample_estimate(&v, &z, shots, &mut root.for_point(k)).unwrap().mean)
        .collect();
    let grand = means.iter().sum::<f64>() / runs as f64;
    let sd = ((1.0 - truth * truth) / shots as f64).sqrt();
    // Grand mean of 400 runs: standard error sd / 20.
    assert!((grand - truth).abs() < 4.0 * sd / 20.0, "{grand} vs {truth}");
    let spread = (means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (runs - 1) as f64).sqrt();
    assert!((spread / sd - 1.0).abs() < 0.15);
}

#[test]
fn stderr_of_balanced_state() {
    // |h+> gives <Z> = 1/sqrt2, so the per-shot variance is 1/2.
    let two = model_two(FRAC_PI_4).unwrap();
    let z = two.observable("Z").unwrap();
    let est = sample_estimate(&two.reference_ground_state, z, 1_000_000, &mut ShotSampler::new(1)).unwrap();
    assert!((est.stderr - 7.07e-4).abs() < 1e-5, "stderr {}", est.stderr);
    assert!((est.mean - FRAC_1_SQRT_2).abs() < 5.0 * est.stderr);
}

#[test]
fn sampling_is_reproducible_and_seed_sensitive() {
    let one = model_one(1.0).unwrap();
    let v = superposition(&one.reference_ground_state, &one.reference_excited_state, 0.01, 0.2);
    let z = one.observable("Z").unwrap();
    let opts = hold(36.0, 4.0, 0.125, 1000);
    let a = hold_series(&v, &one, z, &opts, &ShotSampler::new(9)).unwrap();
    let b = hold_series(&v, &one, z, &opts, &ShotSampler::new(9)).unwrap();
    let c = hold_series(&v, &one, z, &opts, &ShotSampler::new(10)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.sampled_values, c.sampled_values);
    assert_eq!(a.exact_values, c.exact_values);
}

#[test]
fn counts_sum_to_shots() {
    let mut s = ShotSampler::new(5);
    for probs in [vec![0.25, 0.25, 0.5], vec![1.0, 0.0], vec![0.0, 0.0, 1.0, 0.0], vec![0.1; 10]] {
        let counts = s.sample_counts(&probs, 12345);
        assert_eq!(counts.iter().sum::<u64>(), 12345);
        for (c, p) in counts.iter().zip(&probs) {
            if *p == 0.0 {
                assert_eq!(*c, 0);
            }
        }
    }
}

#[test]
fn expectation_rejects_dimension_mismatch() {
    let big = ComplexMatrix::identity(4);
    let o = adiaprep_core::HermitianOperator::new(big, "I4").unwrap();
    let v = StateVector::basis(2, 0).unwrap();
    assert!(expectation(&v, &o).is_err());
}

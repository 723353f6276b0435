use adiaprep_core::model::{hamiltonian_at, model_one, model_two, spectral_gap_at};
use adiaprep_core::{AdiabaticSchedule, ModelSpec, Preset};
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, SQRT_2};

fn presets() -> Vec<ModelSpec> {
    vec![model_one(1.0).unwrap(), model_two(FRAC_PI_4).unwrap(), model_one(0.3).unwrap()]
}

#[test]
fn gap_stays_open_along_the_sweep() {
    let sched = AdiabaticSchedule::linear(1.0, 0.01).unwrap();
    for spec in presets() {
        let j = spec.coupling;
        for k in 0..=100 {
            let s = k as f64 / 100.0;
            let gap = spectral_gap_at(&spec, &sched, s).unwrap();
            assert!(gap > 0.9 * SQRT_2 * j, "gap {gap} at s = {s}");
            // Both Hamiltonians are -J n.sigma, so the gap is 2J|n| with
            // n.n = (1-s)^2 + s^2 + 2 s (1-s) cos(angle between Z and HT).
            let c = if spec.preset == Some(Preset::ModelTwo) { FRAC_1_SQRT_2 } else { 0.0 };
            let closed = 2.0 * j * ((1.0 - s).powi(2) + s * s + 2.0 * s * (1.0 - s) * c).sqrt();
            assert!((gap - closed).abs() < 1e-12, "s = {s}: {gap} vs {closed}");
        }
    }
}

#[test]
fn reference_ground_state_is_an_eigenvector() {
    for spec in presets() {
        let es = spec.target_spectrum();
        let g = spec.reference_ground_state.amplitudes();
        let hg = spec.target.matrix().apply(g).unwrap();
        for (a, b) in hg.iter().zip(g) {
            assert!((a - b * es.eigenvalues[0]).norm() < 1e-12);
        }
        assert!((es.eigenvalues[0] + spec.coupling).abs() < 1e-12);
        let e = spec.reference_excited_state.amplitudes();
        let he = spec.target.matrix().apply(e).unwrap();
        for (a, b) in he.iter().zip(e) {
            assert!((a - b * es.eigenvalues[1]).norm() < 1e-12);
        }
    }
}

#[test]
fn interpolation_is_affine() {
    let sched = AdiabaticSchedule::linear(36.0, 0.125).unwrap();
    for spec in presets() {
        let h0 = hamiltonian_at(&spec, &sched, 0.0).unwrap();
        let diff = spec.target.matrix() - spec.initial.matrix();
        for k in 0..=36 {
            let t = k as f64;
            let s = t / 36.0;
            let ht = hamiltonian_at(&spec, &sched, t).unwrap();
            let lhs = ht.matrix() - h0.matrix();
            assert!(lhs.max_abs_diff(&diff.scale_real(s)) < 1e-14);
        }
    }
}

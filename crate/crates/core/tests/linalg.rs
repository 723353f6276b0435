mod common;

use adiaprep_core::linalg::{eig_hermitian, expm_minus_i, ComplexMatrix};
use adiaprep_core::C64;
use proptest::prelude::*;

use common::{random_hermitian, random_state, random_unitary, rng};

#[test]
fn planted_spectrum_is_recovered() {
    let mut r = rng(20240917);
    let u = random_unitary(&mut r, 4);
    let lambdas = [-1.3, -0.2, 0.45, 2.0];
    let d = ComplexMatrix::diagonal(&lambdas.map(|l| C64::new(l, 0.0)));
    let m = &(&u * &d) * &u.adjoint();
    // Round-trip through V diag V^dagger.
    let es = eig_hermitian(&m).unwrap();
    for (got, want) in es.eigenvalues.iter().zip(lambdas) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
    assert!(es.reconstruct().max_abs_diff(&m) < 1e-10);
    assert!(es.eigenvectors.is_unitary(1e-10));
}

#[test]
fn eigensolver_is_deterministic() {
    let mut r = rng(5);
    let m = random_hermitian(&mut r, 6);
    assert_eq!(eig_hermitian(&m).unwrap(), eig_hermitian(&m).unwrap());
}

#[test]
fn larger_dimension_converges() {
    let mut r = rng(77);
    let m = random_hermitian(&mut r, 32);
    let es = eig_hermitian(&m).unwrap();
    assert!(es.reconstruct().max_abs_diff(&m) < 1e-10);
    assert!(es.eigenvectors.is_unitary(1e-10));
}

#[test]
fn degenerate_planted_spectrum_keeps_invariants() {
    let mut r = rng(99);
    let u = random_unitary(&mut r, 4);
    let d = ComplexMatrix::diagonal(&[-1.0, 0.5, 0.5, 0.5].map(|l| C64::new(l, 0.0)));
    let m = &(&u * &d) * &u.adjoint();
    let es = eig_hermitian(&m).unwrap();
    assert!(es.reconstruct().max_abs_diff(&m) < 1e-10);
    assert!(es.eigenvectors.is_unitary(1e-10));
    // Each column's first significant component is real and positive.
    for k in 0..4 {
        let v = es.eigenvector(k);
        let pivot = v.iter().find(|z| z.norm() > 1e-9).unwrap();
        assert!(pivot.im.abs() < 1e-15 && pivot.re > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_invariants(seed in any::<u64>(), dim in 1usize..7) {
        let m = random_hermitian(&mut rng(seed), dim);
        let es = eig_hermitian(&m).unwrap();
        prop_assert!(es.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(es.eigenvectors.is_unitary(1e-10));
        prop_assert!(es.reconstruct().max_abs_diff(&m) < 1e-10);
    }

    #[test]
    fn exponential_composes(seed in any::<u64>(), dim in 1usize..5, s in -5.0f64..5.0, t in -5.0f64..5.0) {
        let m = random_hermitian(&mut rng(seed), dim);
        let lhs = expm_minus_i(&m, s + t).unwrap();
        let rhs = &expm_minus_i(&m, s).unwrap() * &expm_minus_i(&m, t).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        prop_assert!(lhs.is_unitary(1e-10));
    }

    #[test]
    fn evolution_preserves_norm(seed in any::<u64>(), dim_log in 0u32..4, t in -20.0f64..20.0) {
        let dim = 1usize << dim_log;
        let mut r = rng(seed);
        let m = random_hermitian(&mut r, dim);
        let v = random_state(&mut r, dim);
        let out = expm_minus_i(&m, t).unwrap().apply(v.amplitudes()).unwrap();
        let n = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!((n - 1.0).abs() < 1e-12);
    }
}

#![allow(dead_code)]

use adiaprep_core::{ComplexMatrix, StateVector, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = C64::new(rng.random_range(-2.0..2.0), 0.0);
        for j in (i + 1)..dim {
            let z = random_complex(rng);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Gram-Schmidt on random columns.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::new();
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| random_complex(rng)).collect();
        for c in &cols {
            let proj: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= proj * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    let mut u = ComplexMatrix::zeros(dim);
    for (j, c) in cols.iter().enumerate() {
        for (i, &z) in c.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    u
}

pub fn random_state(rng: &mut impl Rng, dim: usize) -> StateVector {
    StateVector::normalized((0..dim).map(|_| random_complex(rng)).collect()).unwrap()
}

/// `alpha |g> + beta |e>` with `|beta|^2 = beta_sq` and `arg(alpha beta*) = theta`.
pub fn superposition(g: &StateVector, e: &StateVector, beta_sq: f64, theta: f64) -> StateVector {
    let alpha = (1.0 - beta_sq).sqrt();
    let beta = C64::from_polar(beta_sq.sqrt(), -theta);
    let amps = g
        .amplitudes()
        .iter()
        .zip(e.amplitudes())
        .map(|(a, b)| a * alpha + b * beta)
        .collect();
    StateVector::new(amps).unwrap()
}

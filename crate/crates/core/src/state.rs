use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, C64, MAX_DIM, ONE, ZERO};

/// Accepted deviation of `||v||` from one.
pub const NORM_TOL: f64 = 1e-10;

/// A normalized amplitude vector over `2^n` basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Wraps `amplitudes`, which must already be normalized.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        check_len(amplitudes.len())?;
        let n = linalg::norm(&amplitudes);
        if !n.is_finite() || (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        check_len(amplitudes.len())?;
        let n = linalg::norm(&amplitudes);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NotNormalized { norm: n });
        }
        amplitudes.iter_mut().for_each(|z| *z /= n);
        Ok(Self { amplitudes })
    }

    /// Computational basis state `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_len(dim)?;
        if index >= dim {
            return Err(invalid("index", alloc::format!("{index} out of range for dimension {dim}")));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Self { amplitudes })
    }

    /// Unitary images of normalized states skip the norm check.
    pub(crate) fn from_unitary_image(amplitudes: Vec<C64>) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn num_qubits(&self) -> u32 {
        self.amplitudes.len().trailing_zeros()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amplitudes)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        linalg::inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Euclidean distance `||self - other||`, sensitive to global phase.
    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl Index<usize> for StateVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.amplitudes[i]
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 || !len.is_power_of_two() || len > MAX_DIM {
        return Err(invalid(
            "amplitudes",
            alloc::format!("length {len} is not a power of two in [1, {MAX_DIM}]"),
        ));
    }
    Ok(())
}

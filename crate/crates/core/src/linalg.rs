//! Dense complex linear algebra.
//!
//! Matrices are small (the built-in models are 2x2, the ceiling is 2^12), so
//! everything is a flat row-major `Vec`. Hermitian eigendecomposition uses
//! cyclic complex Jacobi rotations; unitaries are assembled spectrally as
//! `V diag(exp(-i lambda t)) V^dagger`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{invalid, Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Largest supported dimension (12 qubits).
pub const MAX_DIM: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from a row-major entry list of length `dim * dim`.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dim", "must be at least 1"));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        if let Some(bad) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("entries", alloc::format!("entry {bad} is not finite")));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(dim, data)
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let complex: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, k: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * k).collect() }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * k).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|m_ij - conj(m_ji)|` and where it occurs.
    pub fn hermiticity_defect(&self) -> (f64, usize, usize) {
        let n = self.dim;
        let mut worst = (0.0, 0, 0);
        for i in 0..n {
            for j in i..n {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > worst.0 {
                    worst = (d, i, j);
                }
            }
        }
        worst
    }

    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        let (defect, row, col) = self.hermiticity_defect();
        if defect > tol {
            return Err(Error::NonHermitian { row, col, defect });
        }
        Ok(())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim)) <= tol
    }

    /// Commutator `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Anticommutator `self * other + other * self`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &[C64]) -> Vec<C64> {
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `<u| self |v>`.
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        let mv = self.apply_unchecked(v);
        inner(u, &mv)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// `<u|v>`, conjugate-linear in `u`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Matrix-vector product, rejecting mismatched dimensions.
pub fn apply(m: &ComplexMatrix, v: &[C64]) -> Result<Vec<C64>> {
    m.apply(v)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiConfig {
    /// Max `|m - m^dagger|` accepted as Hermitian.
    pub hermitian_tol: f64,
    /// Stop once off-diagonal Frobenius mass drops below this times `||m||_F`.
    pub relative_tol: f64,
    pub max_sweeps: usize,
    /// Eigenvalues closer than this (relative to the spectral scale) are
    /// treated as degenerate when ordering eigenvectors.
    pub degeneracy_tol: f64,
    /// Components below this modulus are skipped when picking the pivot that
    /// fixes an eigenvector's phase.
    pub pivot_tol: f64,
}

impl Default for JacobiConfig {
    fn default() -> Self {
        Self {
            hermitian_tol: 1e-12,
            relative_tol: 1e-14,
            max_sweeps: 100,
            degeneracy_tol: 1e-10,
            pivot_tol: 1e-9,
        }
    }
}

/// Eigenvalues ascending, eigenvectors as the matching columns.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d: Vec<C64> = self.eigenvalues.iter().map(|&l| C64::new(l, 0.0)).collect();
        self.spectral_map(&d)
    }

    /// `exp(-i m t)`.
    pub fn exp_minus_i(&self, t: f64) -> ComplexMatrix {
        if t == 0.0 {
            return ComplexMatrix::identity(self.dim());
        }
        let phases: Vec<C64> = self.eigenvalues.iter().map(|&l| C64::cis(-l * t)).collect();
        self.spectral_map(&phases)
    }

    /// Applies `exp(-i m t)` to `v` in O(n^2) without forming the unitary.
    pub fn apply_exp_minus_i(&self, t: f64, v: &[C64]) -> Vec<C64> {
        let coeffs = self.coefficients(v);
        let n = self.dim();
        let mut out = vec![ZERO; n];
        for (k, (&c, &l)) in coeffs.iter().zip(&self.eigenvalues).enumerate() {
            let c = c * C64::cis(-l * t);
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.eigenvectors[(i, k)] * c;
            }
        }
        out
    }

    /// Coordinates of `v` in the eigenbasis, `<phi_k|v>`.
    pub fn coefficients(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim();
        (0..n)
            .map(|k| (0..n).map(|i| self.eigenvectors[(i, k)].conj() * v[i]).sum())
            .collect()
    }

    fn spectral_map(&self, d: &[C64]) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n).map(|k| v[(i, k)] * d[k] * v[(j, k)].conj()).sum();
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix with default tolerances.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<EigenSystem> {
    eig_hermitian_with(m, &JacobiConfig::default())
}

pub fn eig_hermitian_with(m: &ComplexMatrix, cfg: &JacobiConfig) -> Result<EigenSystem> {
    m.check_hermitian(cfg.hermitian_tol)?;
    let n = m.dim();
    if n > MAX_DIM {
        return Err(invalid("dim", alloc::format!("{n} exceeds the supported maximum {MAX_DIM}")));
    }

    // Symmetrize so rounding-level asymmetry does not leak into the rotations.
    let mut a = ComplexMatrix::zeros(n);
    for i in 0..n {
        a[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm();
    let threshold = cfg.relative_tol * scale;
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold || scale == 0.0 {
            break;
        }
        if sweeps == cfg.max_sweeps {
            return Err(Error::NoConvergence { sweeps, off_diagonal: off });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                rotated |= rotate(&mut a, &mut v, p, q);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigenvalues[i].total_cmp(&eigenvalues[j]));

    // Within a degenerate cluster, order columns by their first significant
    // component so the output does not depend on rotation history.
    let spread = eigenvalues.iter().fold(0.0f64, |acc, l| acc.max(l.abs())).max(1.0);
    let pivots: Vec<usize> = (0..n)
        .map(|k| (0..n).find(|&i| v[(i, k)].norm() > cfg.pivot_tol).unwrap_or(n))
        .collect();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n
            && eigenvalues[order[end]] - eigenvalues[order[end - 1]] <= cfg.degeneracy_tol * spread
        {
            end += 1;
        }
        order[start..end].sort_by_key(|&k| pivots[k]);
        start = end;
    }

    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        let phase = if pivots[src] < n {
            let c = v[(pivots[src], src)];
            c.conj() / c.norm()
        } else {
            ONE
        };
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)] * phase;
        }
    }
    eigenvalues = order.iter().map(|&k| eigenvalues[k]).collect();

    Ok(EigenSystem { eigenvalues, eigenvectors: vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Annihilates `a[p][q]` with the unitary `G = D R`, where `D` removes the
/// phase of `a[p][q]` and `R` is the real Jacobi rotation of the resulting
/// real symmetric 2x2 block. Returns whether a rotation was applied.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) -> bool {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return false;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Below rounding level relative to the diagonal: drop it instead of rotating.
    if r <= f64::EPSILON * 0.5 * (app.abs() + aqq.abs()) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return false;
    }

    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let e = apq / r; // e^{i phi}
    let e_conj = e.conj();

    let n = a.dim();
    // A <- A G
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * c - aiq * e_conj * s;
        a[(i, q)] = aip * s + aiq * e_conj * c;
    }
    // A <- G^dagger A
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = apj * c - aqj * e * s;
        a[(q, j)] = apj * s + aqj * e * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    // V <- V G
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * c - viq * e_conj * s;
        v[(i, q)] = vip * s + viq * e_conj * c;
    }
    true
}

/// `exp(-i m t)` for Hermitian `m`.
pub fn expm_minus_i(m: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !t.is_finite() {
        return Err(invalid("t", "must be finite"));
    }
    if t == 0.0 {
        m.check_hermitian(JacobiConfig::default().hermitian_tol)?;
        return Ok(ComplexMatrix::identity(m.dim()));
    }
    Ok(eig_hermitian(m)?.exp_minus_i(t))
}

//! Expectation values, shot sampling, and the hold-phase time series.
//!
//! Shot noise is drawn from the full eigenvalue distribution of the observable:
//! the state is projected onto the observable's eigenbasis and the outcome
//! counts are multinomial over the Born probabilities. Counts are drawn as a
//! chain of conditional binomials, which matches per-shot sampling in
//! distribution at a cost independent of the shot count.
//!
//! Seeding: a [`ShotSampler`] owns one ChaCha stream. Sub-samplers are derived
//! deterministically, by observable label ([`ShotSampler::derive`]) and by
//! time-point index ([`ShotSampler::for_point`]), so every point of a series
//! has its own reproducible stream regardless of evaluation order.

use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{invalid, Error, Result};
use crate::linalg::{ComplexMatrix, EigenSystem, C64};
use crate::model::{HermitianOperator, ModelSpec, Pauli};
use crate::state::StateVector;

/// `<v| o |v>`.
pub fn expectation(v: &StateVector, o: &HermitianOperator) -> Result<f64> {
    if v.dim() != o.dim() {
        return Err(Error::DimensionMismatch { expected: o.dim(), found: v.dim() });
    }
    let z = o.matrix().sandwich(v.amplitudes(), v.amplitudes());
    if z.im.abs() > 1e-12 {
        return Err(Error::ImaginaryExpectation { imag: z.im });
    }
    Ok(z.re)
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

#[derive(Clone, Debug)]
pub struct ShotSampler {
    seed: u64,
    rng: ChaCha8Rng,
}

impl ShotSampler {
    pub fn new(seed: u64) -> Self {
        Self { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream for a named observable.
    pub fn derive(&self, label: &str) -> Self {
        Self::new(mix64(self.seed ^ mix64(fnv1a(label.as_bytes()))))
    }

    /// Independent stream for time point `index`.
    pub fn for_point(&self, index: u64) -> Self {
        Self::new(mix64(mix64(self.seed).wrapping_add(index)))
    }

    /// Multinomial outcome counts for `shots` draws from `probs`.
    pub fn sample_counts(&mut self, probs: &[f64], shots: u64) -> Vec<u64> {
        let mut counts = alloc::vec![0u64; probs.len()];
        let mut remaining = shots;
        let mut mass: f64 = probs.iter().sum();
        for (k, &p) in probs.iter().enumerate() {
            if remaining == 0 {
                break;
            }
            if k + 1 == probs.len() {
                counts[k] = remaining;
                break;
            }
            let q = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 1.0 };
            let n = if q >= 1.0 {
                remaining
            } else if q <= 0.0 {
                0
            } else {
                Binomial::new(remaining, q).expect("q in (0, 1)").sample(&mut self.rng)
            };
            counts[k] = n;
            remaining -= n;
            mass -= p;
        }
        counts
    }
}

/// Sample mean of an observable and its estimated standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShotEstimate {
    pub mean: f64,
    /// `sqrt(sample variance / shots)`.
    pub stderr: f64,
    pub shots: u64,
}

/// An observable's eigenbasis, prepared once for repeated sampling.
#[derive(Clone, Debug)]
pub struct MeasurementBasis {
    spectrum: EigenSystem,
}

impl MeasurementBasis {
    pub fn new(o: &HermitianOperator) -> Result<Self> {
        Ok(Self { spectrum: o.eigensystem()? })
    }

    /// Born probabilities over the eigenvectors, renormalized to sum to one.
    pub fn probabilities(&self, v: &StateVector) -> Vec<f64> {
        let mut p: Vec<f64> =
            self.spectrum.coefficients(v.amplitudes()).iter().map(|c| c.norm_sqr()).collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        p
    }

    pub fn sample(&self, v: &StateVector, shots: u64, sampler: &mut ShotSampler) -> Result<ShotEstimate> {
        if shots == 0 {
            return Err(invalid("shots", "must be at least 1"));
        }
        if v.dim() != self.spectrum.dim() {
            return Err(Error::DimensionMismatch { expected: self.spectrum.dim(), found: v.dim() });
        }
        let counts = sampler.sample_counts(&self.probabilities(v), shots);
        let n = shots as f64;
        let (mut s1, mut s2) = (0.0, 0.0);
        for (&c, &l) in counts.iter().zip(&self.spectrum.eigenvalues) {
            s1 += c as f64 * l;
            s2 += c as f64 * l * l;
        }
        let mean = s1 / n;
        let var = (s2 / n - mean * mean).max(0.0);
        Ok(ShotEstimate { mean, stderr: (var / n).sqrt(), shots })
    }
}

/// Shot-noise estimate of `<v| o |v>` from `shots` projective measurements.
pub fn sample_expectation(
    v: &StateVector,
    o: &HermitianOperator,
    shots: u64,
    sampler: &mut ShotSampler,
) -> Result<f64> {
    Ok(sample_estimate(v, o, shots, sampler)?.mean)
}

pub fn sample_estimate(
    v: &StateVector,
    o: &HermitianOperator,
    shots: u64,
    sampler: &mut ShotSampler,
) -> Result<ShotEstimate> {
    if shots == 0 {
        return Err(invalid("shots", "must be at least 1"));
    }
    MeasurementBasis::new(o)?.sample(v, shots, sampler)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HoldPropagation {
    /// Closed-form `exp(-i HT (t - T))` from the target spectrum.
    #[default]
    Exact,
    /// Symmetric split of `HT` into diagonal and off-diagonal parts, one step
    /// per sample interval.
    Trotter2,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HoldOptions {
    /// Time `T` at which the hold begins.
    pub start_time: f64,
    pub duration: f64,
    pub sample_dt: f64,
    /// Shots per time point; zero records exact values only.
    pub shots: u64,
    pub propagation: HoldPropagation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    Exact,
    Sampled,
}

/// Expectation values on a uniform grid starting at the end of preparation.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    pub observable_label: String,
    /// Absolute times `t >= T`.
    pub times: Vec<f64>,
    pub exact_values: Vec<f64>,
    pub sampled_values: Option<Vec<f64>>,
    pub sampled_stderr: Option<Vec<f64>>,
    pub shots_per_point: u64,
    /// The preparation time `T`; output times are reported relative to it.
    pub origin: f64,
}

impl TimeSeries {
    /// Exact-only series; `times` must be strictly increasing and uniform.
    pub fn from_exact(
        label: impl Into<String>,
        origin: f64,
        times: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: times.len(), found: values.len() });
        }
        check_grid(&times)?;
        Ok(Self {
            observable_label: label.into(),
            times,
            exact_values: values,
            sampled_values: None,
            sampled_stderr: None,
            shots_per_point: 0,
            origin,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Grid spacing (zero for a single point).
    pub fn spacing(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            (self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64
        }
    }

    pub fn relative_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.times.iter().map(move |t| t - self.origin)
    }

    pub fn channel(&self, channel: Channel) -> Option<&[f64]> {
        match channel {
            Channel::Exact => Some(&self.exact_values),
            Channel::Sampled => self.sampled_values.as_deref(),
        }
    }
}

fn check_grid(times: &[f64]) -> Result<()> {
    if times.len() < 2 {
        return Ok(());
    }
    let h = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if !(h > 0.0) {
        return Err(invalid("times", "must be strictly increasing"));
    }
    for (k, w) in times.windows(2).enumerate() {
        let d = w[1] - w[0];
        if !(d > 0.0) || (d - h).abs() > 1e-12 * h.max(1.0) * (1.0 + w[1].abs()) {
            return Err(invalid(
                "times",
                alloc::format!("spacing at index {k} is {d}, expected uniform {h}"),
            ));
        }
    }
    Ok(())
}

/// Evolves `v_t` under the constant target Hamiltonian and records `<o>` on
/// the grid `T + j * sample_dt`, `j = 0 ..= floor(duration / sample_dt)`.
///
/// With `shots > 0` each point also gets a shot estimate drawn from
/// `sampler.for_point(j)`.
pub fn hold_series(
    v_t: &StateVector,
    spec: &ModelSpec,
    o: &HermitianOperator,
    opts: &HoldOptions,
    sampler: &ShotSampler,
) -> Result<TimeSeries> {
    if !(opts.duration.is_finite() && opts.duration > 0.0) {
        return Err(invalid("hold_duration", "must be positive"));
    }
    if !(opts.sample_dt.is_finite() && opts.sample_dt > 0.0) {
        return Err(invalid("sample_dt", "must be positive"));
    }
    if v_t.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: v_t.dim() });
    }
    if o.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: o.dim() });
    }
    let points = (opts.duration / opts.sample_dt + 1e-9).floor() as usize + 1;
    let basis = if opts.shots > 0 { Some(MeasurementBasis::new(o)?) } else { None };

    let spectrum = spec.target_spectrum();
    let coeffs = spectrum.coefficients(v_t.amplitudes());
    let stepper = match opts.propagation {
        HoldPropagation::Exact => None,
        HoldPropagation::Trotter2 => Some(DiagonalSplit::new(spec.target.matrix(), opts.sample_dt)?),
    };

    let mut times = Vec::with_capacity(points);
    let mut exact = Vec::with_capacity(points);
    let mut sampled = Vec::new();
    let mut stderr = Vec::new();
    let mut current = v_t.amplitudes().to_vec();
    for j in 0..points {
        let tau = j as f64 * opts.sample_dt;
        let amps = match &stepper {
            None => {
                let mut out = alloc::vec![C64::new(0.0, 0.0); spec.dim()];
                for (k, (&c, &l)) in coeffs.iter().zip(&spectrum.eigenvalues).enumerate() {
                    let c = c * C64::cis(-l * tau);
                    for (i, x) in out.iter_mut().enumerate() {
                        *x += spectrum.eigenvectors[(i, k)] * c;
                    }
                }
                out
            }
            Some(split) => {
                if j > 0 {
                    current = split.step(&current);
                }
                current.clone()
            }
        };
        let state = StateVector::from_unitary_image(amps);
        times.push(opts.start_time + tau);
        exact.push(expectation(&state, o)?);
        if let Some(basis) = &basis {
            let est = basis.sample(&state, opts.shots, &mut sampler.for_point(j as u64))?;
            sampled.push(est.mean);
            stderr.push(est.stderr);
        }
    }

    Ok(TimeSeries {
        observable_label: o.label().into(),
        times,
        exact_values: exact,
        sampled_values: basis.as_ref().map(|_| sampled),
        sampled_stderr: basis.as_ref().map(|_| stderr),
        shots_per_point: opts.shots,
        origin: opts.start_time,
    })
}

/// `exp(-i D h/2) exp(-i F h) exp(-i D h/2)` for `H = D + F`, `D` diagonal.
#[derive(Clone, Debug)]
struct DiagonalSplit {
    half_diag: Vec<C64>,
    off: ComplexMatrix,
}

impl DiagonalSplit {
    fn new(h: &ComplexMatrix, dt: f64) -> Result<Self> {
        let n = h.dim();
        let mut off = h.clone();
        let mut half_diag = Vec::with_capacity(n);
        for i in 0..n {
            half_diag.push(C64::cis(-h[(i, i)].re * 0.5 * dt));
            off[(i, i)] = C64::new(0.0, 0.0);
        }
        let off = crate::linalg::eig_hermitian(&off)?.exp_minus_i(dt);
        Ok(Self { half_diag, off })
    }

    fn step(&self, v: &[C64]) -> Vec<C64> {
        let w: Vec<C64> = v.iter().zip(&self.half_diag).map(|(a, d)| a * d).collect();
        let w = self.off.apply_unchecked(&w);
        w.iter().zip(&self.half_diag).map(|(a, d)| a * d).collect()
    }
}

/// Heisenberg-picture `Z` under `HT = -J H`:
/// `H/sqrt2 - Y sin(2Jt)/sqrt2 + (Z - X) cos(2Jt)/2`.
pub fn heisenberg_z_closed_form(t: f64, coupling: f64) -> HermitianOperator {
    let phase = 2.0 * coupling * t;
    let (sin, cos) = (phase.sin(), phase.cos());
    let r = core::f64::consts::FRAC_1_SQRT_2;
    let m = &(&Pauli::H.matrix().scale_real(r) - &Pauli::Y.matrix().scale_real(r * sin))
        + &(&Pauli::Z.matrix() - &Pauli::X.matrix()).scale_real(0.5 * cos);
    HermitianOperator::new(m, "Z(t)").expect("closed form is Hermitian")
}

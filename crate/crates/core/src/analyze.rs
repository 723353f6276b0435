//! Oscillation statistics and residual-excitation diagnosis.
//!
//! For a prepared state `alpha |g> + beta |e>` held under `HT`, an observable
//! `O` oscillates at the gap frequency:
//!
//! ```text
//! <O>(t) = O_gg - |beta|^2 (O_gg - O_ee) + 2 |alpha beta| |O_eg| cos(w (t - T) + theta')
//! ```
//!
//! Over whole periods the population variance of that signal is
//! `2 |O_eg|^2 |alpha|^2 |beta|^2`, which fixes `|beta|^2` as the smaller root of
//! `b (1 - b) = |alpha beta|^2`. When `O_ee = -O_gg` the time average sits at
//! `O_gg (1 - 2 |beta|^2)` rather than `O_gg`, and dividing by `1 - 2 |beta|^2`
//! removes the bias.

use alloc::string::String;
use alloc::vec::Vec;
use core::str::FromStr;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{invalid, Error, Result};
use crate::evolve::ResidualDecomposition;
use crate::measure::{Channel, TimeSeries};
use crate::model::{HermitianOperator, ModelSpec, Preset};

/// Minimum samples per oscillation period.
pub const MIN_SAMPLES_PER_PERIOD: usize = 16;

/// `1 - 4 |alpha beta|^2` at or below this is treated as `|alpha| = |beta|`.
const ROOT_DISCRIMINANT_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MeanEstimator {
    /// Midpoint of the window's maximum and minimum.
    #[default]
    MinMax,
    /// Arithmetic mean over the whole-period window.
    Arithmetic,
}

impl FromStr for MeanEstimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minmax" => Ok(MeanEstimator::MinMax),
            "arithmetic" => Ok(MeanEstimator::Arithmetic),
            other => Err(invalid(
                "mean_estimator",
                alloc::format!("unknown estimator `{other}` (expected minmax or arithmetic)"),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillationStats {
    pub mean_minmax: f64,
    pub mean_arith: f64,
    /// Population variance over the window.
    pub variance: f64,
    /// Mean per-point shot variance over the window (zero for exact data).
    pub noise_variance: f64,
    /// Standard error of `mean_arith` from shot noise.
    pub mean_stderr: f64,
    pub peak_to_peak: f64,
    pub amplitude: f64,
    pub window_periods: usize,
    pub window_samples: usize,
}

impl OscillationStats {
    /// Variance with the shot-noise floor removed, clamped at zero.
    pub fn signal_variance(&self) -> f64 {
        (self.variance - self.noise_variance).max(0.0)
    }

    pub fn mean(&self, estimator: MeanEstimator) -> f64 {
        match estimator {
            MeanEstimator::MinMax => self.mean_minmax,
            MeanEstimator::Arithmetic => self.mean_arith,
        }
    }
}

/// Statistics of the exact channel; see [`oscillation_stats_for`].
pub fn oscillation_stats(series: &TimeSeries, angular_frequency: f64) -> Result<OscillationStats> {
    oscillation_stats_for(series, angular_frequency, Channel::Exact)
}

/// Statistics over the largest whole number of periods `2 pi / w` covered by
/// the series, starting at its first sample. Samples past the last whole
/// period are dropped.
pub fn oscillation_stats_for(
    series: &TimeSeries,
    angular_frequency: f64,
    channel: Channel,
) -> Result<OscillationStats> {
    if !(angular_frequency.is_finite() && angular_frequency > 0.0) {
        return Err(invalid("angular_frequency", "must be positive"));
    }
    let values = series
        .channel(channel)
        .ok_or_else(|| invalid("series", "no sampled channel recorded"))?;
    let period = 2.0 * core::f64::consts::PI / angular_frequency;
    let spacing = series.spacing();
    let span = spacing * (series.len().max(1) - 1) as f64;
    if series.len() < 2 || span + 1e-9 * period < period {
        return Err(Error::WindowTooShort { span, period });
    }
    let per_period = period / spacing;
    if per_period + 1e-9 < MIN_SAMPLES_PER_PERIOD as f64 {
        return Err(Error::TooFewSamples { per_period, required: MIN_SAMPLES_PER_PERIOD });
    }
    let periods = (span / period + 1e-9).floor() as usize;
    let samples = ((periods as f64 * period / spacing).round() as usize).min(values.len());
    let window = &values[..samples];

    let (mut max, mut min) = (f64::NEG_INFINITY, f64::INFINITY);
    for &x in window {
        max = max.max(x);
        min = min.min(x);
    }
    let n = samples as f64;
    let mean_arith = window.iter().sum::<f64>() / n;
    let variance = window.iter().map(|x| (x - mean_arith) * (x - mean_arith)).sum::<f64>() / n;

    let (noise_variance, mean_stderr) = match (channel, &series.sampled_stderr) {
        (Channel::Sampled, Some(se)) => {
            let sum_sq: f64 = se[..samples].iter().map(|s| s * s).sum();
            (sum_sq / n, sum_sq.sqrt() / n)
        }
        _ => (0.0, 0.0),
    };

    Ok(OscillationStats {
        mean_minmax: 0.5 * (max + min),
        mean_arith,
        variance,
        noise_variance,
        mean_stderr,
        peak_to_peak: max - min,
        amplitude: 0.5 * (max - min),
        window_periods: periods,
        window_samples: samples,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// The observable anti-commutes with `HT`; its oscillation is centred on
    /// the true value.
    AntiCommuting,
    /// Offset oscillation around `O_gg (1 - 2 |beta|^2)`.
    General,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::AntiCommuting => "anti-commuting",
            ModelKind::General => "general",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VacuumDiagnosis {
    /// Smaller root of `b (1 - b) = alpha_beta_sq`.
    pub beta_sq: f64,
    /// `|beta|^2` under `|alpha| ~ 1`, i.e. `alpha_beta_sq` itself.
    pub beta_sq_shortcut: f64,
    pub alpha_beta_sq: f64,
    pub raw_average: f64,
    pub corrected_value: f64,
    pub reference_value: Option<f64>,
    pub model_kind: ModelKind,
    /// `-1 + 2 |beta|^2`, the expected `<-X>` for the anti-commuting model.
    pub predicted_conserved: Option<f64>,
    pub predicted_conserved_shortcut: Option<f64>,
}

impl VacuumDiagnosis {
    pub fn with_reference(mut self, reference: f64) -> Self {
        self.reference_value = Some(reference);
        self
    }

    /// Whether correction moved the estimate closer to the reference.
    pub fn improved(&self) -> Option<bool> {
        self.reference_value
            .map(|r| (self.corrected_value - r).abs() <= (self.raw_average - r).abs())
    }
}

/// Smaller root of `b (1 - b) = alpha_beta_sq`.
pub fn solve_beta_sq(alpha_beta_sq: f64) -> Result<f64> {
    let disc = 1.0 - 4.0 * alpha_beta_sq;
    if !(alpha_beta_sq >= 0.0) || disc <= ROOT_DISCRIMINANT_FLOOR {
        return Err(Error::NoValidRoot { alpha_beta_sq });
    }
    // (1 - sqrt(disc)) / 2 without cancellation.
    Ok(2.0 * alpha_beta_sq / (1.0 + disc.sqrt()))
}

pub fn diagnose_anticommuting(stats: &OscillationStats) -> Result<VacuumDiagnosis> {
    diagnose_anticommuting_with(stats, MeanEstimator::default())
}

/// Signal `2 |alpha beta| cos(...)`: variance `2 |alpha beta|^2`, no offset.
pub fn diagnose_anticommuting_with(
    stats: &OscillationStats,
    estimator: MeanEstimator,
) -> Result<VacuumDiagnosis> {
    let alpha_beta_sq = stats.signal_variance() / 2.0;
    let beta_sq = solve_beta_sq(alpha_beta_sq)?;
    let raw = stats.mean(estimator);
    Ok(VacuumDiagnosis {
        beta_sq,
        beta_sq_shortcut: alpha_beta_sq,
        alpha_beta_sq,
        raw_average: raw,
        corrected_value: raw,
        reference_value: None,
        model_kind: ModelKind::AntiCommuting,
        predicted_conserved: Some(-1.0 + 2.0 * beta_sq),
        predicted_conserved_shortcut: Some(-1.0 + 2.0 * alpha_beta_sq),
    })
}

pub fn diagnose_general(stats: &OscillationStats, transition_scale: f64) -> Result<VacuumDiagnosis> {
    diagnose_general_with(stats, transition_scale, MeanEstimator::default())
}

/// Offset signal `c (1 - 2 |beta|^2) + amplitude cos(...)`.
///
/// `transition_scale` is `2 |O_eg|^2` (see [`transition_scale`]); it is 1 for
/// `Z` on model two, where the variance is `|alpha|^2 |beta|^2` directly.
pub fn diagnose_general_with(
    stats: &OscillationStats,
    transition_scale: f64,
    estimator: MeanEstimator,
) -> Result<VacuumDiagnosis> {
    if !(transition_scale.is_finite() && transition_scale > 0.0) {
        return Err(invalid("transition_scale", "must be positive"));
    }
    let alpha_beta_sq = stats.signal_variance() / transition_scale;
    let beta_sq = solve_beta_sq(alpha_beta_sq)?;
    let shrink = 1.0 - 2.0 * beta_sq;
    if shrink <= 0.0 {
        return Err(Error::NoValidRoot { alpha_beta_sq });
    }
    let raw = stats.mean(estimator);
    Ok(VacuumDiagnosis {
        beta_sq,
        beta_sq_shortcut: alpha_beta_sq,
        alpha_beta_sq,
        raw_average: raw,
        corrected_value: raw / shrink,
        reference_value: None,
        model_kind: ModelKind::General,
        predicted_conserved: None,
        predicted_conserved_shortcut: None,
    })
}

/// `2 |<e| o |g>|^2` for the spec's reference pair.
pub fn transition_scale(spec: &ModelSpec, o: &HermitianOperator) -> f64 {
    let g = spec.reference_ground_state.amplitudes();
    let e = spec.reference_excited_state.amplitudes();
    2.0 * o.matrix().sandwich(e, g).norm_sqr()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorRelation {
    /// `[O, HT] = 0`: conserved during the hold.
    Commuting,
    /// `{O, HT} = 0`.
    AntiCommuting,
    General,
}

/// How `o` relates to the target Hamiltonian, within `1e-12` relative.
pub fn relation(spec: &ModelSpec, o: &HermitianOperator) -> OperatorRelation {
    let h = spec.target.matrix();
    let scale = (h.frobenius_norm() * o.matrix().frobenius_norm()).max(f64::MIN_POSITIVE);
    let zero = crate::linalg::ComplexMatrix::zeros(h.dim());
    if o.matrix().commutator(h).max_abs_diff(&zero) <= 1e-12 * scale {
        OperatorRelation::Commuting
    } else if o.matrix().anticommutator(h).max_abs_diff(&zero) <= 1e-12 * scale {
        OperatorRelation::AntiCommuting
    } else {
        OperatorRelation::General
    }
}

/// Closed-form hold-phase curve for a preset model and `(alpha, beta, theta)`.
pub fn predicted_series(
    dec: &ResidualDecomposition,
    spec: &ModelSpec,
    observable: &str,
    times: Vec<f64>,
    origin: f64,
) -> Result<TimeSeries> {
    let no_form = || Error::NoClosedForm { observable: String::from(observable) };
    let preset = spec.preset.ok_or_else(no_form)?;
    let w = 2.0 * spec.coupling;
    let ab = dec.alpha_mod * dec.beta_mod;
    let population = dec.alpha_mod * dec.alpha_mod - dec.beta_mod * dec.beta_mod;
    let value = |t: f64| -> Option<f64> {
        let phase = w * (t - origin) + dec.theta;
        match (preset, observable) {
            (Preset::ModelOne, "Z") => Some(2.0 * ab * phase.cos()),
            (Preset::ModelOne, "-X") => Some(-population),
            (Preset::ModelTwo, "Z") => Some(
                core::f64::consts::FRAC_1_SQRT_2 * population
                    + core::f64::consts::SQRT_2 * ab * phase.cos(),
            ),
            _ => None,
        }
    };
    let values = times.iter().map(|&t| value(t)).collect::<Option<Vec<f64>>>().ok_or_else(no_form)?;
    TimeSeries::from_exact(observable, origin, times, values)
}

//! End-to-end run: prepare, hold, measure, diagnose.

use std::collections::BTreeMap;

use adiaprep_core::analyze::{
    diagnose_anticommuting_with, diagnose_general_with, oscillation_stats_for, predicted_series, relation,
    transition_scale, OperatorRelation,
};
use adiaprep_core::evolve::{decompose, run_adiabatic};
use adiaprep_core::measure::hold_series;
use adiaprep_core::{
    AdiabaticSchedule, Channel, HermitianOperator, HoldOptions, Integrator, ModelSpec, OscillationStats,
    ShotSampler, StateVector, TimeSeries, VacuumDiagnosis,
};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::Result;

/// Everything `summary.json` records. Field order is irrelevant: the writer
/// sorts keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub config: ExperimentConfig,
    pub preparation: Preparation,
    /// First configured observable; the top-level estimates refer to it.
    pub primary_observable: String,
    /// `sampled` when shots were taken, `exact` otherwise.
    pub channel: String,
    pub beta_sq: Option<f64>,
    pub raw_average: Option<f64>,
    pub corrected_value: Option<f64>,
    pub reference_value: Option<f64>,
    pub observables: BTreeMap<String, ObservableReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preparation {
    pub integrator: String,
    pub steps: usize,
    pub effective_step: f64,
    pub discretization_residual: f64,
    pub beta_sq: f64,
    pub fidelity: f64,
    pub alpha_mod: f64,
    pub beta_mod: f64,
    pub theta: f64,
    pub theta_defined: bool,
    pub norm_defect: f64,
    /// `||psi(T) - psi_ref(T)||` against an exact-midpoint run on a finer grid.
    pub trotter_deviation: Option<f64>,
    pub reference_step: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableReport {
    pub relation: String,
    /// `<g|O|g>` for the target ground state.
    pub reference_value: f64,
    /// `<e|O|e>` for the first excited state.
    pub excited_value: f64,
    pub points: usize,
    pub shots_per_point: u64,
    /// Mean over points of the per-point shot standard error.
    pub stderr_per_point: Option<f64>,
    pub exact: ChannelReport,
    pub sampled: Option<ChannelReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChannelReport {
    pub stats: Option<StatsReport>,
    pub diagnosis: Option<DiagnosisReport>,
    pub diagnosis_error: Option<String>,
    pub conserved: Option<ConservedReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub angular_frequency: f64,
    pub mean_minmax: f64,
    pub mean_arith: f64,
    pub variance: f64,
    pub noise_variance: f64,
    pub signal_variance: f64,
    pub mean_stderr: f64,
    pub peak_to_peak: f64,
    pub amplitude: f64,
    pub window_periods: usize,
    pub window_samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosisReport {
    pub kind: String,
    pub beta_sq: f64,
    pub beta_sq_shortcut: f64,
    pub alpha_beta_sq: f64,
    pub raw_average: f64,
    pub corrected_value: f64,
    pub reference_value: Option<f64>,
    pub improved: Option<bool>,
    pub predicted_conserved: Option<f64>,
    pub predicted_conserved_shortcut: Option<f64>,
}

/// A conserved observable: constant in time, read directly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservedReport {
    pub mean: f64,
    /// Shot standard error of `mean` (zero for exact values).
    pub mean_stderr: f64,
    /// `(mean - O_gg) / (O_ee - O_gg)`.
    pub implied_beta_sq: Option<f64>,
    /// `mean / (1 - 2 beta^2)` when `O_ee = -O_gg`.
    pub corrected_value: Option<f64>,
    /// `O_gg + beta^2 (O_ee - O_gg)` with `beta^2` from the oscillating observable.
    pub predicted: Option<f64>,
    pub predicted_shortcut: Option<f64>,
    pub predicted_from: Option<String>,
    pub deviation: Option<f64>,
    /// `|mean - predicted| / mean_stderr` for sampled data.
    pub deviation_in_stderr: Option<f64>,
}

/// One observable's hold-phase data.
#[derive(Clone, Debug)]
pub struct SeriesArtifact {
    pub label: String,
    pub series: TimeSeries,
    /// Closed-form curve for the prepared state, when the model has one.
    pub predicted: Option<TimeSeries>,
    pub reference_value: f64,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub summary: RunSummary,
    pub series: Vec<SeriesArtifact>,
    pub final_state: StateVector,
    pub warnings: Vec<String>,
}

/// Runs a resolved configuration (see [`ExperimentConfig::resolve`]).
pub fn run(config: &ExperimentConfig, spec: &ModelSpec) -> Result<RunOutput> {
    let schedule = config.schedule()?;
    let integrator = config.integrator();
    let mut warnings = Vec::new();
    let residual = schedule.discretization_residual();
    if residual > 0.0 {
        warnings.push(format!(
            "total_time / step_width = {} is not an integer; using {} steps of width {}",
            config.total_time / config.step_width,
            schedule.steps(),
            schedule.effective_step()
        ));
    }

    let state = run_adiabatic(spec, &schedule, integrator)?;
    let dec = decompose(&state, spec)?;
    let (trotter_deviation, reference_step) = reference_deviation(config, spec, &schedule, &state)?;
    let preparation = Preparation {
        integrator: integrator.name().to_string(),
        steps: schedule.steps(),
        effective_step: schedule.effective_step(),
        discretization_residual: residual,
        beta_sq: dec.beta_sq,
        fidelity: dec.fidelity(),
        alpha_mod: dec.alpha_mod,
        beta_mod: dec.beta_mod,
        theta: dec.theta,
        theta_defined: dec.theta_defined,
        norm_defect: (state.norm() - 1.0).abs(),
        trotter_deviation,
        reference_step,
    };

    let opts = HoldOptions {
        start_time: config.total_time,
        duration: config.hold_duration,
        sample_dt: config.sample_dt(),
        shots: config.shots,
        propagation: config.hold_propagation(),
    };
    let root = ShotSampler::new(config.seed);
    let omega = spec.oscillation_frequency();

    let mut artifacts = Vec::new();
    let mut reports = Vec::new();
    for o in &spec.observables {
        let series = hold_series(&state, spec, o, &opts, &root.derive(o.label()))?;
        let predicted = predicted_series(&dec, spec, o.label(), series.times.clone(), series.origin).ok();
        let rel = relation(spec, o);
        let exact = channel_report(config, spec, o, rel, &series, omega, Channel::Exact);
        let sampled = (config.shots > 0)
            .then(|| channel_report(config, spec, o, rel, &series, omega, Channel::Sampled));
        let stderr_per_point = series
            .sampled_stderr
            .as_ref()
            .map(|se| se.iter().sum::<f64>() / se.len() as f64);
        reports.push((
            o.label().to_string(),
            ObservableReport {
                relation: relation_name(rel).into(),
                reference_value: spec.ground_expectation(o),
                excited_value: excited_expectation(spec, o),
                points: series.len(),
                shots_per_point: series.shots_per_point,
                stderr_per_point,
                exact,
                sampled,
            },
        ));
        artifacts.push(SeriesArtifact {
            label: o.label().to_string(),
            series,
            predicted,
            reference_value: spec.ground_expectation(o),
        });
    }
    link_conserved_predictions(&mut reports);

    let primary = reports[0].0.clone();
    let channel = if config.shots > 0 { Channel::Sampled } else { Channel::Exact };
    let primary_report = &reports[0].1;
    let chosen = match channel {
        Channel::Exact => &primary_report.exact,
        Channel::Sampled => primary_report.sampled.as_ref().expect("shots > 0"),
    };
    let (beta_sq, raw_average, corrected_value) = match (&chosen.diagnosis, &chosen.conserved) {
        (Some(d), _) => (Some(d.beta_sq), Some(d.raw_average), Some(d.corrected_value)),
        (None, Some(c)) => (c.implied_beta_sq, Some(c.mean), c.corrected_value),
        (None, None) => (None, None, None),
    };
    let summary = RunSummary {
        name: config.name.clone(),
        config: config.clone(),
        preparation,
        primary_observable: primary,
        channel: match channel {
            Channel::Exact => "exact".into(),
            Channel::Sampled => "sampled".into(),
        },
        beta_sq,
        raw_average,
        corrected_value,
        reference_value: Some(primary_report.reference_value),
        observables: reports.into_iter().collect(),
    };
    Ok(RunOutput { summary, series: artifacts, final_state: state, warnings })
}

fn reference_deviation(
    config: &ExperimentConfig,
    spec: &ModelSpec,
    schedule: &AdiabaticSchedule,
    state: &StateVector,
) -> Result<(Option<f64>, Option<f64>)> {
    if config.reference_refinement == 0 {
        return Ok((None, None));
    }
    let fine_step = schedule.effective_step() / config.reference_refinement as f64;
    let fine = AdiabaticSchedule::new(schedule.total_time, fine_step, schedule.profile)?;
    let reference = run_adiabatic(spec, &fine, Integrator::ExactMidpoint)?;
    Ok((Some(state.distance(&reference)), Some(fine.effective_step())))
}

fn channel_report(
    config: &ExperimentConfig,
    spec: &ModelSpec,
    o: &HermitianOperator,
    rel: OperatorRelation,
    series: &TimeSeries,
    omega: f64,
    channel: Channel,
) -> ChannelReport {
    let mut report = ChannelReport::default();
    if rel == OperatorRelation::Commuting {
        report.conserved = Some(conserved_report(spec, o, series, channel));
        return report;
    }
    let stats = match oscillation_stats_for(series, omega, channel) {
        Ok(s) => s,
        Err(e) => {
            report.diagnosis_error = Some(e.to_string());
            return report;
        }
    };
    report.stats = Some(stats_report(&stats, omega));
    let estimator = config.mean_estimator();
    let diagnosis = match rel {
        OperatorRelation::AntiCommuting => diagnose_anticommuting_with(&stats, estimator),
        _ => diagnose_general_with(&stats, transition_scale(spec, o), estimator),
    };
    match diagnosis {
        Ok(d) => report.diagnosis = Some(diagnosis_report(&d.with_reference(spec.ground_expectation(o)))),
        Err(e) => report.diagnosis_error = Some(e.to_string()),
    }
    report
}

fn conserved_report(spec: &ModelSpec, o: &HermitianOperator, series: &TimeSeries, channel: Channel) -> ConservedReport {
    let values = series.channel(channel).expect("channel recorded");
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let mean_stderr = match (channel, &series.sampled_stderr) {
        (Channel::Sampled, Some(se)) => se.iter().map(|s| s * s).sum::<f64>().sqrt() / n,
        _ => 0.0,
    };
    let gg = spec.ground_expectation(o);
    let ee = excited_expectation(spec, o);
    let implied = ((ee - gg).abs() > 1e-12).then(|| (mean - gg) / (ee - gg));
    let corrected = match implied {
        Some(b) if (ee + gg).abs() < 1e-12 && 1.0 - 2.0 * b > 0.0 => Some(mean / (1.0 - 2.0 * b)),
        _ => None,
    };
    ConservedReport {
        mean,
        mean_stderr,
        implied_beta_sq: implied,
        corrected_value: corrected,
        predicted: None,
        predicted_shortcut: None,
        predicted_from: None,
        deviation: None,
        deviation_in_stderr: None,
    }
}

/// Predicts each conserved observable from the first oscillating diagnosis
/// in the same channel.
fn link_conserved_predictions(reports: &mut [(String, ObservableReport)]) {
    let pick = |reports: &[(String, ObservableReport)], sampled: bool| {
        reports.iter().find_map(|(label, r)| {
            let ch = if sampled { r.sampled.as_ref()? } else { &r.exact };
            ch.diagnosis.as_ref().map(|d| (label.clone(), d.beta_sq, d.beta_sq_shortcut))
        })
    };
    let exact_source = pick(reports, false);
    let sampled_source = pick(reports, true);
    for (_, r) in reports.iter_mut() {
        let (gg, ee) = (r.reference_value, r.excited_value);
        fill_prediction(&mut r.exact, exact_source.as_ref(), gg, ee);
        if let Some(ch) = r.sampled.as_mut() {
            fill_prediction(ch, sampled_source.as_ref(), gg, ee);
        }
    }
}

fn fill_prediction(ch: &mut ChannelReport, source: Option<&(String, f64, f64)>, gg: f64, ee: f64) {
    let (Some(c), Some((from, b, b_short))) = (ch.conserved.as_mut(), source) else { return };
    let predicted = gg + b * (ee - gg);
    c.predicted = Some(predicted);
    c.predicted_shortcut = Some(gg + b_short * (ee - gg));
    c.predicted_from = Some(from.clone());
    c.deviation = Some(c.mean - predicted);
    c.deviation_in_stderr = (c.mean_stderr > 0.0).then(|| (c.mean - predicted).abs() / c.mean_stderr);
}

fn excited_expectation(spec: &ModelSpec, o: &HermitianOperator) -> f64 {
    let e = spec.reference_excited_state.amplitudes();
    o.matrix().sandwich(e, e).re
}

fn relation_name(rel: OperatorRelation) -> &'static str {
    match rel {
        OperatorRelation::Commuting => "commuting",
        OperatorRelation::AntiCommuting => "anti-commuting",
        OperatorRelation::General => "general",
    }
}

fn stats_report(s: &OscillationStats, omega: f64) -> StatsReport {
    StatsReport {
        angular_frequency: omega,
        mean_minmax: s.mean_minmax,
        mean_arith: s.mean_arith,
        variance: s.variance,
        noise_variance: s.noise_variance,
        signal_variance: s.signal_variance(),
        mean_stderr: s.mean_stderr,
        peak_to_peak: s.peak_to_peak,
        amplitude: s.amplitude,
        window_periods: s.window_periods,
        window_samples: s.window_samples,
    }
}

fn diagnosis_report(d: &VacuumDiagnosis) -> DiagnosisReport {
    DiagnosisReport {
        kind: d.model_kind.name().into(),
        beta_sq: d.beta_sq,
        beta_sq_shortcut: d.beta_sq_shortcut,
        alpha_beta_sq: d.alpha_beta_sq,
        raw_average: d.raw_average,
        corrected_value: d.corrected_value,
        reference_value: d.reference_value,
        improved: d.improved(),
        predicted_conserved: d.predicted_conserved,
        predicted_conserved_shortcut: d.predicted_conserved_shortcut,
    }
}

//! One run per parameter value, summarized in a table.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use adiaprep_core::ModelSpec;
use rayon::prelude::*;

use crate::artifacts::{fmt_real, write_run};
use crate::config::{parse_real, ExperimentConfig};
use crate::error::{AppError, Result};
use crate::experiment::{run, RunOutput};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    TotalTime,
    StepWidth,
    Shots,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::TotalTime => "T",
            SweepParam::StepWidth => "dt",
            SweepParam::Shots => "shots",
        }
    }

    fn apply(self, cfg: &mut ExperimentConfig, value: f64) {
        match self {
            SweepParam::TotalTime => cfg.total_time = value,
            SweepParam::StepWidth => cfg.step_width = value,
            SweepParam::Shots => cfg.shots = value as u64,
        }
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "T" | "total_time" => Ok(SweepParam::TotalTime),
            "dt" | "step_width" => Ok(SweepParam::StepWidth),
            "shots" => Ok(SweepParam::Shots),
            other => Err(format!("unknown sweep parameter `{other}` (expected T, dt, or shots)")),
        }
    }
}

pub const TABLE_HEADER: &str = "value,beta_sq,raw_average,corrected_value,fidelity,trotter_deviation,shot_stderr";

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub beta_sq: Option<f64>,
    pub raw_average: Option<f64>,
    pub corrected_value: Option<f64>,
    pub fidelity: f64,
    pub trotter_deviation: Option<f64>,
    pub shot_stderr: Option<f64>,
}

impl SweepRow {
    fn from_output(value: f64, out: &RunOutput) -> Self {
        let s = &out.summary;
        let primary = &s.observables[&s.primary_observable];
        Self {
            value,
            beta_sq: s.beta_sq,
            raw_average: s.raw_average,
            corrected_value: s.corrected_value,
            fidelity: s.preparation.fidelity,
            trotter_deviation: s.preparation.trotter_deviation,
            shot_stderr: primary.stderr_per_point,
        }
    }
}

/// Parses sweep values (`1/24` and `pi/4` forms allowed); all must be positive,
/// and integral for `shots`.
pub fn parse_values(param: SweepParam, raw: &[String]) -> Result<Vec<f64>> {
    if raw.is_empty() {
        return Err(AppError::config("--values", "at least one value is required"));
    }
    raw.iter()
        .enumerate()
        .map(|(k, r)| {
            let field = format!("--values[{k}]");
            let v = parse_real(r).ok_or_else(|| AppError::config(&field, format!("`{r}` is not a number")))?;
            if !(v > 0.0) {
                return Err(AppError::config(field, format!("must be positive, got {v}")));
            }
            if param == SweepParam::Shots && (v.fract() != 0.0 || v > u64::MAX as f64) {
                return Err(AppError::config(field, format!("shots must be an integer, got {v}")));
            }
            Ok(v)
        })
        .collect()
}

/// Resolves every row up front so a bad value fails before any run starts.
pub fn plan(base: &ExperimentConfig, param: SweepParam, values: &[f64]) -> Result<Vec<(ExperimentConfig, ModelSpec)>> {
    values
        .iter()
        .map(|&v| {
            let mut cfg = base.clone();
            param.apply(&mut cfg, v);
            cfg.resolve()
        })
        .collect()
}

pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub outputs: Vec<RunOutput>,
    pub written: Vec<PathBuf>,
}

/// Runs rows concurrently; results keep input order. Per-row artifacts go to
/// `dir/row_<k>/` and the table to `dir/sweep_<param>.csv`.
pub fn run_sweep(
    plan: &[(ExperimentConfig, ModelSpec)],
    param: SweepParam,
    values: &[f64],
    dir: Option<&Path>,
) -> Result<SweepResult> {
    let outputs: Vec<RunOutput> = plan.par_iter().map(|(cfg, spec)| run(cfg, spec)).collect::<Result<_>>()?;
    let rows: Vec<SweepRow> = values.iter().zip(&outputs).map(|(&v, o)| SweepRow::from_output(v, o)).collect();
    let mut written = Vec::new();
    if let Some(dir) = dir {
        for (k, (out, (cfg, _))) in outputs.iter().zip(plan).enumerate() {
            written.extend(write_run(out, &cfg.outputs, &dir.join(format!("row_{k}")))?);
        }
        let path = dir.join(format!("sweep_{}.csv", param.name()));
        std::fs::write(&path, table_csv(&rows)).map_err(|e| AppError::io(&path, e))?;
        written.push(path);
    }
    Ok(SweepResult { rows, outputs, written })
}

pub fn table_csv(rows: &[SweepRow]) -> String {
    let opt = |x: Option<f64>| x.map(fmt_real).unwrap_or_default();
    let mut s = String::from(TABLE_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            fmt_real(r.value),
            opt(r.beta_sq),
            opt(r.raw_average),
            opt(r.corrected_value),
            fmt_real(r.fidelity),
            opt(r.trotter_deviation),
            opt(r.shot_stderr)
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_are_checked() {
        let ok = parse_values(SweepParam::StepWidth, &["1/12".into(), "0.5".into()]).unwrap();
        assert_eq!(ok, [1.0 / 12.0, 0.5]);
        assert!(parse_values(SweepParam::TotalTime, &["-1".into()]).is_err());
        assert!(parse_values(SweepParam::Shots, &["10.5".into()]).is_err());
        assert!(parse_values(SweepParam::Shots, &[]).is_err());
        assert_eq!(parse_values(SweepParam::Shots, &["1e3".into()]).unwrap(), [1000.0]);
    }

    #[test]
    fn table_has_one_line_per_row() {
        let row = SweepRow {
            value: 2.0,
            beta_sq: Some(1e-4),
            raw_average: None,
            corrected_value: None,
            fidelity: 1.0,
            trotter_deviation: None,
            shot_stderr: None,
        };
        let t = table_csv(&[row.clone(), row]);
        assert_eq!(t.lines().count(), 3);
        assert_eq!(t.lines().nth(1).unwrap().split(',').count(), 7);
    }
}

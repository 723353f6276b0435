//! On-disk formats: series CSV, summary JSON, SVG plots, timing.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::OutputConfig;
use crate::error::{AppError, Result};
use crate::experiment::{RunOutput, SeriesArtifact};
use crate::plot::{Plot, Style};

pub const CSV_HEADER: &str = "t,exact,sampled,stderr";

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Hold series as CSV. `t` is time since the end of preparation, computed as
/// `j * sample_dt`; the leading comment gives the absolute origin.
pub fn series_csv(artifact: &SeriesArtifact, sample_dt: f64) -> String {
    let s = &artifact.series;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# observable {}; t is time since preparation ended at T = {}; absolute time = t + T",
        s.observable_label,
        fmt_real(s.origin)
    );
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (j, exact) in s.exact_values.iter().enumerate() {
        let t = j as f64 * sample_dt;
        let sampled = s.sampled_values.as_ref().map(|v| fmt_real(v[j])).unwrap_or_default();
        let stderr = s.sampled_stderr.as_ref().map(|v| fmt_real(v[j])).unwrap_or_default();
        let _ = writeln!(out, "{},{},{sampled},{stderr}", fmt_real(t), fmt_real(*exact));
    }
    out
}

/// Pretty JSON with object keys sorted at every level.
pub fn to_sorted_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| AppError::Runtime(format!("serializing summary: {e}")))?;
    Ok(canonical_json(&v))
}

/// `serde_json::Map` is ordered by key, so printing a `Value` sorts keys.
pub fn canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("a Value always serializes");
    s.push('\n');
    s
}

pub fn series_svg(artifact: &SeriesArtifact, sample_dt: f64, title: &str) -> String {
    let s = &artifact.series;
    let t = |j: usize| j as f64 * sample_dt;
    let exact: Vec<(f64, f64)> = s.exact_values.iter().enumerate().map(|(j, &y)| (t(j), y)).collect();
    let mut plot = Plot::new(format!("{title}: <{}> during the hold", s.observable_label))
        .labels("t - T", format!("<{}>", s.observable_label))
        .layer("exact", "#1f77b4", Style::Line, exact);
    if let Some(values) = &s.sampled_values {
        let pts = values.iter().enumerate().map(|(j, &y)| (t(j), y)).collect();
        plot = plot.layer(format!("{} shots", s.shots_per_point), "#444444", Style::Points, pts);
    }
    if let Some(p) = &artifact.predicted {
        let pts = p.exact_values.iter().enumerate().map(|(j, &y)| (t(j), y)).collect();
        plot = plot.layer("closed form", "#ff7f0e", Style::Dashed, pts);
    }
    let end = t(s.len().saturating_sub(1));
    plot = plot.layer(
        "ground-state value",
        "#2ca02c",
        Style::Dashed,
        vec![(0.0, artifact.reference_value), (end, artifact.reference_value)],
    );
    plot.render()
}

/// File-name-safe form of an observable label.
pub fn file_stem(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '+' | '.' | '_') { c } else { '_' })
        .collect()
}

fn write(path: &Path, contents: &str) -> Result<PathBuf> {
    fs::write(path, contents).map_err(|e| AppError::io(path, e))?;
    Ok(path.to_path_buf())
}

/// Writes the enabled artifacts into `dir` and returns their paths.
pub fn write_run(output: &RunOutput, outputs: &OutputConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    let sample_dt = output.summary.config.sample_dt();
    let mut written = Vec::new();
    for artifact in &output.series {
        let stem = file_stem(&artifact.label);
        if outputs.csv {
            written.push(write(&dir.join(format!("series_{stem}.csv")), &series_csv(artifact, sample_dt))?);
        }
        if outputs.svg {
            let svg = series_svg(artifact, sample_dt, &output.summary.name);
            written.push(write(&dir.join(format!("plot_{stem}.svg")), &svg)?);
        }
    }
    if outputs.json {
        written.push(write(&dir.join("summary.json"), &to_sorted_json(&output.summary)?)?);
    }
    Ok(written)
}

/// Wall-clock time lives outside `summary.json` so that file stays reproducible.
pub fn write_timing(dir: &Path, seconds: f64) -> Result<PathBuf> {
    let v = serde_json::json!({ "wall_clock_seconds": seconds });
    fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    write(&dir.join("timing.json"), &canonical_json(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use adiaprep_core::TimeSeries;

    fn artifact(sampled: bool) -> SeriesArtifact {
        let mut series = TimeSeries::from_exact("-X", 36.0, vec![36.0, 36.125, 36.25], vec![-1.0, 0.5, 1e-20]).unwrap();
        if sampled {
            series.sampled_values = Some(vec![-0.999, 0.5, 0.0]);
            series.sampled_stderr = Some(vec![0.5, 0.25, 0.125]);
            series.shots_per_point = 1000;
        }
        SeriesArtifact { label: "-X".into(), series, predicted: None, reference_value: -1.0 }
    }

    #[test]
    fn csv_layout() {
        let csv = series_csv(&artifact(false), 0.125);
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with('#'));
        assert_eq!(lines[1], CSV_HEADER);
        assert_eq!(lines[2], "0.0000000000000000e0,-1.0000000000000000e0,,");
        assert_eq!(lines[3], "1.2500000000000000e-1,5.0000000000000000e-1,,");
        let csv = series_csv(&artifact(true), 0.125);
        assert!(csv.lines().nth(4).unwrap().ends_with(",0.0000000000000000e0,1.2500000000000000e-1"));
    }

    #[test]
    fn csv_values_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 7.071067811865476e-1] {
            assert_eq!(fmt_real(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_keys_are_sorted() {
        let v = serde_json::json!({"b": 1, "a": {"z": 0.1, "c": [1, 2]}});
        let s = canonical_json(&v);
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.find("\"c\"").unwrap() < s.find("\"z\"").unwrap());
        let again: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(canonical_json(&again), s);
    }

    #[test]
    fn labels_become_safe_stems() {
        assert_eq!(file_stem("-X"), "-X");
        assert_eq!(file_stem("a/b c"), "a_b_c");
    }
}

//! Command-line verbs.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::artifacts::{to_sorted_json, write_run, write_timing};
use crate::config::{ConfigSource, ExperimentConfig};
use crate::error::{AppError, Result};
use crate::experiment::run;
use crate::sweep::{parse_values, plan, run_sweep, table_csv, SweepParam};

#[derive(Debug, Parser)]
#[command(name = "adiaprep", version, about = "Adiabatic ground-state preparation with residual-excitation diagnosis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prepare, hold, measure, and write series, summary, and plots.
    Run {
        #[command(flatten)]
        source: SourceArgs,
        /// Output directory (overrides outputs.dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repeat a run over values of one parameter.
    Sweep {
        #[command(flatten)]
        source: SourceArgs,
        /// T, dt, or shots.
        #[arg(long)]
        param: SweepParam,
        /// Comma-separated values; `1/24` and `pi/4` forms are accepted.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a configuration and print it with defaults filled in.
    Validate {
        #[command(flatten)]
        source: SourceArgs,
    },
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// JSON configuration file.
    pub config: Option<PathBuf>,
    /// Built-in preset: fig1a, fig1b, or fig2.
    #[arg(long)]
    pub preset: Option<String>,
    /// Field override, e.g. `--set shots=0` or `--set outputs.svg=false`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

impl SourceArgs {
    fn load(&self) -> Result<(ExperimentConfig, adiaprep_core::ModelSpec)> {
        let source = ConfigSource {
            file: self.config.clone(),
            preset: self.preset.clone(),
            overrides: self.overrides.clone(),
            seed_env: None,
        }
        .with_env();
        source.load()?.resolve()
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Run { source, out } => cmd_run(&source, out.as_deref(), stdout, stderr),
        Command::Sweep { source, param, values, out } => cmd_sweep(&source, param, &values, out.as_deref(), stdout, stderr),
        Command::Validate { source } => cmd_validate(&source, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn out_dir(cfg: &ExperimentConfig, out: Option<&Path>) -> PathBuf {
    out.map(Path::to_path_buf).unwrap_or_else(|| cfg.outputs.dir.clone())
}

fn say(w: &mut dyn Write, text: std::fmt::Arguments<'_>) -> Result<()> {
    w.write_fmt(text).and_then(|_| w.write_all(b"\n")).map_err(|e| AppError::io("<stdout>", e))
}

pub fn cmd_run(source: &SourceArgs, out: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let (cfg, spec) = source.load()?;
    let dir = out_dir(&cfg, out);
    let started = Instant::now();
    let output = run(&cfg, &spec)?;
    for w in &output.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let written = write_run(&output, &cfg.outputs, &dir)?;
    let elapsed = started.elapsed().as_secs_f64();
    write_timing(&dir, elapsed)?;
    let _ = writeln!(stderr, "finished in {elapsed:.3} s");

    let s = &output.summary;
    let show = |x: Option<f64>| x.map(|v| format!("{v:.9}")).unwrap_or_else(|| "n/a".into());
    say(stdout, format_args!("{}: {} steps, fidelity {:.12}", s.name, s.preparation.steps, s.preparation.fidelity))?;
    say(
        stdout,
        format_args!(
            "<{}> ({} channel): beta^2 {}  raw {}  corrected {}  reference {}",
            s.primary_observable,
            s.channel,
            show(s.beta_sq),
            show(s.raw_average),
            show(s.corrected_value),
            show(s.reference_value)
        ),
    )?;
    for p in written {
        say(stdout, format_args!("wrote {}", p.display()))?;
    }
    Ok(())
}

pub fn cmd_sweep(
    source: &SourceArgs,
    param: SweepParam,
    raw_values: &[String],
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let values = parse_values(param, raw_values)?;
    let (base, _) = source.load()?;
    let rows = plan(&base, param, &values)?;
    let dir = out_dir(&base, out);
    let started = Instant::now();
    let result = run_sweep(&rows, param, &values, Some(&dir))?;
    for (k, o) in result.outputs.iter().enumerate() {
        for w in &o.warnings {
            let _ = writeln!(stderr, "warning: row {k}: {w}");
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    write_timing(&dir, elapsed)?;
    let _ = writeln!(stderr, "finished {} rows in {elapsed:.3} s", values.len());
    stdout.write_all(table_csv(&result.rows).as_bytes()).map_err(|e| AppError::io("<stdout>", e))?;
    Ok(())
}

pub fn cmd_validate(source: &SourceArgs, stdout: &mut dyn Write) -> Result<()> {
    let (cfg, _) = source.load()?;
    stdout.write_all(to_sorted_json(&cfg)?.as_bytes()).map_err(|e| AppError::io("<stdout>", e))
}

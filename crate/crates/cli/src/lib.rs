//! Configuration, orchestration, and file formats around `adiaprep-core`.
//!
//! A run prepares the target ground state by a Trotterized linear sweep,
//! holds it under the target Hamiltonian, records each observable (exactly
//! and with shot noise), and estimates the residual excited-state weight
//! from the oscillation it leaves behind.
//!
//! ```no_run
//! use adiaprep::config::ExperimentConfig;
//!
//! let (cfg, spec) = ExperimentConfig::preset("fig2")?.resolve()?;
//! let out = adiaprep::experiment::run(&cfg, &spec)?;
//! println!("beta^2 = {:?}", out.summary.beta_sq);
//! # Ok::<(), adiaprep::error::AppError>(())
//! ```

pub mod artifacts;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod plot;
pub mod sweep;

pub use config::{ConfigSource, ExperimentConfig};
pub use error::AppError;
pub use experiment::{run, RunOutput, RunSummary};

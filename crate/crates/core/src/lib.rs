//! Dense statevector engine for adiabatic ground-state preparation.
//!
//! The crate prepares the ground state of a target Hamiltonian by sweeping
//! `H(s) = (1 - s) H0 + s HT` from `s = 0` to `s = 1`, then holds the prepared
//! state under the constant `HT` while recording expectation values. A prepared
//! state `alpha |g> + beta |e>` makes observables oscillate at the gap
//! frequency; the [`analyze`] module turns the oscillation statistics back into
//! the excited-state weight `|beta|^2` and removes the bias it leaves in time
//! averages.
//!
//! Everything here is `no_std` + `alloc`. File formats and the command line live
//! in the companion `adiaprep` crate.
//!
//! ```
//! use adiaprep_core::{model, evolve, AdiabaticSchedule, Integrator};
//!
//! let spec = model::model_two(core::f64::consts::FRAC_PI_4).unwrap();
//! let schedule = AdiabaticSchedule::linear(36.0, 1.0 / 24.0).unwrap();
//! let psi = evolve::run_adiabatic(&spec, &schedule, Integrator::default()).unwrap();
//! let dec = evolve::decompose(&psi, &spec).unwrap();
//! assert!(dec.beta_sq > 1e-4 && dec.beta_sq < 1e-3);
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;


pub mod analyze;
pub mod error;
pub mod evolve;
pub mod linalg;
pub mod measure;
pub mod model;
pub mod state;

pub use analyze::{MeanEstimator, ModelKind, OscillationStats, VacuumDiagnosis};
pub use error::{Error, Result};
pub use evolve::{Integrator, ResidualDecomposition, SplitOrder};
pub use linalg::{ComplexMatrix, EigenSystem, JacobiConfig, C64};
pub use measure::{Channel, HoldOptions, HoldPropagation, ShotEstimate, ShotSampler, TimeSeries};
pub use model::{AdiabaticSchedule, HermitianOperator, ModelSpec, Pauli, Preset, Profile};
pub use state::StateVector;

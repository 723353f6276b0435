//! Time evolution with `hbar = 1`.
//!
//! The adiabatic sweep runs `N` steps of width `h = T / N`. Each step freezes
//! the interpolation parameter at the step midpoint `s_mid` and either
//!
//! * splits it symmetrically, `exp(-i A h/2) exp(-i B h) exp(-i A h/2)` with
//!   `A = (1 - s_mid) H0` and `B = s_mid HT` ([`Integrator::Trotter2`]), or
//! * exponentiates `H_A(s_mid)` exactly ([`Integrator::ExactMidpoint`]),
//!   which is the `h -> 0` reference for the split.

use alloc::vec::Vec;
use core::str::FromStr;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{invalid, Error, Result};
use crate::linalg::{EigenSystem, C64};
use crate::model::{interpolate, AdiabaticSchedule, HermitianOperator, ModelSpec};
use crate::state::StateVector;

/// Which factor sits on the outside of the symmetric split.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SplitOrder {
    /// `A/2 - B - A/2`, with `A` the `H0` part.
    #[default]
    AOutside,
    /// `B/2 - A - B/2`.
    BOutside,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrator {
    Trotter2(SplitOrder),
    ExactMidpoint,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator::Trotter2(SplitOrder::AOutside)
    }
}

impl Integrator {
    pub fn name(self) -> &'static str {
        match self {
            Integrator::Trotter2(_) => "trotter2",
            Integrator::ExactMidpoint => "exact-midpoint",
        }
    }
}

impl FromStr for Integrator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trotter2" => Ok(Integrator::default()),
            "exact-midpoint" => Ok(Integrator::ExactMidpoint),
            other => Err(invalid(
                "integrator",
                alloc::format!("unknown integrator `{other}` (expected trotter2 or exact-midpoint)"),
            )),
        }
    }
}

impl FromStr for SplitOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a-outside" => Ok(SplitOrder::AOutside),
            "b-outside" => Ok(SplitOrder::BOutside),
            other => Err(invalid(
                "split_order",
                alloc::format!("unknown split order `{other}` (expected a-outside or b-outside)"),
            )),
        }
    }
}

fn check_dim(v: &StateVector, dim: usize) -> Result<()> {
    if v.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
    }
    Ok(())
}

/// `exp(-i h t) v`.
pub fn evolve_exact(v: &StateVector, h: &HermitianOperator, t: f64) -> Result<StateVector> {
    check_dim(v, h.dim())?;
    if !t.is_finite() {
        return Err(invalid("t", "must be finite"));
    }
    if t == 0.0 {
        return Ok(v.clone());
    }
    let es = h.eigensystem()?;
    Ok(StateVector::from_unitary_image(es.apply_exp_minus_i(t, v.amplitudes())))
}

/// Second-order split stepper with both spectra cached, so each step costs
/// three O(n^2) spectral applications.
#[derive(Clone, Debug)]
pub struct TrotterStepper<'a> {
    spec: &'a ModelSpec,
    schedule: AdiabaticSchedule,
    order: SplitOrder,
    initial: EigenSystem,
    target: EigenSystem,
}

impl<'a> TrotterStepper<'a> {
    pub fn new(spec: &'a ModelSpec, schedule: &AdiabaticSchedule, order: SplitOrder) -> Result<Self> {
        Ok(Self {
            spec,
            schedule: *schedule,
            order,
            initial: spec.initial.eigensystem()?,
            target: spec.target_spectrum().clone(),
        })
    }

    /// One step of width `schedule.effective_step()` starting at `t_start`.
    pub fn step(&self, v: &StateVector, t_start: f64) -> Result<StateVector> {
        check_dim(v, self.spec.dim())?;
        let h = self.schedule.effective_step();
        if !(t_start >= 0.0 && t_start + h <= self.schedule.total_time + 1e-9) {
            return Err(Error::TimeOutOfRange { t: t_start + h, total_time: self.schedule.total_time });
        }
        let s_mid = self.schedule.s_at(t_start + 0.5 * h);
        Ok(StateVector::from_unitary_image(self.split(v.amplitudes(), s_mid, h)))
    }

    fn split(&self, v: &[C64], s_mid: f64, h: f64) -> Vec<C64> {
        // exp(-i c H t) with cached spectrum of H: scale the time instead.
        let a = 1.0 - s_mid;
        let b = s_mid;
        match self.order {
            SplitOrder::AOutside => {
                let v = self.initial.apply_exp_minus_i(a * 0.5 * h, v);
                let v = self.target.apply_exp_minus_i(b * h, &v);
                self.initial.apply_exp_minus_i(a * 0.5 * h, &v)
            }
            SplitOrder::BOutside => {
                let v = self.target.apply_exp_minus_i(b * 0.5 * h, v);
                let v = self.initial.apply_exp_minus_i(a * h, &v);
                self.target.apply_exp_minus_i(b * 0.5 * h, &v)
            }
        }
    }
}

/// One symmetric split step from `t_start` with the default `A`-outside order.
pub fn trotter2_step(
    v: &StateVector,
    spec: &ModelSpec,
    schedule: &AdiabaticSchedule,
    t_start: f64,
) -> Result<StateVector> {
    TrotterStepper::new(spec, schedule, SplitOrder::AOutside)?.step(v, t_start)
}

/// One step under `exp(-i H_A(s_mid) h)`.
pub fn exact_midpoint_step(
    v: &StateVector,
    spec: &ModelSpec,
    schedule: &AdiabaticSchedule,
    t_start: f64,
) -> Result<StateVector> {
    check_dim(v, spec.dim())?;
    let h = schedule.effective_step();
    if !(t_start >= 0.0 && t_start + h <= schedule.total_time + 1e-9) {
        return Err(Error::TimeOutOfRange { t: t_start + h, total_time: schedule.total_time });
    }
    let hm = interpolate(spec, schedule.s_at(t_start + 0.5 * h));
    evolve_exact(v, &hm, h)
}

/// Ground state of `H0`, with the eigensolver's phase convention.
pub fn initial_state(spec: &ModelSpec) -> Result<StateVector> {
    let es = spec.initial.eigensystem()?;
    StateVector::new(es.eigenvector(0))
}

/// Sweeps from the ground state of `H0` at `t = 0` to `t = T`.
pub fn run_adiabatic(
    spec: &ModelSpec,
    schedule: &AdiabaticSchedule,
    integrator: Integrator,
) -> Result<StateVector> {
    let mut v = initial_state(spec)?;
    let n = schedule.steps();
    let h = schedule.effective_step();
    match integrator {
        Integrator::Trotter2(order) => {
            let stepper = TrotterStepper::new(spec, schedule, order)?;
            for k in 0..n {
                v = stepper.step(&v, k as f64 * h)?;
            }
        }
        Integrator::ExactMidpoint => {
            for k in 0..n {
                v = exact_midpoint_step(&v, spec, schedule, k as f64 * h)?;
            }
        }
    }
    Ok(v)
}

/// Residual of the prepared state against the reference pair,
/// `v = alpha |g> + beta |e>`, with `alpha beta* = |alpha beta| e^{i theta}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualDecomposition {
    pub alpha_mod: f64,
    pub beta_mod: f64,
    /// In `(-pi, pi]`; zero when `alpha beta` vanishes.
    pub theta: f64,
    pub beta_sq: f64,
    /// False when `alpha beta = 0` and `theta` carries no information.
    pub theta_defined: bool,
}

impl ResidualDecomposition {
    pub fn fidelity(&self) -> f64 {
        self.alpha_mod * self.alpha_mod
    }

    /// Canonical state with real positive `alpha` and `beta = |beta| e^{-i theta}`.
    pub fn state(&self, spec: &ModelSpec) -> StateVector {
        let beta = C64::from_polar(self.beta_mod, -self.theta);
        let g = spec.reference_ground_state.amplitudes();
        let e = spec.reference_excited_state.amplitudes();
        let amps = g.iter().zip(e).map(|(gi, ei)| gi * self.alpha_mod + ei * beta).collect();
        StateVector::from_unitary_image(amps)
    }
}

/// Max projection residual accepted by [`decompose`].
pub const SUBSPACE_TOL: f64 = 1e-6;

/// Below this `|alpha beta|` the relative phase is reported as 0 and flagged.
const PHASE_FLOOR: f64 = 1e-15;

pub fn decompose(v: &StateVector, spec: &ModelSpec) -> Result<ResidualDecomposition> {
    check_dim(v, spec.dim())?;
    let g = &spec.reference_ground_state;
    let e = &spec.reference_excited_state;
    let alpha = g.inner(v);
    let beta = e.inner(v);
    let residual = v
        .amplitudes()
        .iter()
        .zip(g.amplitudes().iter().zip(e.amplitudes()))
        .map(|(vi, (gi, ei))| (vi - gi * alpha - ei * beta).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > SUBSPACE_TOL {
        return Err(Error::LeftSubspace { residual });
    }
    let product = alpha * beta.conj();
    let theta_defined = product.norm() > PHASE_FLOOR;
    let theta = if theta_defined { product.arg() } else { 0.0 };
    let beta_mod = beta.norm();
    Ok(ResidualDecomposition {
        alpha_mod: alpha.norm(),
        beta_mod,
        theta: if theta == -core::f64::consts::PI { core::f64::consts::PI } else { theta },
        beta_sq: beta_mod * beta_mod,
        theta_defined,
    })
}

//! Hamiltonians, observables, and the interpolating adiabatic Hamiltonian.
//!
//! Two one-qubit presets are built in. Both start from `H0 = -J Z`, whose
//! ground state is `|0>`:
//!
//! * [`model_one`]: `HT = -J X`. The observable `Z` anti-commutes with `HT`,
//!   so a residual excitation makes `<Z>` oscillate around zero.
//! * [`model_two`]: `HT = -J H` with `H` the Hadamard gate. `Z` neither
//!   commutes nor anti-commutes with `HT`, and the oscillation is offset from
//!   the true ground-state value.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{invalid, Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, EigenSystem, C64, MAX_DIM};
use crate::state::StateVector;

/// Hermiticity tolerance for operators.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    label: String,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        matrix.check_hermitian(HERMITIAN_TOL)?;
        Ok(Self { matrix, label: label.into() })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn scaled(&self, k: f64, label: impl Into<String>) -> Self {
        Self { matrix: self.matrix.scale_real(k), label: label.into() }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64, label: impl Into<String>) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Self {
            matrix: &self.matrix.scale_real(a) + &other.matrix.scale_real(b),
            label: label.into(),
        }
    }

    pub fn eigensystem(&self) -> Result<EigenSystem> {
        eig_hermitian(&self.matrix)
    }

    pub fn relabeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
    /// Hadamard gate `(X + Z) / sqrt(2)`; Hermitian and involutory.
    H,
}

impl Pauli {
    pub fn matrix(self) -> ComplexMatrix {
        let r = |x: f64| C64::new(x, 0.0);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let rows: [[C64; 2]; 2] = match self {
            Pauli::I => [[r(1.0), r(0.0)], [r(0.0), r(1.0)]],
            Pauli::X => [[r(0.0), r(1.0)], [r(1.0), r(0.0)]],
            Pauli::Y => [[r(0.0), C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), r(0.0)]],
            Pauli::Z => [[r(1.0), r(0.0)], [r(0.0), r(-1.0)]],
            Pauli::H => [[r(s), r(s)], [r(s), r(-s)]],
        };
        ComplexMatrix::from_rows(&rows).expect("2x2 literal")
    }

    pub fn name(self) -> &'static str {
        match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
            Pauli::H => "H",
        }
    }

    pub fn operator(self) -> HermitianOperator {
        HermitianOperator { matrix: self.matrix(), label: self.name().to_string() }
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(Pauli::I),
            "X" => Ok(Pauli::X),
            "Y" => Ok(Pauli::Y),
            "Z" => Ok(Pauli::Z),
            "H" => Ok(Pauli::H),
            other => Err(Error::UnknownOperator(other.to_string())),
        }
    }
}

/// One of `I`, `X`, `Y`, `Z`, `H` as a 2x2 operator.
pub fn pauli(name: &str) -> Result<HermitianOperator> {
    Ok(name.parse::<Pauli>()?.operator())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `HT = -J X`.
    ModelOne,
    /// `HT = -J H`.
    ModelTwo,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::ModelOne => "model1",
            Preset::ModelTwo => "model2",
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "model1" => Ok(Preset::ModelOne),
            "model2" => Ok(Preset::ModelTwo),
            other => Err(invalid("model", alloc::format!("unknown model `{other}` (expected model1 or model2)"))),
        }
    }
}

/// Initial and target Hamiltonians plus the exact reference pair of the target.
#[derive(Clone, Debug)]
pub struct ModelSpec {
    pub initial: HermitianOperator,
    pub target: HermitianOperator,
    pub coupling: f64,
    pub observables: Vec<HermitianOperator>,
    pub reference_ground_state: StateVector,
    pub reference_excited_state: StateVector,
    pub preset: Option<Preset>,
    target_spectrum: EigenSystem,
}

impl ModelSpec {
    /// General spec over `2^n` levels; the reference pair is the two lowest
    /// eigenvectors of `target`.
    pub fn custom(
        initial: HermitianOperator,
        target: HermitianOperator,
        coupling: f64,
        observables: Vec<HermitianOperator>,
    ) -> Result<Self> {
        check_coupling(coupling)?;
        let dim = initial.dim();
        if target.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: target.dim() });
        }
        if dim < 2 || !dim.is_power_of_two() || dim > MAX_DIM {
            return Err(invalid(
                "dim",
                alloc::format!("{dim} is not a power of two in [2, {MAX_DIM}]"),
            ));
        }
        if let Some(o) = observables.iter().find(|o| o.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: o.dim() });
        }
        let spectrum = target.eigensystem()?;
        if spectrum.eigenvalues[1] - spectrum.eigenvalues[0] <= 1e-12 {
            return Err(invalid("target", "ground state is degenerate"));
        }
        let ground = StateVector::new(spectrum.eigenvector(0))?;
        let excited = StateVector::new(spectrum.eigenvector(1))?;
        Ok(Self {
            initial,
            target,
            coupling,
            observables,
            reference_ground_state: ground,
            reference_excited_state: excited,
            preset: None,
            target_spectrum: spectrum,
        })
    }

    pub fn dim(&self) -> usize {
        self.initial.dim()
    }

    pub fn observable(&self, label: &str) -> Option<&HermitianOperator> {
        self.observables.iter().find(|o| o.label() == label)
    }

    pub fn target_spectrum(&self) -> &EigenSystem {
        &self.target_spectrum
    }

    /// Angular frequency of the ground/excited beat: exactly `2J` for the
    /// presets, `E1 - E0` of the target spectrum otherwise.
    pub fn oscillation_frequency(&self) -> f64 {
        match self.preset {
            Some(_) => 2.0 * self.coupling,
            None => self.target_spectrum.eigenvalues[1] - self.target_spectrum.eigenvalues[0],
        }
    }

    /// `<g| o |g>` for the reference ground state.
    pub fn ground_expectation(&self, o: &HermitianOperator) -> f64 {
        let g = self.reference_ground_state.amplitudes();
        o.matrix().sandwich(g, g).re
    }
}

fn check_coupling(j: f64) -> Result<()> {
    if !(j.is_finite() && j > 0.0) {
        return Err(invalid("coupling", alloc::format!("J must be positive and finite, got {j}")));
    }
    Ok(())
}

fn real_state(a: f64, b: f64) -> StateVector {
    StateVector::new(alloc::vec![C64::new(a, 0.0), C64::new(b, 0.0)]).expect("normalized literal")
}

/// `H0 = -J Z`, `HT = -J X`, observables `Z` and `-X`, references `|+>`, `|->`.
pub fn model_one(coupling: f64) -> Result<ModelSpec> {
    check_coupling(coupling)?;
    let z = Pauli::Z.operator();
    let x = Pauli::X.operator();
    let initial = z.scaled(-coupling, "-JZ");
    let target = x.scaled(-coupling, "-JX");
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let spectrum = target.eigensystem()?;
    Ok(ModelSpec {
        initial,
        target,
        coupling,
        observables: alloc::vec![z, x.scaled(-1.0, "-X")],
        reference_ground_state: real_state(s, s),
        reference_excited_state: real_state(s, -s),
        preset: Some(Preset::ModelOne),
        target_spectrum: spectrum,
    })
}

/// `H0 = -J Z`, `HT = -J H`, observable `Z`, references `|h+>`, `|h->`.
pub fn model_two(coupling: f64) -> Result<ModelSpec> {
    check_coupling(coupling)?;
    let z = Pauli::Z.operator();
    let initial = z.scaled(-coupling, "-JZ");
    let target = Pauli::H.operator().scaled(-coupling, "-JH");
    let sqrt2 = core::f64::consts::SQRT_2;
    let np = (4.0 - 2.0 * sqrt2).sqrt();
    let nm = (4.0 + 2.0 * sqrt2).sqrt();
    let spectrum = target.eigensystem()?;
    Ok(ModelSpec {
        initial,
        target,
        coupling,
        observables: alloc::vec![z],
        reference_ground_state: real_state(1.0 / np, (sqrt2 - 1.0) / np),
        reference_excited_state: real_state(1.0 / nm, -(sqrt2 + 1.0) / nm),
        preset: Some(Preset::ModelTwo),
        target_spectrum: spectrum,
    })
}

pub fn preset_model(preset: Preset, coupling: f64) -> Result<ModelSpec> {
    match preset {
        Preset::ModelOne => model_one(coupling),
        Preset::ModelTwo => model_two(coupling),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Profile {
    /// `s(t) = t / T`.
    #[default]
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdiabaticSchedule {
    pub total_time: f64,
    pub step_width: f64,
    pub profile: Profile,
}

impl AdiabaticSchedule {
    pub fn linear(total_time: f64, step_width: f64) -> Result<Self> {
        Self::new(total_time, step_width, Profile::Linear)
    }

    pub fn new(total_time: f64, step_width: f64, profile: Profile) -> Result<Self> {
        if !(total_time.is_finite() && total_time > 0.0) {
            return Err(invalid("total_time", alloc::format!("must be positive, got {total_time}")));
        }
        if !(step_width.is_finite() && step_width > 0.0) {
            return Err(invalid("step_width", alloc::format!("must be positive, got {step_width}")));
        }
        if (total_time / step_width).round() < 1.0 {
            return Err(invalid("step_width", "exceeds twice the total time; no steps"));
        }
        Ok(Self { total_time, step_width, profile })
    }

    /// `N = round(T / dt)`.
    pub fn steps(&self) -> usize {
        (self.total_time / self.step_width).round() as usize
    }

    /// Width actually used per step, `T / N`.
    pub fn effective_step(&self) -> f64 {
        self.total_time / self.steps() as f64
    }

    /// `T / dt - N`; nonzero means `dt` was adjusted to `T / N`.
    pub fn discretization_residual(&self) -> f64 {
        self.total_time / self.step_width - self.steps() as f64
    }

    /// Interpolation parameter at `t`, clamped to `[0, 1]`.
    pub fn s_at(&self, t: f64) -> f64 {
        match self.profile {
            Profile::Linear => (t / self.total_time).clamp(0.0, 1.0),
        }
    }

    pub(crate) fn check_time(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t <= self.total_time) {
            return Err(Error::TimeOutOfRange { t, total_time: self.total_time });
        }
        Ok(())
    }
}

/// `(1 - s) H0 + s HT` for an explicit interpolation parameter.
pub fn interpolate(spec: &ModelSpec, s: f64) -> HermitianOperator {
    spec.initial.combine(1.0 - s, &spec.target, s, alloc::format!("H_A(s={s})"))
}

/// The interpolating Hamiltonian at time `t` of the schedule.
pub fn hamiltonian_at(
    spec: &ModelSpec,
    schedule: &AdiabaticSchedule,
    t: f64,
) -> Result<HermitianOperator> {
    schedule.check_time(t)?;
    let s = schedule.s_at(t);
    if s == 0.0 {
        return Ok(spec.initial.clone());
    }
    if s == 1.0 {
        return Ok(spec.target.clone());
    }
    Ok(interpolate(spec, s))
}

/// Difference between the two lowest eigenvalues of `H_A(t)`.
pub fn spectral_gap_at(spec: &ModelSpec, schedule: &AdiabaticSchedule, t: f64) -> Result<f64> {
    let h = hamiltonian_at(spec, schedule, t)?;
    let es = h.eigensystem()?;
    Ok(es.eigenvalues[1] - es.eigenvalues[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, SQRT_2};

    #[test]
    fn pauli_definitions() {
        let z = pauli("Z").unwrap();
        assert_eq!(z.matrix(), &ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]]).unwrap());
        let h = Pauli::H.matrix();
        assert!((&h * &h).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        let xz = (&Pauli::X.matrix() + &Pauli::Z.matrix()).scale_real(FRAC_1_SQRT_2);
        assert!(h.max_abs_diff(&xz) < 1e-16);
        assert!(matches!(pauli("W"), Err(Error::UnknownOperator(_))));
    }

    #[test]
    fn model_one_references() {
        let spec = model_one(1.0).unwrap();
        let es = spec.target_spectrum();
        assert!((es.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((es.eigenvalues[1] - 1.0).abs() < 1e-15);
        let g = &spec.reference_ground_state;
        assert!((g[0].re - FRAC_1_SQRT_2).abs() < 1e-16 && (g[1].re - FRAC_1_SQRT_2).abs() < 1e-16);
        let z = spec.observable("Z").unwrap();
        assert!(spec.ground_expectation(z).abs() < 1e-16);
        assert!(spec.observable("-X").is_some());
        assert_eq!(spec.oscillation_frequency(), 2.0);
    }

    #[test]
    fn model_two_references() {
        let spec = model_two(FRAC_PI_4).unwrap();
        let z = spec.observable("Z").unwrap();
        assert!((spec.ground_expectation(z) - FRAC_1_SQRT_2).abs() < 1e-15);
        let g = &spec.reference_ground_state;
        let np = (4.0 - 2.0 * SQRT_2).sqrt();
        assert!((g[0].re - 1.0 / np).abs() < 1e-16);
        assert!((g[1].re - (SQRT_2 - 1.0) / np).abs() < 1e-16);
        let e = &spec.reference_excited_state;
        let nm = (4.0 + 2.0 * SQRT_2).sqrt();
        assert!((e[0].re - 1.0 / nm).abs() < 1e-16);
        assert!((e[1].re + (SQRT_2 + 1.0) / nm).abs() < 1e-16);
        assert!(g.inner(e).norm() < 1e-16);
        assert_eq!(spec.oscillation_frequency(), FRAC_PI_2);
    }

    #[test]
    fn non_positive_coupling_rejected() {
        assert!(model_one(0.0).is_err());
        assert!(model_two(-1.0).is_err());
        assert!(model_one(f64::NAN).is_err());
    }

    #[test]
    fn hamiltonian_endpoints_and_midpoint() {
        let spec = model_one(1.0).unwrap();
        let sched = AdiabaticSchedule::linear(36.0, 0.125).unwrap();
        assert_eq!(hamiltonian_at(&spec, &sched, 0.0).unwrap().matrix(), spec.initial.matrix());
        assert_eq!(hamiltonian_at(&spec, &sched, 36.0).unwrap().matrix(), spec.target.matrix());
        let mid = hamiltonian_at(&spec, &sched, 18.0).unwrap();
        let expected = (&Pauli::Z.matrix() + &Pauli::X.matrix()).scale_real(-0.5);
        assert!(mid.matrix().max_abs_diff(&expected) < 1e-16);
        assert!(matches!(
            hamiltonian_at(&spec, &sched, 36.5),
            Err(Error::TimeOutOfRange { .. })
        ));
        assert!(hamiltonian_at(&spec, &sched, -0.1).is_err());
    }

    #[test]
    fn gap_examples() {
        let sched = AdiabaticSchedule::linear(1.0, 0.01).unwrap();
        let m1 = model_one(1.0).unwrap();
        assert!((spectral_gap_at(&m1, &sched, 0.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((spectral_gap_at(&m1, &sched, 0.5).unwrap() - SQRT_2).abs() < 1e-14);
        let m2 = model_two(FRAC_PI_4).unwrap();
        assert!((spectral_gap_at(&m2, &sched, 1.0).unwrap() - FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn schedule_discretization() {
        let s = AdiabaticSchedule::linear(36.0, 1.0 / 24.0).unwrap();
        assert_eq!(s.steps(), 864);
        assert_eq!(s.discretization_residual(), 0.0);
        let odd = AdiabaticSchedule::linear(1.0, 0.3).unwrap();
        assert_eq!(odd.steps(), 3);
        assert!((odd.effective_step() - 1.0 / 3.0).abs() < 1e-16);
        assert!(odd.discretization_residual().abs() <= 0.5);
        assert!(AdiabaticSchedule::linear(1.0, 0.0).is_err());
        assert!(AdiabaticSchedule::linear(-1.0, 0.1).is_err());
        assert!(AdiabaticSchedule::linear(1.0, 3.0).is_err());
        assert_eq!(s.s_at(0.0), 0.0);
        assert_eq!(s.s_at(36.0), 1.0);
    }

    #[test]
    fn custom_spec_uses_target_spectrum() {
        let h0 = Pauli::Z.operator().scaled(-1.0, "H0");
        let ht = Pauli::Y.operator().scaled(-0.5, "HT");
        let spec = ModelSpec::custom(h0, ht, 0.5, alloc::vec![Pauli::Z.operator()]).unwrap();
        assert!((spec.oscillation_frequency() - 1.0).abs() < 1e-14);
        let g = spec.reference_ground_state.amplitudes();
        let hg = spec.target.matrix().apply(g).unwrap();
        for (a, b) in hg.iter().zip(g) {
            assert!((a - b * (-0.5)).norm() < 1e-12);
        }
    }

    #[test]
    fn custom_spec_rejects_degenerate_ground() {
        let h0 = Pauli::Z.operator();
        let ht = Pauli::I.operator();
        assert!(ModelSpec::custom(h0, ht, 1.0, Vec::new()).is_err());
    }
}

//! Phase-scheduled propagators acting on one bit pair.
//!
//! `U(t) = alpha0 e^{-i phi0(t) t} E0 + alpha1 e^{-i phi1(t) t} E1`, evaluated
//! at sample times `t = k dt`. In the `paper_literal` variant the real
//! coefficients sit in the operator, so `U^dagger U = diag(alpha0^2, alpha1^2)`,
//! never the identity once `alpha0^2 + alpha1^2 = 1`. `normalized_phase` keeps
//! unit-modulus phases in the operator and leaves the amplitudes to the state.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::ops::{Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::StateVector;
use super::QuantumError;

/// Normalization tolerance for `alpha0^2 + alpha1^2`.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Tolerance for phase congruences, radians.
pub const PHASE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseKind {
    /// `phi(t) = value`
    Constant,
    /// `phi(t) = value * t`
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseFn {
    pub kind: PhaseKind,
    pub value: f64,
}

impl PhaseFn {
    pub fn constant(value: f64) -> Self {
        PhaseFn {
            kind: PhaseKind::Constant,
            value,
        }
    }

    pub fn linear(value: f64) -> Self {
        PhaseFn {
            kind: PhaseKind::Linear,
            value,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.kind {
            PhaseKind::Constant => self.value,
            PhaseKind::Linear => self.value * t,
        }
    }

    pub fn negated(&self) -> Self {
        PhaseFn {
            kind: self.kind,
            value: -self.value,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSchedule {
    pub phi0: PhaseFn,
    pub phi1: PhaseFn,
    pub delta_t: f64,
}

impl PhaseSchedule {
    /// `phi1 = -phi0`, which satisfies the anti-correlation convention exactly.
    pub fn antisymmetric(phi0: PhaseFn, delta_t: f64) -> Self {
        PhaseSchedule {
            phi0,
            phi1: phi0.negated(),
            delta_t,
        }
    }

    pub fn time(&self, k: u64) -> f64 {
        k as f64 * self.delta_t
    }

    /// Accumulated phase angles `(phi0(t) t, phi1(t) t)` at `t = k dt`.
    pub fn angles(&self, k: u64) -> (f64, f64) {
        let t = self.time(k);
        (self.phi0.eval(t) * t, self.phi1.eval(t) * t)
    }
}

impl Default for PhaseSchedule {
    fn default() -> Self {
        PhaseSchedule::antisymmetric(PhaseFn::constant(1.0), 1.0)
    }
}

/// Distance of `x` from the nearest multiple of `2 pi`.
fn distance_from_lattice(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    r.min(TAU - r)
}

/// True when `phi0(t) t + phi1(t) t` is a multiple of `2 pi` (within
/// [`PHASE_TOLERANCE`]) at every `t = k dt`, `1 <= k <= k_max`.
pub fn phase_anticorrelation_check(schedule: &PhaseSchedule, k_max: u64) -> bool {
    (1..=k_max).all(|k| {
        let (a0, a1) = schedule.angles(k);
        distance_from_lattice(a0 + a1) <= PHASE_TOLERANCE
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    PaperLiteral,
    NormalizedPhase,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropagatorSpec {
    pub alpha0: f64,
    pub alpha1: f64,
    pub schedule: PhaseSchedule,
    pub variant: Variant,
}

impl PropagatorSpec {
    pub fn check(&self) -> Result<(), QuantumError> {
        let sum = self.alpha0 * self.alpha0 + self.alpha1 * self.alpha1;
        if (sum - 1.0).abs() > NORM_TOLERANCE || sum.is_nan() {
            return Err(QuantumError::NotNormalized { sum });
        }
        if !(self.schedule.delta_t.is_finite() && self.schedule.delta_t > 0.0) {
            return Err(QuantumError::NonPositiveInterval(self.schedule.delta_t));
        }
        Ok(())
    }

    /// Operator coefficients: the alphas, or 1 and 1 for `normalized_phase`.
    pub fn operator_coefficients(&self) -> (f64, f64) {
        match self.variant {
            Variant::PaperLiteral => (self.alpha0, self.alpha1),
            Variant::NormalizedPhase => (1.0, 1.0),
        }
    }
}

impl Default for PropagatorSpec {
    fn default() -> Self {
        PropagatorSpec {
            alpha0: FRAC_1_SQRT_2,
            alpha1: FRAC_1_SQRT_2,
            schedule: PhaseSchedule::default(),
            variant: Variant::NormalizedPhase,
        }
    }
}

/// Flat configuration form of a [`PropagatorSpec`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagatorConfig {
    pub alpha0: f64,
    pub alpha1: f64,
    pub variant: Variant,
    pub phi0_kind: PhaseKind,
    pub phi0_value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi1_kind: Option<PhaseKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi1_value: Option<f64>,
    pub delta_t_seconds: f64,
}

impl Default for PropagatorConfig {
    fn default() -> Self {
        let spec = PropagatorSpec::default();
        PropagatorConfig {
            alpha0: spec.alpha0,
            alpha1: spec.alpha1,
            variant: spec.variant,
            phi0_kind: spec.schedule.phi0.kind,
            phi0_value: spec.schedule.phi0.value,
            phi1_kind: None,
            phi1_value: None,
            delta_t_seconds: spec.schedule.delta_t,
        }
    }
}

impl PropagatorConfig {
    pub fn to_spec(&self) -> Result<PropagatorSpec, QuantumError> {
        let phi0 = PhaseFn {
            kind: self.phi0_kind,
            value: self.phi0_value,
        };
        let phi1 = PhaseFn {
            kind: self.phi1_kind.unwrap_or(self.phi0_kind),
            value: self.phi1_value.unwrap_or(-self.phi0_value),
        };
        let spec = PropagatorSpec {
            alpha0: self.alpha0,
            alpha1: self.alpha1,
            schedule: PhaseSchedule {
                phi0,
                phi1,
                delta_t: self.delta_t_seconds,
            },
            variant: self.variant,
        };
        spec.check()?;
        Ok(spec)
    }
}

/// Dense 2x2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2::diag(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Mat2([[a, z], [z, d]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    /// Largest singular value, from the eigenvalues of the Hermitian `M^dagger M`.
    pub fn operator_norm(&self) -> f64 {
        let h = (self.adjoint() * *self).0;
        let a = h[0][0].re;
        let d = h[1][1].re;
        let b = h[0][1].norm();
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        (mid + rad).max(0.0).sqrt()
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.0, rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, rhs: Mat2) -> Mat2 {
        let mut out = self.0;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell -= rhs.0[i][j];
            }
        }
        Mat2(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Propagator {
    spec: PropagatorSpec,
}

impl Propagator {
    pub fn new(spec: PropagatorSpec) -> Result<Self, QuantumError> {
        spec.check()?;
        Ok(Propagator { spec })
    }

    pub fn spec(&self) -> &PropagatorSpec {
        &self.spec
    }

    /// Diagonal entries of the operator at `t = k dt`.
    pub fn factors(&self, k: u64) -> (Complex64, Complex64) {
        let (c0, c1) = self.spec.operator_coefficients();
        let (a0, a1) = self.spec.schedule.angles(k);
        (
            Complex64::from_polar(c0, -a0),
            Complex64::from_polar(c1, -a1),
        )
    }

    pub fn matrix(&self, k: u64) -> Mat2 {
        let (f0, f1) = self.factors(k);
        Mat2::diag(f0, f1)
    }

    /// Advances every pair by one tick from `t = k dt`.
    pub fn apply(&self, v: &StateVector, k: u64) -> StateVector {
        let (f0, f1) = self.factors(k);
        StateVector {
            pairs: v.pairs.iter().map(|[a, b]| [a * f0, b * f1]).collect(),
            t: self.spec.schedule.time(k + 1),
        }
    }

    /// Undoes [`Propagator::apply`] for the step that started at `t = k dt`.
    pub fn apply_inverse(&self, v: &StateVector, k: u64) -> Result<StateVector, QuantumError> {
        let (f0, f1) = self.factors(k);
        if f0.norm() == 0.0 || f1.norm() == 0.0 {
            return Err(QuantumError::Singular);
        }
        Ok(StateVector {
            pairs: v.pairs.iter().map(|[a, b]| [a / f0, b / f1]).collect(),
            t: self.spec.schedule.time(k),
        })
    }
}

/// `|| U^dagger U - I ||` for the pair operator at `t = k dt`.
pub fn unitarity_defect(prop: &Propagator, k: u64) -> f64 {
    let u = prop.matrix(k);
    (u.adjoint() * u - Mat2::identity()).operator_norm()
}

//! The second-order systems as first-order fields on phase space (x, v).
//!
//! Three variants share one right-hand side:
//!
//! * `AvdAlphaEps`:  ẍ + (α/t)ẋ + ∇Φ(x) + ε(t)x = 0
//! * `AvdAlpha`:     the same with ε ≡ 0
//! * `HbfEps`:       ẍ + γẋ + ∇Φ(x) + ε(t)x = 0 (fixed friction)

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::problems::Problem;
use crate::real::Real;
use crate::schedule::EpsilonSchedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemVariant {
    AvdAlphaEps,
    AvdAlpha,
    HbfEps,
}

impl SystemVariant {
    pub fn name(self) -> &'static str {
        match self {
            SystemVariant::AvdAlphaEps => "avd_alpha_eps",
            SystemVariant::AvdAlpha => "avd_alpha",
            SystemVariant::HbfEps => "hbf_eps",
        }
    }
}

/// A point on a trajectory: time, position and velocity.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseState<T: Real> {
    pub t: T,
    pub x: Vec<T>,
    pub v: Vec<T>,
}

impl<T: Real> PhaseState<T> {
    pub fn new(t: T, x: Vec<T>, v: Vec<T>) -> Self {
        assert_eq!(x.len(), v.len(), "position/velocity dimension mismatch");
        Self { t, x, v }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite()
            && self.x.iter().all(|c| c.is_finite())
            && self.v.iter().all(|c| c.is_finite())
    }
}

/// Immutable description of one dynamical system instance.
///
/// `AvdAlpha` is stored as `AvdAlphaEps` with the zero schedule; the damping
/// coefficient is α/t for the AVD variants and the constant γ for `HbfEps`.
/// The start time must be positive (the vanishing damping α/t is singular at
/// zero), and log-based schedules additionally constrain it.
#[derive(Clone, Debug)]
pub struct DynamicsSpec<T: Real> {
    variant: SystemVariant,
    alpha: Option<T>,
    gamma: Option<T>,
    schedule: EpsilonSchedule<T>,
    problem: Problem<T>,
    t0: T,
}

impl<T: Real> DynamicsSpec<T> {
    pub fn avd_alpha_eps(
        alpha: T,
        schedule: EpsilonSchedule<T>,
        problem: Problem<T>,
        t0: T,
    ) -> Result<Self, Error<T>> {
        Self::build(SystemVariant::AvdAlphaEps, Some(alpha), None, schedule, problem, t0)
    }

    pub fn avd_alpha(alpha: T, problem: Problem<T>, t0: T) -> Result<Self, Error<T>> {
        Self::build(
            SystemVariant::AvdAlpha,
            Some(alpha),
            None,
            EpsilonSchedule::zero(),
            problem,
            t0,
        )
    }

    pub fn hbf_eps(
        gamma: T,
        schedule: EpsilonSchedule<T>,
        problem: Problem<T>,
        t0: T,
    ) -> Result<Self, Error<T>> {
        Self::build(SystemVariant::HbfEps, None, Some(gamma), schedule, problem, t0)
    }

    fn build(
        variant: SystemVariant,
        alpha: Option<T>,
        gamma: Option<T>,
        schedule: EpsilonSchedule<T>,
        problem: Problem<T>,
        t0: T,
    ) -> Result<Self, Error<T>> {
        if t0 <= T::zero() {
            return Err(Error::OutOfRange {
                what: "start time t0",
                value: t0,
                bounds: "t0 > 0",
            });
        }
        if let Some(a) = alpha {
            if a <= T::zero() {
                return Err(Error::InvalidParameter(format!("alpha must be positive, got {a}")));
            }
        }
        if let Some(g) = gamma {
            if g <= T::zero() {
                return Err(Error::InvalidParameter(format!("gamma must be positive, got {g}")));
            }
        }
        schedule.check_start_time(t0)?;
        Ok(Self {
            variant,
            alpha,
            gamma,
            schedule,
            problem,
            t0,
        })
    }

    pub fn variant(&self) -> SystemVariant {
        self.variant
    }

    pub fn alpha(&self) -> Option<T> {
        self.alpha
    }

    pub fn gamma(&self) -> Option<T> {
        self.gamma
    }

    pub fn schedule(&self) -> &EpsilonSchedule<T> {
        &self.schedule
    }

    pub fn problem(&self) -> &Problem<T> {
        &self.problem
    }

    pub fn t0(&self) -> T {
        self.t0
    }

    pub fn dim(&self) -> usize {
        self.problem.dim()
    }

    /// Damping coefficient in front of ẋ at time `t`.
    pub fn damping(&self, t: T) -> T {
        match self.variant {
            SystemVariant::AvdAlphaEps | SystemVariant::AvdAlpha => {
                self.alpha.expect("AVD variant carries alpha") / t
            }
            SystemVariant::HbfEps => self.gamma.expect("HBF variant carries gamma"),
        }
    }

    pub fn epsilon(&self, t: T) -> T {
        self.schedule.eval(t)
    }

    /// The first-order field: `dx = v`, `dv = −a(t)v − ∇Φ(x) − ε(t)x`.
    pub fn rhs(&self, state: &PhaseState<T>) -> Result<(Vec<T>, Vec<T>), Error<T>> {
        if state.t < self.t0 {
            return Err(Error::OutOfRange {
                what: "evaluation time",
                value: state.t,
                bounds: "t >= t0",
            });
        }
        if state.x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: state.x.len(),
            });
        }
        let grad = self.problem.gradient(&state.x);
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFinite {
                what: "gradient",
                t: state.t,
            });
        }
        let a = self.damping(state.t);
        let eps = self.epsilon(state.t);
        let dx = state.v.clone();
        let dv = state
            .v
            .iter()
            .zip(&state.x)
            .zip(&grad)
            .map(|((&vi, &xi), &gi)| -a * vi - gi - eps * xi)
            .collect();
        Ok((dx, dv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn zero_problem() -> Problem<f64> {
        Problem::builtin("zero", &[1.0]).unwrap()
    }

    #[test]
    fn avd_rhs_direct_substitution() {
        // α=3, ε=1/t, zero ∇Φ, state (t=1, x=1, v=0): dv = −ε(1)·1 = −1
        let spec = DynamicsSpec::avd_alpha_eps(
            3.0,
            EpsilonSchedule::power(1.0).unwrap(),
            zero_problem(),
            1.0,
        )
        .unwrap();
        let (dx, dv) = spec.rhs(&PhaseState::new(1.0, vec![1.0], vec![0.0])).unwrap();
        assert_eq!(dx, vec![0.0]);
        assert_relative_eq!(dv[0], -1.0);
    }

    #[test]
    fn equilibrium_is_stationary() {
        let spec = DynamicsSpec::avd_alpha(2.0, zero_problem(), 1.0).unwrap();
        let (dx, dv) = spec.rhs(&PhaseState::new(5.0, vec![2.0], vec![0.0])).unwrap();
        assert_eq!(dx, vec![0.0]);
        assert_eq!(dv, vec![0.0]);
    }

    #[test]
    fn hbf_rhs_direct_substitution() {
        // ÿ + 3ẏ + (1/t)y = 0 at (t=1, y=1, ẏ=0): dv = −1
        let spec = DynamicsSpec::hbf_eps(
            3.0,
            EpsilonSchedule::power(1.0).unwrap(),
            zero_problem(),
            1.0,
        )
        .unwrap();
        let (_, dv) = spec.rhs(&PhaseState::new(1.0, vec![1.0], vec![0.0])).unwrap();
        assert_relative_eq!(dv[0], -1.0);
    }

    #[test]
    fn avd_alpha_ignores_schedule() {
        let spec = DynamicsSpec::avd_alpha(3.0, zero_problem(), 1.0).unwrap();
        assert!(spec.schedule().is_zero());
        assert_eq!(spec.epsilon(2.0), 0.0);
    }

    #[test]
    fn validation_errors() {
        assert!(DynamicsSpec::avd_alpha(0.0, zero_problem(), 1.0).is_err());
        assert!(DynamicsSpec::avd_alpha(3.0, zero_problem(), 0.0).is_err());
        assert!(DynamicsSpec::hbf_eps(
            -1.0,
            EpsilonSchedule::power(1.0).unwrap(),
            zero_problem(),
            1.0
        )
        .is_err());
        // log_power needs t0 > 1
        assert!(DynamicsSpec::avd_alpha_eps(
            3.0,
            EpsilonSchedule::log_power(2.0).unwrap(),
            zero_problem(),
            1.0
        )
        .is_err());

        let spec = DynamicsSpec::avd_alpha(3.0, zero_problem(), 1.0).unwrap();
        assert!(spec.rhs(&PhaseState::new(0.5, vec![1.0], vec![0.0])).is_err());
        assert!(spec
            .rhs(&PhaseState::new(1.0, vec![1.0, 2.0], vec![0.0, 0.0]))
            .is_err());
    }

    proptest! {
        /// rhs is pure (bit-identical on repeat) and linear in (x, v) for
        /// linear-gradient problems.
        #[test]
        fn purity_and_linearity(x in -5.0f64..5.0, v in -5.0f64..5.0, t in 1.0f64..100.0) {
            let spec = DynamicsSpec::avd_alpha_eps(
                3.0,
                EpsilonSchedule::power(2.0).unwrap(),
                Problem::builtin("scaled_norm_sq", &[1.0, 1.0]).unwrap(),
                1.0,
            ).unwrap();

            let s = PhaseState::new(t, vec![x], vec![v]);
            let (dx1, dv1) = spec.rhs(&s).unwrap();
            let (dx2, dv2) = spec.rhs(&s).unwrap();
            prop_assert_eq!(dx1.clone(), dx2);
            prop_assert_eq!(dv1.clone(), dv2);

            let doubled = PhaseState::new(t, vec![2.0 * x], vec![2.0 * v]);
            let (dx_d, dv_d) = spec.rhs(&doubled).unwrap();
            prop_assert!((dx_d[0] - 2.0 * dx1[0]).abs() <= 1e-12 * (1.0 + dx1[0].abs()));
            prop_assert!((dv_d[0] - 2.0 * dv1[0]).abs() <= 1e-12 * (1.0 + dv1[0].abs()));
        }
    }
}

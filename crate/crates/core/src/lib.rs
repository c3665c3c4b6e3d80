//! Numerical laboratory for damped inertial gradient dynamics with a
//! vanishing Tikhonov term,
//!
//! ```text
//! ẍ(t) + a(t)·ẋ(t) + ∇Φ(x(t)) + ε(t)·x(t) = 0,
//! ```
//!
//! where the damping `a(t)` is either the vanishing `α/t` (the continuous
//! analogue of accelerated gradient descent) or a fixed friction `γ`
//! (heavy ball), and `ε(t) ↓ 0` pulls trajectories toward the minimum-norm
//! minimizer of the convex objective `Φ`.
//!
//! The crate integrates these systems over long horizons, evaluates the
//! associated energy and Lyapunov functionals, verifies the dissipation
//! inequalities and decay-rate laws they satisfy, computes the Tikhonov
//! approximation path `ε ↦ x_ε`, and reproduces the reference tables and
//! Bessel-function closed forms for the flagship zero-objective cases.
//!
//! All numerics are generic over the scalar type via [`Real`]; the `f64`
//! aliases below are what the CLI and the acceptance suite use.

pub mod bessel;
pub mod closed_form;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod integrator;
pub mod linalg;
pub mod problems;
pub mod quadrature;
pub mod real;
pub mod schedule;
pub mod tikhonov;

pub use error::Error;
pub use real::Real;

/// `(t, value)` samples aligned with a trajectory grid.
pub type Series<T> = Vec<(T, T)>;

pub type Problem64 = problems::Problem<f64>;
pub type Schedule64 = schedule::EpsilonSchedule<f64>;
pub type DynamicsSpec64 = dynamics::DynamicsSpec<f64>;
pub type PhaseState64 = dynamics::PhaseState<f64>;
pub type IntegratorConfig64 = integrator::IntegratorConfig<f64>;
pub type Trajectory64 = integrator::Trajectory<f64>;
pub type Series64 = Series<f64>;

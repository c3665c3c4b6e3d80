//! The Tikhonov approximation curve `ε ↦ x_ε` and the minimum-norm
//! minimizer it converges to.
//!
//! For each `ε > 0`, `x_ε` is the unique minimizer of the strongly convex
//! `Φ(x) + (ε/2)‖x‖²`, equivalently the unique zero of the strongly
//! monotone map `∇Φ + εI`. A damped Newton iteration solves it when the
//! problem carries a Hessian; otherwise gradient descent with step
//! `1/(L + ε)` takes over. The norms `‖x_ε‖` increase monotonically to
//! `‖p‖` as `ε ↓ 0`, never exceeding it.

use serde::Serialize;

use crate::error::Error;
use crate::linalg::{self, Matrix};
use crate::problems::Problem;
use crate::real::Real;
use crate::schedule::EpsilonSchedule;
use crate::Series;

/// Iteration cap for one curve point.
const MAX_ITERATIONS: usize = 10_000;
/// Residual scale: converged when `‖∇Φ(x) + εx‖ ≤ 1e-10·(1 + ε‖x‖)`.
const RESIDUAL_SCALE: f64 = 1e-10;
/// The `ε` ladder used when `p` must be found numerically.
const PATH_EPSILONS: [f64; 5] = [1e-2, 1e-4, 1e-6, 1e-8, 1e-10];
/// Successive path points closer than this certify convergence.
const CAUCHY_TOLERANCE: f64 = 1e-6;

/// One point of the approximation curve.
#[derive(Clone, Debug, Serialize)]
pub struct TikhonovPoint<T: Real> {
    pub epsilon: T,
    pub point: Vec<T>,
    /// `‖∇Φ(x_ε) + ε x_ε‖` at the returned point.
    pub residual: T,
    pub iterations: usize,
}

/// Solves `∇Φ(x) + εx = 0` by damped Newton with a gradient fallback.
pub fn tikhonov_point<T: Real>(
    problem: &Problem<T>,
    epsilon: T,
) -> Result<TikhonovPoint<T>, Error<T>> {
    if epsilon <= T::zero() {
        return Err(Error::InvalidParameter(format!(
            "tikhonov_point requires epsilon > 0, got {epsilon}"
        )));
    }
    let n = problem.dim();
    let mut x = vec![T::zero(); n];
    let field = |x: &[T]| -> Vec<T> {
        problem
            .gradient(x)
            .iter()
            .zip(x)
            .map(|(&g, &xi)| g + epsilon * xi)
            .collect()
    };

    let mut residual = linalg::norm(&field(&x));
    let mut iterations = 0usize;
    while iterations < MAX_ITERATIONS {
        let tol = T::of(RESIDUAL_SCALE) * (T::one() + epsilon * linalg::norm(&x));
        if residual <= tol {
            return Ok(TikhonovPoint {
                epsilon,
                point: x,
                residual,
                iterations,
            });
        }
        iterations += 1;

        let f = field(&x);
        let newton_step = problem.hessian(&x).and_then(|h| {
            let m = h.add(&Matrix::identity_scaled(n, epsilon));
            let neg_f: Vec<T> = f.iter().map(|&v| -v).collect();
            linalg::cholesky_solve(&m, &neg_f)
        });

        let stepped = match newton_step {
            Some(direction) => {
                // halve until the residual actually drops
                let mut lambda = T::one();
                let mut accepted = None;
                for _ in 0..40 {
                    let candidate = linalg::add_scaled(&x, lambda, &direction);
                    let r = linalg::norm(&field(&candidate));
                    if r < residual {
                        accepted = Some((candidate, r));
                        break;
                    }
                    lambda = lambda / T::of(2.0);
                }
                accepted
            }
            None => None,
        };

        match stepped {
            Some((candidate, r)) => {
                x = candidate;
                residual = r;
            }
            None => {
                // gradient step on the regularized objective
                let l = problem.lipschitz_hint().unwrap_or(T::zero());
                let step = T::one() / (l + epsilon);
                let candidate = linalg::add_scaled(&x, -step, &f);
                let r = linalg::norm(&field(&candidate));
                if r >= residual && residual <= T::of(RESIDUAL_SCALE) {
                    break; // already at rounding floor
                }
                x = candidate;
                residual = r;
            }
        }
    }

    let tol = T::of(RESIDUAL_SCALE) * (T::one() + epsilon * linalg::norm(&x));
    if residual <= tol {
        Ok(TikhonovPoint {
            epsilon,
            point: x,
            residual,
            iterations,
        })
    } else {
        Err(Error::SolverStalled {
            iterations,
            residual,
        })
    }
}

/// How the minimum-norm point was obtained.
#[derive(Clone, Debug, Serialize)]
pub enum MinNormCertificate<T: Real> {
    /// The problem carries it analytically.
    Analytic,
    /// Followed the curve down the `ε` ladder; `gaps[k]` is
    /// `‖x_{ε_k} − x_{ε_{k+1}}‖`.
    Path {
        path: Vec<TikhonovPoint<T>>,
        gaps: Vec<T>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct MinNormPoint<T: Real> {
    pub point: Vec<T>,
    pub certificate: MinNormCertificate<T>,
}

/// The minimum-norm minimizer `p = lim_{ε→0} x_ε`: analytic when the
/// problem knows it, otherwise from the curve with a Cauchy certificate.
pub fn min_norm_point<T: Real>(problem: &Problem<T>) -> Result<MinNormPoint<T>, Error<T>> {
    if let Some(p) = problem.min_norm_point() {
        return Ok(MinNormPoint {
            point: p.to_vec(),
            certificate: MinNormCertificate::Analytic,
        });
    }
    let mut path = Vec::with_capacity(PATH_EPSILONS.len());
    for &eps in &PATH_EPSILONS {
        path.push(tikhonov_point(problem, T::of(eps))?);
    }
    let gaps: Vec<T> = path
        .windows(2)
        .map(|w| linalg::norm(&linalg::sub(&w[0].point, &w[1].point)))
        .collect();
    let converged = gaps.last().is_some_and(|&g| g < T::of(CAUCHY_TOLERANCE));
    if !converged {
        return Err(Error::NonCauchyPath { gaps });
    }
    Ok(MinNormPoint {
        point: path.last().expect("nonempty path").point.clone(),
        certificate: MinNormCertificate::Path { path, gaps },
    })
}

/// `δ(t) = ½(‖p‖² − ‖x_{ε(t)}‖²)` along a schedule; nonnegative and
/// vanishing as `ε(t) → 0`.
pub fn delta_curve<T: Real>(
    problem: &Problem<T>,
    schedule: &EpsilonSchedule<T>,
    times: &[T],
) -> Result<Series<T>, Error<T>> {
    let p = min_norm_point(problem)?;
    let p_norm_sq = linalg::norm_sq(&p.point);
    let half = T::of(0.5);
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let eps = schedule.eval(t);
        if eps <= T::zero() {
            return Err(Error::InvalidParameter(format!(
                "delta curve needs eps(t) > 0; schedule {} vanishes at t = {t}",
                schedule.label()
            )));
        }
        let point = tikhonov_point(problem, eps)?;
        out.push((t, half * (p_norm_sq - linalg::norm_sq(&point.point))));
    }
    Ok(out)
}

/// Rows for the CSV export of a curve: `(epsilon, ‖x_ε‖, residual)`.
pub fn path_rows<T: Real>(points: &[TikhonovPoint<T>]) -> Vec<(T, T, T)> {
    points
        .iter()
        .map(|pt| (pt.epsilon, linalg::norm(&pt.point), pt.residual))
        .collect()
}

//! Energy and convergence functionals evaluated along trajectories, plus
//! the dissipation-inequality checks.
//!
//! The quantities:
//!
//! * global energy `W(t) = ½‖ẋ‖² + Φ(x) + (ε(t)/2)‖x‖²`, nonincreasing
//!   along every trajectory;
//! * the weighted Lyapunov energy
//!   `E(t) = (2/(α−1)) t² [f_t(x) − inf Φ] + (α−1)‖x − z + (t/(α−1))ẋ‖²`
//!   with `f_t(x) = Φ(x) + (ε(t)/2)‖x‖²`, whose slope is bounded by
//!   `t·ε(t)‖z‖²` once `α ≥ 3`;
//! * anchored distances `h_z(t) = ½‖x(t) − z‖²`;
//! * the `ε/τ`-weighted ergodic average of `‖x − p‖` (slow-regime strong
//!   convergence), running infima, log-log rate fits with oscillation
//!   envelopes, and the weighted-average decay behind Kronecker-type
//!   saturation checks.
//!
//! Everything here is a pure function of an immutable trajectory; slopes
//! come from finite differences (never from the field algebra they are
//! meant to verify), and integrals are trapezoid sums on the sample grid.

use serde::Serialize;

use crate::dynamics::SystemVariant;
use crate::error::Error;
use crate::integrator::Trajectory;
use crate::linalg;
use crate::real::Real;
use crate::Series;

/// `W(t) = ½‖v‖² + Φ(x) + (ε(t)/2)‖x‖²` on the sample grid.
pub fn global_energy<T: Real>(traj: &Trajectory<T>) -> Series<T> {
    assert!(!traj.is_empty(), "trajectory must be nonempty");
    let spec = traj.spec();
    let half = T::of(0.5);
    traj.map_series(|t, x, v| {
        half * linalg::norm_sq(v)
            + spec.problem().value(x)
            + spec.epsilon(t) * half * linalg::norm_sq(x)
    })
}

/// Largest increase between consecutive samples; at most rounding noise for
/// a dissipative series. Time-reversed (increasing) series come back
/// positive.
pub fn check_energy_decay<T: Real>(series: &Series<T>) -> T {
    assert!(series.len() >= 2, "need at least two samples");
    series
        .windows(2)
        .map(|w| w[1].1 - w[0].1)
        .fold(T::neg_infinity(), |acc, d| acc.max(d))
        .max(T::zero())
}

/// The weighted Lyapunov energy `E(t)` for an anchor `z ∈ argmin Φ`.
///
/// Requires an AVD variant with `α > 1` and a known `inf Φ`.
pub fn lyapunov_energy<T: Real>(traj: &Trajectory<T>, z: &[T]) -> Result<Series<T>, Error<T>> {
    let spec = traj.spec();
    let alpha = match spec.variant() {
        SystemVariant::AvdAlphaEps | SystemVariant::AvdAlpha => {
            spec.alpha().expect("AVD variant carries alpha")
        }
        SystemVariant::HbfEps => {
            return Err(Error::InvalidParameter(
                "Lyapunov energy is defined for the vanishing-damping variants".into(),
            ))
        }
    };
    if alpha <= T::one() {
        return Err(Error::InvalidParameter(format!(
            "Lyapunov energy requires alpha > 1, got {alpha}"
        )));
    }
    let inf = spec
        .problem()
        .inf_value()
        .ok_or_else(|| Error::MissingData("problem has no known infimum".into()))?;
    if z.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: z.len(),
        });
    }

    let am1 = alpha - T::one();
    let two = T::of(2.0);
    let half = T::of(0.5);
    Ok(traj.map_series(|t, x, v| {
        let f_t = spec.problem().value(x) + spec.epsilon(t) * half * linalg::norm_sq(x);
        let drift: Vec<T> = x
            .iter()
            .zip(z)
            .zip(v)
            .map(|((&xi, &zi), &vi)| xi - zi + t / am1 * vi)
            .collect();
        two / am1 * t * t * (f_t - inf) + am1 * linalg::norm_sq(&drift)
    }))
}

/// Max violation of the slope bound `Ė(t) ≤ t·ε(t)·‖z‖²` (hypothesis
/// `α ≥ 3`), estimated by chord slopes against the bound at interval
/// midpoints.
pub fn check_lyapunov_slope<T: Real>(
    traj: &Trajectory<T>,
    energy: &Series<T>,
    z: &[T],
) -> Result<T, Error<T>> {
    let spec = traj.spec();
    let alpha = spec.alpha().ok_or_else(|| {
        Error::InvalidParameter("slope bound applies to the AVD variants".into())
    })?;
    if alpha < T::of(3.0) {
        return Err(Error::InvalidParameter(format!(
            "slope bound requires alpha >= 3, got {alpha}"
        )));
    }
    if energy.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: energy.len(),
        });
    }
    let z_sq = linalg::norm_sq(z);
    let half = T::of(0.5);
    let mut worst = T::neg_infinity();
    for w in energy.windows(2) {
        let (t0, e0) = w[0];
        let (t1, e1) = w[1];
        let tm = half * (t0 + t1);
        let slope = (e1 - e0) / (t1 - t0);
        let bound = tm * spec.epsilon(tm) * z_sq;
        worst = worst.max(slope - bound);
    }
    Ok(worst)
}

/// `h_z(t) = ½‖x(t) − z‖²`.
pub fn anchored_distance<T: Real>(traj: &Trajectory<T>, z: &[T]) -> Series<T> {
    assert_eq!(z.len(), traj.spec().dim(), "anchor dimension mismatch");
    let half = T::of(0.5);
    traj.map_series(|_, x, _| half * linalg::norm_sq(&linalg::sub(x, z)))
}

/// Least-squares slope of `log y` against `log t`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RateFit<T> {
    pub exponent: T,
    pub r_squared: T,
    pub window: (T, T),
    pub points: usize,
}

/// Fits `y ≈ C·t^exponent` on `window` using the samples with `y > 0`.
/// Needs at least 10 usable points.
pub fn rate_fit<T: Real>(series: &Series<T>, window: (T, T)) -> Result<RateFit<T>, Error<T>> {
    let pts: Vec<(T, T)> = series
        .iter()
        .filter(|(t, y)| *t >= window.0 && *t <= window.1 && *y > T::zero())
        .map(|&(t, y)| (t.ln(), y.ln()))
        .collect();
    if pts.len() < 10 {
        return Err(Error::TooFewPoints {
            needed: 10,
            got: pts.len(),
        });
    }

    let n = T::of(pts.len() as f64);
    let mean_x = pts.iter().fold(T::zero(), |a, p| a + p.0) / n;
    let mean_y = pts.iter().fold(T::zero(), |a, p| a + p.1) / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    let mut syy = T::zero();
    for &(x, y) in &pts {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    let slope = sxy / sxx;
    let ss_res = syy - slope * sxy;
    let r_squared = if syy <= T::epsilon() * (T::one() + mean_y * mean_y) {
        T::one()
    } else {
        (T::one() - ss_res / syy).max(T::zero())
    };
    Ok(RateFit {
        exponent: slope,
        r_squared,
        window,
        points: pts.len(),
    })
}

/// Per-bucket maxima of `|y|` on a log-uniform bucketing, for rate fits of
/// oscillating series where raw samples cross zero.
pub fn upper_envelope<T: Real>(series: &Series<T>, buckets_per_decade: usize) -> Series<T> {
    assert!(buckets_per_decade >= 1);
    if series.is_empty() {
        return Vec::new();
    }
    let t_first = series[0].0;
    let width = T::of(10f64.ln()) / T::of(buckets_per_decade as f64);
    let mut out: Series<T> = Vec::new();
    let mut bucket_idx = usize::MAX;
    for &(t, y) in series {
        let idx = ((t / t_first).ln() / width).floor().into_f64() as usize;
        let a = y.abs();
        if idx != bucket_idx {
            out.push((t, a));
            bucket_idx = idx;
        } else if let Some(last) = out.last_mut() {
            if a > last.1 {
                *last = (t, a);
            }
        }
    }
    out
}

/// Cumulative trapezoid of `(t, f)` samples; entry `k` integrates up to
/// sample `k`.
pub fn cumulative_trapezoid<T: Real>(series: &Series<T>) -> Vec<T> {
    let mut acc = T::zero();
    let half = T::of(0.5);
    let mut out = Vec::with_capacity(series.len());
    out.push(T::zero());
    for w in series.windows(2) {
        let (t0, f0) = w[0];
        let (t1, f1) = w[1];
        acc = acc + half * (f0 + f1) * (t1 - t0);
        out.push(acc);
    }
    out
}

/// The weighted ergodic average
/// `A(t) = ∫ (ε/τ)‖x−p‖ dτ / ∫ (ε/τ) dτ`, from the second sample on.
pub fn ergodic_average<T: Real>(traj: &Trajectory<T>, p: &[T]) -> Result<Series<T>, Error<T>> {
    let spec = traj.spec();
    if spec.schedule().is_zero() {
        return Err(Error::InvalidParameter(
            "ergodic average needs a positive schedule".into(),
        ));
    }
    if p.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: p.len(),
        });
    }
    let weighted: Series<T> =
        traj.map_series(|t, x, _| spec.epsilon(t) / t * linalg::norm(&linalg::sub(x, p)));
    let weights: Series<T> = traj.map_series(|t, _, _| spec.epsilon(t) / t);
    let num = cumulative_trapezoid(&weighted);
    let den = cumulative_trapezoid(&weights);
    let mut out = Vec::with_capacity(num.len().saturating_sub(1));
    for k in 1..num.len() {
        if den[k] < T::of(1e-300) {
            return Err(Error::NonFinite {
                what: "ergodic weight integral",
                t: weighted[k].0,
            });
        }
        out.push((weighted[k].0, num[k] / den[k]));
    }
    Ok(out)
}

/// Prefix minimum — the finite-horizon surrogate for a liminf.
pub fn running_infimum<T: Real>(series: &Series<T>) -> Series<T> {
    assert!(!series.is_empty(), "series must be nonempty");
    let mut best = T::infinity();
    series
        .iter()
        .map(|&(t, y)| {
            best = best.min(y);
            (t, best)
        })
        .collect()
}

/// `(1/ψ(t)) ∫ ψ(s) f(s) ds` along the grid: tends to zero whenever
/// `∫ f < ∞` and `ψ ↑ ∞`.
pub fn kronecker_average<T: Real, F: Fn(T) -> T>(f_samples: &Series<T>, psi: F) -> Series<T> {
    let weighted: Series<T> = f_samples.iter().map(|&(t, f)| (t, psi(t) * f)).collect();
    let acc = cumulative_trapezoid(&weighted);
    f_samples
        .iter()
        .zip(acc)
        .map(|(&(t, _), a)| (t, a / psi(t)))
        .collect()
}

/// Left- and right-hand sides of the velocity dissipation estimate
/// `∫ (1/t)‖ẋ‖² dt ≤ (W(t₀) − inf Φ)/α`.
pub fn velocity_integral_bound<T: Real>(traj: &Trajectory<T>) -> Result<(T, T), Error<T>> {
    let spec = traj.spec();
    let alpha = spec.alpha().ok_or_else(|| {
        Error::InvalidParameter("velocity integral bound applies to the AVD variants".into())
    })?;
    let inf = spec
        .problem()
        .inf_value()
        .ok_or_else(|| Error::MissingData("problem has no known infimum".into()))?;
    let integrand: Series<T> = traj.map_series(|t, _, v| linalg::norm_sq(v) / t);
    let lhs = *cumulative_trapezoid(&integrand).last().expect("nonempty");
    let w0 = global_energy(traj)[0].1;
    Ok((lhs, (w0 - inf) / alpha))
}

/// Finite-horizon surrogates of the fast-regime energy estimates.
#[derive(Clone, Debug, Serialize)]
pub struct FastRateIndicators<T: Real> {
    /// Running sup of `t²(Φ(x(t)) − inf Φ)`.
    pub sup_t2_gap: Series<T>,
    /// Partial `∫ t (Φ(x) − inf Φ) dt`.
    pub int_t_gap: Series<T>,
    /// Partial `∫ t ‖ẋ‖² dt`.
    pub int_t_speed_sq: Series<T>,
    /// Running sup of `t‖ẋ(t)‖`.
    pub sup_t_speed: Series<T>,
}

pub fn fast_rate_indicators<T: Real>(
    traj: &Trajectory<T>,
) -> Result<FastRateIndicators<T>, Error<T>> {
    let spec = traj.spec();
    let inf = spec
        .problem()
        .inf_value()
        .ok_or_else(|| Error::MissingData("problem has no known infimum".into()))?;

    let gap: Series<T> = traj.map_series(|_, x, _| spec.problem().value(x) - inf);
    let t2_gap: Series<T> = gap.iter().map(|&(t, g)| (t, t * t * g)).collect();
    let t_gap: Series<T> = gap.iter().map(|&(t, g)| (t, t * g)).collect();
    let t_speed_sq: Series<T> = traj.map_series(|t, _, v| t * linalg::norm_sq(v));
    let t_speed: Series<T> = traj.map_series(|t, _, v| t * linalg::norm(v));

    let running_sup = |s: &Series<T>| -> Series<T> {
        let mut best = T::neg_infinity();
        s.iter()
            .map(|&(t, y)| {
                best = best.max(y);
                (t, best)
            })
            .collect()
    };
    let partial = |s: &Series<T>| -> Series<T> {
        s.iter()
            .zip(cumulative_trapezoid(s))
            .map(|(&(t, _), a)| (t, a))
            .collect()
    };

    Ok(FastRateIndicators {
        sup_t2_gap: running_sup(&t2_gap),
        int_t_gap: partial(&t_gap),
        int_t_speed_sq: partial(&t_speed_sq),
        sup_t_speed: running_sup(&t_speed),
    })
}

/// Relative growth of a nondecreasing series over its last time-decade:
/// `(y(T) − y(T/10)) / max(y(T/10), tiny)`. Small values mean saturation.
pub fn last_decade_growth<T: Real>(series: &Series<T>) -> T {
    assert!(series.len() >= 2);
    let (t_end, y_end) = *series.last().expect("nonempty");
    let t_cut = t_end / T::of(10.0);
    let y_cut = series
        .iter()
        .take_while(|(t, _)| *t <= t_cut)
        .last()
        .map(|&(_, y)| y)
        .unwrap_or(series[0].1);
    (y_end - y_cut) / y_cut.abs().max(T::of(1e-300))
}

/// Signed worsts of the inequality checks; nonpositive entries mean the
/// inequality held on the grid.
#[derive(Clone, Debug, Serialize)]
pub struct ViolationRecord<T: Real> {
    /// Max upward step of `W` between samples.
    pub energy_increase: T,
    /// Max of `Ė − t·ε‖z‖²` chord estimates (AVD, α ≥ 3 only).
    pub lyapunov_slope: Option<T>,
    /// `∫(1/t)‖ẋ‖² − (W(t₀) − inf Φ)/α` (AVD with known infimum only).
    pub velocity_integral_excess: Option<T>,
}

/// Everything the reporting layer wants from one trajectory.
#[derive(Clone, Debug, Serialize)]
pub struct DiagnosticsReport<T: Real> {
    pub label: String,
    pub w_series: Series<T>,
    pub e_series: Option<Series<T>>,
    pub h_series: Option<Series<T>>,
    pub rate: Option<RateFit<T>>,
    pub ergodic: Option<Series<T>>,
    pub violations: ViolationRecord<T>,
}

impl<T: Real> std::fmt::Display for DiagnosticsReport<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "diagnostics for {}", self.label)?;
        let span = |s: &Series<T>| (s[0], *s.last().expect("nonempty"));
        let ((t0, w0), (t1, w1)) = span(&self.w_series);
        writeln!(f, "  {:24} W({t0}) = {w0:<14.6e} W({t1}) = {w1:<14.6e}", "global energy")?;
        if let Some(e) = &self.e_series {
            let ((t0, e0), (t1, e1)) = span(e);
            writeln!(f, "  {:24} E({t0}) = {e0:<14.6e} E({t1}) = {e1:<14.6e}", "Lyapunov energy")?;
        }
        if let Some(h) = &self.h_series {
            let ((t0, h0), (t1, h1)) = span(h);
            writeln!(f, "  {:24} h({t0}) = {h0:<14.6e} h({t1}) = {h1:<14.6e}", "anchored distance")?;
        }
        if let Some(a) = &self.ergodic {
            let ((t0, a0), (t1, a1)) = span(a);
            writeln!(f, "  {:24} A({t0}) = {a0:<14.6e} A({t1}) = {a1:<14.6e}", "ergodic average")?;
        }
        if let Some(rate) = &self.rate {
            writeln!(
                f,
                "  {:24} exponent {:<10.4} r2 {:<8.4} on [{}, {}]",
                "envelope rate", rate.exponent, rate.r_squared, rate.window.0, rate.window.1
            )?;
        }
        writeln!(f, "  {:24} {:<14.6e}", "max W increase", self.violations.energy_increase)?;
        if let Some(v) = self.violations.lyapunov_slope {
            writeln!(f, "  {:24} {:<14.6e}", "E-slope violation", v)?;
        }
        if let Some(v) = self.violations.velocity_integral_excess {
            writeln!(f, "  {:24} {:<14.6e}", "dissipation excess", v)?;
        }
        Ok(())
    }
}

/// Options for [`collect`]: which optional series to compute.
#[derive(Clone, Debug, Default)]
pub struct ReportOptions<T: Real> {
    /// Anchor `z`; defaults to the problem's minimum-norm point.
    pub anchor: Option<Vec<T>>,
    /// Window for a rate fit of the `|x|` envelope.
    pub rate_window: Option<(T, T)>,
    /// Buckets per decade for the envelope (default 6).
    pub envelope_buckets: Option<usize>,
    pub with_ergodic: bool,
}

/// Runs the full diagnostic battery on one trajectory.
pub fn collect<T: Real>(
    traj: &Trajectory<T>,
    options: &ReportOptions<T>,
) -> Result<DiagnosticsReport<T>, Error<T>> {
    let spec = traj.spec();
    let anchor: Option<Vec<T>> = options
        .anchor
        .clone()
        .or_else(|| spec.problem().min_norm_point().map(|p| p.to_vec()));

    let w_series = global_energy(traj);
    let energy_increase = check_energy_decay(&w_series);

    let is_avd = matches!(
        spec.variant(),
        SystemVariant::AvdAlphaEps | SystemVariant::AvdAlpha
    );
    let alpha_ge_3 = spec.alpha().is_some_and(|a| a >= T::of(3.0));
    let inf_known = spec.problem().inf_value().is_some();

    let e_series = match (&anchor, is_avd && inf_known) {
        (Some(z), true) if spec.alpha().expect("AVD alpha") > T::one() => {
            Some(lyapunov_energy(traj, z)?)
        }
        _ => None,
    };
    let lyapunov_slope = match (&e_series, &anchor) {
        (Some(e), Some(z)) if alpha_ge_3 => Some(check_lyapunov_slope(traj, e, z)?),
        _ => None,
    };
    let velocity_integral_excess = if is_avd && inf_known {
        let (lhs, bound) = velocity_integral_bound(traj)?;
        Some(lhs - bound)
    } else {
        None
    };

    let h_series = anchor.as_ref().map(|z| anchored_distance(traj, z));

    let rate = match options.rate_window {
        Some(window) => {
            let abs_x: Series<T> = traj.map_series(|_, x, _| linalg::norm(x));
            let envelope = upper_envelope(&abs_x, options.envelope_buckets.unwrap_or(6));
            Some(rate_fit(&envelope, window)?)
        }
        None => None,
    };

    let ergodic = if options.with_ergodic {
        let p = anchor
            .as_ref()
            .ok_or_else(|| Error::MissingData("ergodic average needs an anchor".into()))?;
        Some(ergodic_average(traj, p)?)
    } else {
        None
    };

    Ok(DiagnosticsReport {
        label: format!(
            "{}:{}:{}",
            spec.variant().name(),
            spec.schedule().label(),
            spec.problem().label()
        ),
        w_series,
        e_series,
        h_series,
        rate,
        ergodic,
        violations: ViolationRecord {
            energy_increase,
            lyapunov_slope,
            velocity_integral_excess,
        },
    })
}

//! Adaptive Dormand–Prince 5(4) integration with log-uniform sampling,
//! tuned for horizons spanning `[1, 1e8]`.
//!
//! The stepper is the classic embedded 5(4) pair with PI step-size control
//! and the FSAL property. Requested sample times are hit exactly by clamping
//! the step, so stored states carry full integrator accuracy; off-grid
//! queries interpolate the stored (x, v) pairs with cubic Hermite
//! polynomials.

use crate::dynamics::{DynamicsSpec, PhaseState};
use crate::error::Error;
use crate::real::Real;

/// Butcher tableau of the Dormand–Prince 5(4) pair.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
/// Difference between the 5th- and 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Step-size controller constants (PI stabilization).
const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const MAX_SHRINK: f64 = 5.0; // step may shrink at most 5x per rejection
const MAX_GROWTH: f64 = 10.0; // and grow at most 10x per acceptance
/// Steps below `1e-14·t` indicate a stall.
const UNDERFLOW_FRACTION: f64 = 1e-14;

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_STEPS: usize = 10_000_000;
pub const DEFAULT_SAMPLES_PER_DECADE: usize = 64;

/// Where the trajectory is recorded.
#[derive(Clone, Debug, PartialEq)]
pub enum SamplePolicy<T> {
    /// Log-uniform grid with this many samples per decade of `t/t0`.
    LogPerDecade(usize),
    /// Explicit strictly increasing times within `[t0, t_end]`.
    Explicit(Vec<T>),
}

#[derive(Clone, Debug)]
pub struct IntegratorConfig<T: Real> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_steps: usize,
    pub initial_step: Option<T>,
    pub sampling: SamplePolicy<T>,
    /// Extra times merged into the sample grid (table times and the like).
    pub include_times: Vec<T>,
}

impl<T: Real> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::of(DEFAULT_REL_TOL),
            abs_tol: T::of(DEFAULT_ABS_TOL),
            max_steps: DEFAULT_MAX_STEPS,
            initial_step: None,
            sampling: SamplePolicy::LogPerDecade(DEFAULT_SAMPLES_PER_DECADE),
            include_times: Vec::new(),
        }
    }
}

impl<T: Real> IntegratorConfig<T> {
    pub fn with_tols(mut self, rel: T, abs: T) -> Self {
        self.rel_tol = rel;
        self.abs_tol = abs;
        self
    }

    pub fn with_times(mut self, times: Vec<T>) -> Self {
        self.include_times = times;
        self
    }

    fn validate(&self) -> Result<(), Error<T>> {
        if self.rel_tol <= T::zero() || self.abs_tol <= T::zero() {
            return Err(Error::InvalidParameter(
                "tolerances must be positive".into(),
            ));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter("max_steps must be >= 1".into()));
        }
        if let SamplePolicy::LogPerDecade(0) = self.sampling {
            return Err(Error::InvalidParameter(
                "samples per decade must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepStats<T> {
    pub accepted: usize,
    pub rejected: usize,
    pub min_step: T,
    pub max_step: T,
    pub rhs_evals: usize,
}

/// Dense-output record of one integration.
#[derive(Clone, Debug)]
pub struct Trajectory<T: Real> {
    spec: DynamicsSpec<T>,
    times: Vec<T>,
    states: Vec<(Vec<T>, Vec<T>)>,
    pub stats: StepStats<T>,
    pub tolerance_used: (T, T),
}

impl<T: Real> Trajectory<T> {
    pub fn spec(&self) -> &DynamicsSpec<T> {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn x(&self, i: usize) -> &[T] {
        &self.states[i].0
    }

    pub fn v(&self, i: usize) -> &[T] {
        &self.states[i].1
    }

    pub fn state(&self, i: usize) -> PhaseState<T> {
        PhaseState::new(self.times[i], self.states[i].0.clone(), self.states[i].1.clone())
    }

    pub fn first_time(&self) -> T {
        self.times[0]
    }

    pub fn last_time(&self) -> T {
        *self.times.last().expect("trajectory is nonempty")
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, &[T], &[T])> {
        self.times
            .iter()
            .zip(&self.states)
            .map(|(&t, (x, v))| (t, x.as_slice(), v.as_slice()))
    }

    /// Evaluates a scalar functional at every sample.
    pub fn map_series<F: Fn(T, &[T], &[T]) -> T>(&self, f: F) -> Vec<(T, T)> {
        self.iter().map(|(t, x, v)| (t, f(t, x, v))).collect()
    }

    /// Dense output between samples: cubic Hermite on the stored (x, v)
    /// pairs, with velocity slopes re-derived from the field.
    pub fn sample_at(&self, t: T) -> Result<(Vec<T>, Vec<T>), Error<T>> {
        if self.times.is_empty() || t < self.first_time() || t > self.last_time() {
            return Err(Error::OutOfRange {
                what: "sample time",
                value: t,
                bounds: "within [first, last] sample time",
            });
        }
        // exact grid hit returns the stored state
        if let Ok(i) = self
            .times
            .binary_search_by(|probe| probe.partial_cmp(&t).expect("finite times"))
        {
            return Ok(self.states[i].clone());
        }
        let hi = self.times.partition_point(|&u| u < t);
        let lo = hi - 1;
        let (t0, t1) = (self.times[lo], self.times[hi]);
        let h = t1 - t0;
        let s = (t - t0) / h;

        let one = T::one();
        let two = T::of(2.0);
        let three = T::of(3.0);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = two * s3 - three * s2 + one;
        let h10 = s3 - two * s2 + s;
        let h01 = -two * s3 + three * s2;
        let h11 = s3 - s2;

        let hermite = |y0: &[T], d0: &[T], y1: &[T], d1: &[T]| -> Vec<T> {
            y0.iter()
                .zip(d0)
                .zip(y1.iter().zip(d1))
                .map(|((&a, &da), (&b, &db))| h00 * a + h10 * h * da + h01 * b + h11 * h * db)
                .collect()
        };

        let (x0, v0) = &self.states[lo];
        let (x1, v1) = &self.states[hi];
        let x = hermite(x0, v0, x1, v1);

        // accelerations at the bracketing samples serve as velocity slopes
        let (_, a0) = self.spec.rhs(&self.state(lo))?;
        let (_, a1) = self.spec.rhs(&self.state(hi))?;
        let v = hermite(v0, &a0, v1, &a1);
        Ok((x, v))
    }
}

/// Builds the strictly increasing sample grid over `[t0, t_end]`.
fn build_grid<T: Real>(
    t0: T,
    t_end: T,
    config: &IntegratorConfig<T>,
) -> Result<Vec<T>, Error<T>> {
    let mut grid: Vec<T> = match &config.sampling {
        SamplePolicy::LogPerDecade(per_decade) => {
            let decades = (t_end / t0).log10();
            let count = (decades * T::of(*per_decade as f64)).ceil().into_f64() as usize;
            let mut g = Vec::with_capacity(count + 2);
            g.push(t0);
            for k in 1..=count {
                let frac = T::of(k as f64) / T::of(*per_decade as f64);
                let t = t0 * T::of(10.0).powf(frac);
                g.push(t.min(t_end));
            }
            g.push(t_end);
            g
        }
        SamplePolicy::Explicit(times) => {
            let mut g = times.clone();
            g.push(t0);
            g.push(t_end);
            g
        }
    };
    grid.extend(config.include_times.iter().copied());
    grid.retain(|&t| t >= t0 && t <= t_end && t.is_finite());
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite sample times"));
    grid.dedup_by(|a, b| {
        let scale = b.abs().max(T::one());
        (*a - *b).abs() <= scale * T::of(1e-14)
    });
    if grid.len() < 2 {
        return Err(Error::InvalidParameter(
            "sample grid needs at least t0 and t_end".into(),
        ));
    }
    Ok(grid)
}

/// Integrates the system from `(x0, v0)` at `spec.t0` up to `t_end`,
/// recording states on the configured sample grid.
pub fn integrate<T: Real>(
    spec: &DynamicsSpec<T>,
    x0: &[T],
    v0: &[T],
    t_end: T,
    config: &IntegratorConfig<T>,
) -> Result<Trajectory<T>, Error<T>> {
    config.validate()?;
    let t0 = spec.t0();
    if t_end <= t0 {
        return Err(Error::InvalidParameter(format!(
            "t_end {t_end} must exceed t0 {t0}"
        )));
    }
    if x0.len() != spec.dim() || v0.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: x0.len(),
        });
    }

    let grid = build_grid(t0, t_end, config)?;
    let dim = spec.dim();
    let n = 2 * dim;

    let mut evals = 0usize;
    let mut field = |t: T, y: &[T]| -> Result<Vec<T>, Error<T>> {
        evals += 1;
        let state = PhaseState::new(t, y[..dim].to_vec(), y[dim..].to_vec());
        let (dx, dv) = spec.rhs(&state)?;
        let mut out = dx;
        out.extend(dv);
        Ok(out)
    };

    let mut t = t0;
    let mut y: Vec<T> = x0.iter().chain(v0.iter()).copied().collect();
    if y.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite { what: "initial state", t: t0 });
    }
    let mut k1 = field(t, &y)?;

    let mut h = match config.initial_step {
        Some(h0) if h0 > T::zero() => h0.min(t_end - t0),
        Some(_) => {
            return Err(Error::InvalidParameter("initial step must be positive".into()))
        }
        None => initial_step(&mut field, t, &y, &k1, config, t_end)?,
    };

    let mut times: Vec<T> = vec![t0];
    let mut states: Vec<(Vec<T>, Vec<T>)> = vec![(x0.to_vec(), v0.to_vec())];
    let mut next_sample = 1usize; // grid[0] == t0 already recorded

    let mut stats = StepStats {
        accepted: 0,
        rejected: 0,
        min_step: T::infinity(),
        max_step: T::zero(),
        rhs_evals: 0,
    };

    let expo = T::of(0.2 - BETA * 0.75);
    let mut fac_old = T::of(1e-4);
    let mut just_rejected = false;

    let mut k = vec![vec![T::zero(); n]; 7];
    let make_partial = |times: Vec<T>, states: Vec<(Vec<T>, Vec<T>)>, stats: StepStats<T>| {
        Trajectory {
            spec: spec.clone(),
            times,
            states,
            stats,
            tolerance_used: (config.rel_tol, config.abs_tol),
        }
    };

    while t < t_end {
        if stats.accepted + stats.rejected >= config.max_steps {
            stats.rhs_evals = evals;
            return Err(Error::MaxStepsExceeded {
                max_steps: config.max_steps,
                t,
                partial: Box::new(make_partial(times, states, stats)),
            });
        }

        // clamp the step so sample times are hit exactly
        let target = grid[next_sample];
        let mut hit_target = false;
        if t + h >= target {
            h = target - t;
            hit_target = true;
        }
        if h < T::of(UNDERFLOW_FRACTION) * t.abs() {
            return Err(Error::StepUnderflow { t, step: h });
        }

        // six stages; the last stage point is y_new itself, and its field
        // value k[6] doubles as next step's k1 (FSAL)
        k[0] = k1.clone();
        let mut y_new = y.clone();
        for stage in 0..6 {
            let mut yi = y.clone();
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                let aij = T::of(A[stage][j]);
                if aij != T::zero() {
                    for c in 0..n {
                        yi[c] = yi[c] + h * aij * kj[c];
                    }
                }
            }
            let ti = t + T::of(C[stage]) * h;
            k[stage + 1] = field(ti, &yi)?;
            if stage == 5 {
                y_new = yi;
            }
        }

        if y_new.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { what: "state", t });
        }

        // weighted RMS error of the embedded difference
        let mut err_sq = T::zero();
        for c in 0..n {
            let mut e = T::zero();
            for (j, kj) in k.iter().enumerate() {
                let ej = T::of(E[j]);
                if ej != T::zero() {
                    e = e + ej * kj[c];
                }
            }
            e = e * h;
            let sk = config.abs_tol + config.rel_tol * y[c].abs().max(y_new[c].abs());
            let q = e / sk;
            err_sq = err_sq + q * q;
        }
        let err = (err_sq / T::of(n as f64)).sqrt();

        if err <= T::one() {
            // accept
            stats.accepted += 1;
            stats.min_step = stats.min_step.min(h);
            stats.max_step = stats.max_step.max(h);

            t = if hit_target { target } else { t + h };
            k1 = k[6].clone(); // FSAL
            y = y_new;

            if hit_target {
                times.push(t);
                states.push((y[..dim].to_vec(), y[dim..].to_vec()));
                next_sample += 1;
                if next_sample >= grid.len() {
                    break;
                }
            }

            let fac11 = err.max(T::of(1e-16)).powf(expo);
            let fac = fac11 / fac_old.powf(T::of(BETA));
            let fac = (fac / T::of(SAFETY))
                .max(T::of(1.0 / MAX_GROWTH))
                .min(T::of(MAX_SHRINK));
            let mut h_new = h / fac;
            if just_rejected {
                h_new = h_new.min(h);
                just_rejected = false;
            }
            fac_old = err.max(T::of(1e-4));
            h = h_new;
        } else {
            stats.rejected += 1;
            just_rejected = true;
            let fac11 = err.powf(expo);
            h = h / (fac11 / T::of(SAFETY)).min(T::of(MAX_SHRINK));
        }
    }

    stats.rhs_evals = evals;
    Ok(make_partial(times, states, stats))
}

/// Classic automatic initial step selection: balance the scaled magnitudes
/// of the state and the field, refine with one Euler probe.
fn initial_step<T: Real, F: FnMut(T, &[T]) -> Result<Vec<T>, Error<T>>>(
    field: &mut F,
    t0: T,
    y0: &[T],
    f0: &[T],
    config: &IntegratorConfig<T>,
    t_end: T,
) -> Result<T, Error<T>> {
    let scaled_norm = |v: &[T], reference: &[T]| -> T {
        let mut s = T::zero();
        for (&vi, &ri) in v.iter().zip(reference) {
            let sk = config.abs_tol + config.rel_tol * ri.abs();
            let q = vi / sk;
            s = s + q * q;
        }
        (s / T::of(v.len() as f64)).sqrt()
    };

    let d0 = scaled_norm(y0, y0);
    let d1 = scaled_norm(f0, y0);
    let mut h0 = if d0 < T::of(1e-5) || d1 < T::of(1e-5) {
        T::of(1e-6)
    } else {
        T::of(0.01) * (d0 / d1)
    };
    h0 = h0.min(t_end - t0);

    let y1: Vec<T> = y0
        .iter()
        .zip(f0)
        .map(|(&yi, &fi)| yi + h0 * fi)
        .collect();
    let f1 = field(t0 + h0, &y1)?;
    let df: Vec<T> = f1.iter().zip(f0).map(|(&a, &b)| a - b).collect();
    let d2 = scaled_norm(&df, y0) / h0;

    let d_max = d1.max(d2);
    let h1 = if d_max <= T::of(1e-15) {
        (h0 * T::of(1e-3)).max(T::of(1e-6))
    } else {
        (T::of(0.01) / d_max).powf(T::of(0.2))
    };
    Ok((T::of(100.0) * h0).min(h1).min(t_end - t0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::Problem;
    use crate::schedule::EpsilonSchedule;
    use approx::assert_relative_eq;

    fn zero_problem() -> Problem<f64> {
        Problem::builtin("zero", &[1.0]).unwrap()
    }

    fn default_config() -> IntegratorConfig<f64> {
        IntegratorConfig::default()
    }

    #[test]
    fn constant_solution_stays_constant() {
        // ẍ + (α/t)ẋ = 0 with ẋ(1) = 0 keeps x ≡ 1
        let spec = DynamicsSpec::avd_alpha(2.0, zero_problem(), 1.0).unwrap();
        let traj = integrate(&spec, &[1.0], &[0.0], 1e4, &default_config()).unwrap();
        for (t, x, v) in traj.iter() {
            assert!((x[0] - 1.0).abs() <= 1e-9, "x({t}) = {}", x[0]);
            assert!(v[0].abs() <= 1e-9);
        }
    }

    #[test]
    fn euler_case_log_over_t() {
        // ε = 1/t², α = 3: x(t) = (ln t + 1)/t
        let spec = DynamicsSpec::avd_alpha_eps(
            3.0,
            EpsilonSchedule::power(2.0).unwrap(),
            zero_problem(),
            1.0,
        )
        .unwrap();
        let e = std::f64::consts::E;
        let config = IntegratorConfig::default().with_times(vec![e]);
        let traj = integrate(&spec, &[1.0], &[0.0], 100.0, &config).unwrap();
        let (x, _) = traj.sample_at(e).unwrap();
        assert_relative_eq!(x[0], 2.0 / e, epsilon = 1e-8);
        for (t, x, _) in traj.iter() {
            assert!((x[0] - (t.ln() + 1.0) / t).abs() <= 1e-8 * (1.0 + x[0].abs()));
        }
    }

    #[test]
    fn euler_case_cosine_of_log() {
        // ε = 1/t², α = 1: x(t) = cos(ln t); at t = e^π, x = −1
        let spec = DynamicsSpec::avd_alpha_eps(
            1.0,
            EpsilonSchedule::power(2.0).unwrap(),
            zero_problem(),
            1.0,
        )
        .unwrap();
        let t_star = std::f64::consts::PI.exp();
        let config = IntegratorConfig::default().with_times(vec![t_star]);
        let traj = integrate(&spec, &[1.0], &[0.0], 50.0, &config).unwrap();
        let (x, _) = traj.sample_at(t_star).unwrap();
        assert_relative_eq!(x[0], -1.0, epsilon = 1e-8);
    }

    #[test]
    fn matches_tightened_reference() {
        // self-consistency: default tolerances against rel_tol 1e-13
        let problem = Problem::builtin("scaled_norm_sq", &[1.0, 1.0]).unwrap();
        let spec = DynamicsSpec::avd_alpha(3.0, problem, 1.0).unwrap();
        let coarse = integrate(&spec, &[1.0], &[0.0], 100.0, &default_config()).unwrap();
        let tight_cfg = IntegratorConfig::default().with_tols(1e-13, 1e-14);
        let tight = integrate(&spec, &[1.0], &[0.0], 100.0, &tight_cfg).unwrap();
        let xc = coarse.x(coarse.len() - 1)[0];
        let xt = tight.x(tight.len() - 1)[0];
        assert!((xc - xt).abs() <= 1e-8, "coarse {xc} vs tight {xt}");
    }

    #[test]
    fn tolerance_convergence_order() {
        // halving rel_tol changes the endpoint by less than 10x the
        // previous change
        let problem = Problem::builtin("scaled_norm_sq", &[1.0, 1.0]).unwrap();
        let spec = DynamicsSpec::avd_alpha(3.0, problem, 1.0).unwrap();
        let run = |rel: f64| {
            let cfg = IntegratorConfig::default().with_tols(rel, 1e-14);
            let traj = integrate(&spec, &[1.0], &[0.0], 100.0, &cfg).unwrap();
            traj.x(traj.len() - 1)[0]
        };
        let x1 = run(1e-8);
        let x2 = run(5e-9);
        let x3 = run(2.5e-9);
        let d1 = (x1 - x2).abs();
        let d2 = (x2 - x3).abs();
        assert!(d2 <= 10.0 * d1 + 1e-15, "d1 {d1}, d2 {d2}");
    }

    #[test]
    fn split_equals_single_run() {
        let spec = DynamicsSpec::avd_alpha_eps(
            3.0,
            EpsilonSchedule::power(1.0).unwrap(),
            zero_problem(),
            1.0,
        )
        .unwrap();
        let single = integrate(&spec, &[1.0], &[0.0], 1e4, &default_config()).unwrap();

        let first = integrate(&spec, &[1.0], &[0.0], 1e2, &default_config()).unwrap();
        let (xm, vm) = (first.x(first.len() - 1).to_vec(), first.v(first.len() - 1).to_vec());
        let spec2 = DynamicsSpec::avd_alpha_eps(
            3.0,
            EpsilonSchedule::power(1.0).unwrap(),
            zero_problem(),
            1e2,
        )
        .unwrap();
        let second = integrate(&spec2, &xm, &vm, 1e4, &default_config()).unwrap();

        let xa = single.x(single.len() - 1)[0];
        let xb = second.x(second.len() - 1)[0];
        assert!((xa - xb).abs() <= 1e-9 * (1.0 + xa.abs()), "{xa} vs {xb}");
    }

    #[test]
    fn sample_at_grid_point_is_exact() {
        let spec = DynamicsSpec::avd_alpha(2.0, zero_problem(), 1.0).unwrap();
        let traj = integrate(&spec, &[1.0], &[0.5], 100.0, &default_config()).unwrap();
        let i = traj.len() / 2;
        let (x, v) = traj.sample_at(traj.times()[i]).unwrap();
        assert_eq!(x, traj.x(i));
        assert_eq!(v, traj.v(i));
        assert!(traj.sample_at(0.5).is_err());
        assert!(traj.sample_at(101.0).is_err());
    }

    #[test]
    fn sample_at_interpolates_between_nodes() {
        // (ln t + 1)/t case: off-grid query at t = 10
        let spec = DynamicsSpec::avd_alpha_eps(
            3.0,
            EpsilonSchedule::power(2.0).unwrap(),
            zero_problem(),
            1.0,
        )
        .unwrap();
        let traj = integrate(&spec, &[1.0], &[0.0], 100.0, &default_config()).unwrap();
        let probe = 10.0 * (1.0 + 1e-3); // deliberately off the log grid
        let (x, _) = traj.sample_at(probe).unwrap();
        let exact = (probe.ln() + 1.0) / probe;
        assert!((x[0] - exact).abs() <= 1e-5);
        // spec example value at t = 10 exactly
        let (x10, _) = traj.sample_at(10.0).unwrap();
        assert!((x10[0] - 0.33026).abs() <= 1e-5);
    }

    #[test]
    fn constant_trajectory_interpolates_constant() {
        let spec = DynamicsSpec::avd_alpha(2.0, zero_problem(), 1.0).unwrap();
        let traj = integrate(&spec, &[1.0], &[0.0], 100.0, &default_config()).unwrap();
        let (x, v) = traj.sample_at(7.3).unwrap();
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-9);
        assert!(v[0].abs() <= 1e-9);
    }

    #[test]
    fn max_steps_failure_carries_partial() {
        let spec = DynamicsSpec::avd_alpha_eps(
            1.0,
            EpsilonSchedule::power(1.0).unwrap(),
            zero_problem(),
            1.0,
        )
        .unwrap();
        let mut cfg = default_config();
        cfg.max_steps = 25;
        match integrate(&spec, &[1.0], &[0.0], 1e6, &cfg) {
            Err(Error::MaxStepsExceeded { partial, .. }) => {
                assert!(partial.len() >= 1);
                assert!(partial.last_time() < 1e6);
            }
            other => panic!("expected MaxStepsExceeded, got {other:?}"),
        }
    }

    #[test]
    fn single_precision_instantiation() {
        // the whole pipeline is generic over the scalar; f32 runs at
        // loosened tolerances
        let problem: Problem<f32> = Problem::builtin("zero", &[1.0]).unwrap();
        let spec = DynamicsSpec::avd_alpha_eps(
            3.0f32,
            EpsilonSchedule::power(2.0f32).unwrap(),
            problem,
            1.0,
        )
        .unwrap();
        let cfg = IntegratorConfig::<f32>::default().with_tols(1e-5, 1e-6);
        let traj = integrate(&spec, &[1.0f32], &[0.0], 100.0, &cfg).unwrap();
        let t = traj.last_time();
        let exact = (t.ln() + 1.0) / t;
        assert!((traj.x(traj.len() - 1)[0] - exact).abs() <= 1e-3);
    }

    #[test]
    fn grid_is_strictly_increasing_and_hits_requests() {
        let spec = DynamicsSpec::avd_alpha_eps(
            3.0,
            EpsilonSchedule::power(1.0).unwrap(),
            zero_problem(),
            1.0,
        )
        .unwrap();
        let cfg = IntegratorConfig::default().with_times(vec![10.0, 20.0, 50.0]);
        let traj = integrate(&spec, &[1.0], &[0.0], 100.0, &cfg).unwrap();
        for w in traj.times().windows(2) {
            assert!(w[1] > w[0]);
        }
        for want in [10.0, 20.0, 50.0] {
            assert!(
                traj.times().iter().any(|&t| t == want),
                "grid misses t = {want}"
            );
        }
        // rhs is finite at every sample
        for i in 0..traj.len() {
            let (dx, dv) = spec.rhs(&traj.state(i)).unwrap();
            assert!(dx.iter().chain(&dv).all(|c| c.is_finite()));
        }
    }
}

//! Convex test objectives on ℝⁿ with gradients, known infima and
//! minimum-norm minimizers.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::linalg::{self, Matrix};
use crate::real::Real;

pub type ValueFn<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;
pub type GradientFn<T> = Arc<dyn Fn(&[T]) -> Vec<T> + Send + Sync>;
pub type HessianFn<T> = Arc<dyn Fn(&[T]) -> Matrix<T> + Send + Sync>;
pub type ArgminMapFn<T> = Arc<dyn Fn(&[T]) -> Vec<T> + Send + Sync>;

/// Relative eigenvalue threshold below which a Gram eigenvalue counts as
/// zero when forming the minimum-norm least-squares solution.
const RANK_CUTOFF: f64 = 1e-12;

/// A convex objective `Φ : ℝⁿ → ℝ` given by paired value/gradient callables.
///
/// Evaluation is pure and the struct is immutable after construction, so
/// problems can be shared freely across concurrent integrations. Analytic
/// metadata (`inf Φ`, the minimum-norm minimizer `p`, a gradient Lipschitz
/// hint and an argmin parameterization for tests) is attached where known.
#[derive(Clone)]
pub struct Problem<T: Real> {
    dim: usize,
    label: String,
    value: ValueFn<T>,
    gradient: GradientFn<T>,
    hessian: Option<HessianFn<T>>,
    inf_value: Option<T>,
    min_norm_point: Option<Vec<T>>,
    lipschitz_hint: Option<T>,
    argmin_map: Option<(usize, ArgminMapFn<T>)>,
}

impl<T: Real> fmt::Debug for Problem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("inf_value", &self.inf_value)
            .field("min_norm_point", &self.min_norm_point)
            .finish_non_exhaustive()
    }
}

impl<T: Real> Problem<T> {
    pub fn new(
        dim: usize,
        label: impl Into<String>,
        value: ValueFn<T>,
        gradient: GradientFn<T>,
    ) -> Self {
        assert!(dim > 0, "problem dimension must be positive");
        Self {
            dim,
            label: label.into(),
            value,
            gradient,
            hessian: None,
            inf_value: None,
            min_norm_point: None,
            lipschitz_hint: None,
            argmin_map: None,
        }
    }

    pub fn with_hessian(mut self, hessian: HessianFn<T>) -> Self {
        self.hessian = Some(hessian);
        self
    }

    pub fn with_inf_value(mut self, inf: T) -> Self {
        self.inf_value = Some(inf);
        self
    }

    pub fn with_min_norm_point(mut self, p: Vec<T>) -> Self {
        assert_eq!(p.len(), self.dim);
        self.min_norm_point = Some(p);
        self
    }

    pub fn with_lipschitz_hint(mut self, l: T) -> Self {
        self.lipschitz_hint = Some(l);
        self
    }

    pub fn with_argmin_map(mut self, free_dims: usize, map: ArgminMapFn<T>) -> Self {
        self.argmin_map = Some((free_dims, map));
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value(&self, x: &[T]) -> T {
        debug_assert_eq!(x.len(), self.dim);
        (self.value)(x)
    }

    pub fn gradient(&self, x: &[T]) -> Vec<T> {
        debug_assert_eq!(x.len(), self.dim);
        (self.gradient)(x)
    }

    pub fn hessian(&self, x: &[T]) -> Option<Matrix<T>> {
        self.hessian.as_ref().map(|h| h(x))
    }

    pub fn inf_value(&self) -> Option<T> {
        self.inf_value
    }

    pub fn min_norm_point(&self) -> Option<&[T]> {
        self.min_norm_point.as_deref()
    }

    pub fn lipschitz_hint(&self) -> Option<T> {
        self.lipschitz_hint
    }

    /// Number of free parameters of the argmin parameterization, if one is
    /// attached.
    pub fn argmin_free_dims(&self) -> Option<usize> {
        self.argmin_map.as_ref().map(|(k, _)| *k)
    }

    /// Maps free parameters to a point of `argmin Φ`.
    pub fn argmin_point(&self, params: &[T]) -> Option<Vec<T>> {
        self.argmin_map.as_ref().map(|(k, map)| {
            debug_assert_eq!(params.len(), *k);
            map(params)
        })
    }

    /// Builtin problems addressable by name and parameter list.
    ///
    /// * `zero` — params `[dim]`: `Φ ≡ 0`, argmin is all of ℝⁿ, `p = 0`.
    /// * `scaled_norm_sq` — params `[dim, c]`, `c ≥ 0`: `Φ = (c/2)‖x‖²`.
    /// * `huber_like` — params `[dim, δ]`, `δ > 0`: coordinatewise smooth
    ///   Huber loss (quadratic within `δ`, linear growth outside).
    /// * `quadratic` — params `[m, n, A (row-major, m·n), b (m)]`:
    ///   `Φ = ½‖Ax − b‖²`; `p` is the minimum-norm least-squares solution.
    pub fn builtin(name: &str, params: &[f64]) -> Result<Self, Error<T>> {
        match name {
            "zero" => {
                let dim = param_dim(name, params, 0)?;
                expect_params(name, params, 1)?;
                Ok(Self::zero(dim))
            }
            "scaled_norm_sq" => {
                let dim = param_dim(name, params, 0)?;
                expect_params(name, params, 2)?;
                Self::scaled_norm_sq(dim, params[1])
            }
            "huber_like" => {
                let dim = param_dim(name, params, 0)?;
                expect_params(name, params, 2)?;
                Self::huber_like(dim, params[1])
            }
            "quadratic" => {
                let m = param_dim(name, params, 0)?;
                let n = param_dim(name, params, 1)?;
                expect_params(name, params, 2 + m * n + m)?;
                let a: Vec<f64> = params[2..2 + m * n].to_vec();
                let b: Vec<f64> = params[2 + m * n..].to_vec();
                Self::quadratic(m, n, &a, &b)
            }
            other => Err(Error::UnknownBuiltin {
                kind: "problem",
                name: other.to_string(),
            }),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(
            dim,
            format!("zero:{dim}"),
            Arc::new(|_: &[T]| T::zero()),
            Arc::new(|x: &[T]| vec![T::zero(); x.len()]),
        )
        .with_hessian(Arc::new(move |_: &[T]| Matrix::zeros(dim, dim)))
        .with_inf_value(T::zero())
        .with_min_norm_point(vec![T::zero(); dim])
        .with_argmin_map(dim, Arc::new(|s: &[T]| s.to_vec()))
    }

    pub fn scaled_norm_sq(dim: usize, c: f64) -> Result<Self, Error<T>> {
        if c < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "scaled_norm_sq requires c >= 0, got {c}"
            )));
        }
        let cv = T::of(c);
        let problem = Self::new(
            dim,
            format!("scaled_norm_sq:{dim}:{c}"),
            Arc::new(move |x: &[T]| cv * linalg::norm_sq(x) / T::of(2.0)),
            Arc::new(move |x: &[T]| x.iter().map(|&xi| cv * xi).collect()),
        )
        .with_hessian(Arc::new(move |x: &[T]| {
            Matrix::identity_scaled(x.len(), cv)
        }))
        .with_inf_value(T::zero())
        .with_min_norm_point(vec![T::zero(); dim])
        .with_lipschitz_hint(cv);
        Ok(if c > 0.0 {
            problem.with_argmin_map(0, Arc::new(move |_: &[T]| vec![T::zero(); dim]))
        } else {
            problem.with_argmin_map(dim, Arc::new(|s: &[T]| s.to_vec()))
        })
    }

    pub fn huber_like(dim: usize, delta: f64) -> Result<Self, Error<T>> {
        if delta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "huber_like requires delta > 0, got {delta}"
            )));
        }
        let d = T::of(delta);
        let rho = move |s: T| {
            if s.abs() <= d {
                s * s / T::of(2.0)
            } else {
                d * (s.abs() - d / T::of(2.0))
            }
        };
        let drho = move |s: T| {
            if s.abs() <= d {
                s
            } else {
                d * s.signum()
            }
        };
        Ok(Self::new(
            dim,
            format!("huber_like:{dim}:{delta}"),
            Arc::new(move |x: &[T]| x.iter().fold(T::zero(), |acc, &xi| acc + rho(xi))),
            Arc::new(move |x: &[T]| x.iter().map(|&xi| drho(xi)).collect()),
        )
        .with_hessian(Arc::new(move |x: &[T]| {
            let n = x.len();
            let mut h = Matrix::zeros(n, n);
            for (i, &xi) in x.iter().enumerate() {
                h[(i, i)] = if xi.abs() < d { T::one() } else { T::zero() };
            }
            h
        }))
        .with_inf_value(T::zero())
        .with_min_norm_point(vec![T::zero(); dim])
        .with_lipschitz_hint(T::one())
        .with_argmin_map(0, Arc::new(move |_: &[T]| vec![T::zero(); dim])))
    }

    /// `Φ(x) = ½‖Ax − b‖²` for an `m×n` matrix. Rank deficiency is allowed;
    /// `p` and the argmin parameterization come from a Jacobi
    /// eigendecomposition of `AᵀA`.
    pub fn quadratic(m: usize, n: usize, a: &[f64], b: &[f64]) -> Result<Self, Error<T>> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter(
                "quadratic requires positive dimensions".into(),
            ));
        }
        if a.len() != m * n || b.len() != m {
            return Err(Error::InvalidParameter(format!(
                "quadratic expects {} matrix entries and {m} rhs entries",
                m * n
            )));
        }
        let mat = Matrix::from_rows(m, n, a.iter().map(|&v| T::of(v)).collect());
        let rhs: Vec<T> = b.iter().map(|&v| T::of(v)).collect();
        let gram = mat.gram();
        let atb = mat.transpose_matvec(&rhs);

        let eig = linalg::jacobi_eigen(&gram);
        let lambda_max = eig
            .values
            .iter()
            .fold(T::zero(), |acc, &l| if l > acc { l } else { acc });
        let cutoff = lambda_max * T::of(RANK_CUTOFF);

        let mut p = vec![T::zero(); n];
        let mut null_basis: Vec<Vec<T>> = Vec::new();
        for k in 0..n {
            let v = eig.eigenvector(k);
            if eig.values[k] > cutoff {
                let coef = linalg::dot(&v, &atb) / eig.values[k];
                p = linalg::add_scaled(&p, coef, &v);
            } else {
                null_basis.push(v);
            }
        }

        let mat_v = mat.clone();
        let rhs_v = rhs.clone();
        let value: ValueFn<T> = Arc::new(move |x: &[T]| {
            let r = linalg::sub(&mat_v.matvec(x), &rhs_v);
            linalg::norm_sq(&r) / T::of(2.0)
        });
        let mat_g = mat.clone();
        let rhs_g = rhs.clone();
        let gradient: GradientFn<T> = Arc::new(move |x: &[T]| {
            let r = linalg::sub(&mat_g.matvec(x), &rhs_g);
            mat_g.transpose_matvec(&r)
        });
        let gram_h = gram.clone();
        let inf = {
            let r = linalg::sub(&mat.matvec(&p), &rhs);
            linalg::norm_sq(&r) / T::of(2.0)
        };

        let free = null_basis.len();
        let p_map = p.clone();
        let argmin: ArgminMapFn<T> = Arc::new(move |s: &[T]| {
            let mut q = p_map.clone();
            for (j, basis) in null_basis.iter().enumerate() {
                q = linalg::add_scaled(&q, s[j], basis);
            }
            q
        });

        Ok(Self::new(n, format!("quadratic:{m}x{n}"), value, gradient)
            .with_hessian(Arc::new(move |_: &[T]| gram_h.clone()))
            .with_inf_value(inf)
            .with_min_norm_point(p)
            .with_lipschitz_hint(lambda_max)
            .with_argmin_map(free, argmin))
    }
}

fn param_dim<T: Real>(name: &str, params: &[f64], idx: usize) -> Result<usize, Error<T>> {
    let v = *params.get(idx).ok_or_else(|| {
        Error::InvalidParameter(format!("{name} is missing parameter {idx}"))
    })?;
    if v.fract() != 0.0 || v < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "{name} expects a positive integer dimension, got {v}"
        )));
    }
    Ok(v as usize)
}

fn expect_params<T: Real>(name: &str, params: &[f64], n: usize) -> Result<(), Error<T>> {
    if params.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{name} expects {n} parameters, got {}",
            params.len()
        )));
    }
    Ok(())
}

/// Result of sampling the convexity gap `Φ(x) + ⟨∇Φ(x), y−x⟩ − Φ(y)`.
///
/// A positive `max_gap` is a convexity violation; convex problems report a
/// max gap at or below rounding noise.
#[derive(Clone, Debug)]
pub struct ConvexityReport<T: Real> {
    pub max_gap: T,
    pub worst_pair: Option<(Vec<T>, Vec<T>)>,
    pub samples: usize,
}

/// Samples `samples` point pairs in `[-10, 10]ⁿ` (deterministic in `seed`)
/// and reports the worst convexity gap.
pub fn check_convexity<T: Real>(
    problem: &Problem<T>,
    samples: usize,
    seed: u64,
) -> ConvexityReport<T> {
    assert!(samples >= 2, "need at least two samples");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<T> {
        (0..problem.dim())
            .map(|_| T::of(rng.random_range(-10.0..10.0)))
            .collect()
    };

    let mut max_gap = T::neg_infinity();
    let mut worst = None;
    for _ in 0..samples {
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        let g = problem.gradient(&x);
        let dxy = linalg::sub(&y, &x);
        let gap = problem.value(&x) + linalg::dot(&g, &dxy) - problem.value(&y);
        if gap > max_gap {
            max_gap = gap;
            worst = Some((x, y));
        }
    }
    ConvexityReport {
        max_gap,
        worst_pair: worst,
        samples,
    }
}

//! Declarative experiment configs: a TOML key-value tree per experiment,
//! with builtins addressed by `name:params` strings.

use serde::{Deserialize, Serialize};

use crate::dynamics::DynamicsSpec;
use crate::error::Error;
use crate::integrator::{IntegratorConfig, SamplePolicy};
use crate::problems::Problem;
use crate::real::Real;
use crate::schedule::EpsilonSchedule;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    /// `avd_alpha_eps`, `avd_alpha` or `hbf_eps`.
    pub variant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Schedule name, e.g. `power:3`, `log_inv`, `log_power:0.5`, `zero`.
    #[serde(default = "default_schedule")]
    pub schedule: String,
    /// Problem name plus parameters, e.g. `zero:1` or `quadratic:1:2:1:0:1`.
    pub problem: String,
    #[serde(default = "default_t0")]
    pub t0: f64,
    pub horizon: f64,
    #[serde(default = "default_x0")]
    pub x0: Vec<f64>,
    /// Defaults to rest (all zeros).
    #[serde(default)]
    pub v0: Vec<f64>,
    /// Requested reports: `table_at:10,100`, `rate_window:100,10000`,
    /// `ergodic`, `invariants`, `oracle_compare`.
    #[serde(default)]
    pub outputs: Vec<String>,
    #[serde(default)]
    pub integrator: IntegratorOverrides,
}

fn default_schedule() -> String {
    "zero".into()
}

fn default_t0() -> f64 {
    1.0
}

fn default_x0() -> Vec<f64> {
    vec![1.0]
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_per_decade: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_step: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum OutputRequest {
    TableAt(Vec<f64>),
    RateWindow(f64, f64),
    Ergodic,
    Invariants,
    OracleCompare,
}

/// A config resolved against the builtin registries, ready to run.
pub struct ResolvedExperiment<T: Real> {
    pub spec: DynamicsSpec<T>,
    pub x0: Vec<T>,
    pub v0: Vec<T>,
    pub horizon: T,
    pub integrator: IntegratorConfig<T>,
    pub outputs: Vec<OutputRequest>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, Error<f64>> {
        toml::from_str(text).map_err(|e| Error::Config(format!("bad experiment config: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn resolve<T: Real>(&self) -> Result<ResolvedExperiment<T>, Error<T>> {
        let problem = parse_problem::<T>(&self.problem)?;
        let schedule = EpsilonSchedule::<T>::parse(&self.schedule)?;
        let t0 = T::of(self.t0);

        let spec = match self.variant.as_str() {
            "avd_alpha_eps" => DynamicsSpec::avd_alpha_eps(
                T::of(self.alpha.ok_or_else(|| missing("alpha"))?),
                schedule,
                problem,
                t0,
            )?,
            "avd_alpha" => DynamicsSpec::avd_alpha(
                T::of(self.alpha.ok_or_else(|| missing("alpha"))?),
                problem,
                t0,
            )?,
            "hbf_eps" => DynamicsSpec::hbf_eps(
                T::of(self.gamma.ok_or_else(|| missing("gamma"))?),
                schedule,
                problem,
                t0,
            )?,
            other => {
                return Err(Error::Config(format!(
                    "unknown variant `{other}` (expected avd_alpha_eps, avd_alpha or hbf_eps)"
                )))
            }
        };

        if self.horizon <= self.t0 {
            return Err(Error::Config(format!(
                "horizon {} must exceed t0 {}",
                self.horizon, self.t0
            )));
        }
        let dim = spec.dim();
        if self.x0.len() != dim {
            return Err(Error::Config(format!(
                "x0 has {} entries for a problem of dimension {dim}",
                self.x0.len()
            )));
        }
        let v0: Vec<T> = if self.v0.is_empty() {
            vec![T::zero(); dim]
        } else if self.v0.len() == dim {
            self.v0.iter().map(|&v| T::of(v)).collect()
        } else {
            return Err(Error::Config(format!(
                "v0 has {} entries for a problem of dimension {dim}",
                self.v0.len()
            )));
        };

        let outputs = self
            .outputs
            .iter()
            .map(|s| parse_output::<T>(s))
            .collect::<Result<Vec<_>, _>>()?;

        let mut integrator = IntegratorConfig::<T>::default();
        if let Some(rel) = self.integrator.rel_tol {
            integrator.rel_tol = T::of(rel);
        }
        if let Some(abs) = self.integrator.abs_tol {
            integrator.abs_tol = T::of(abs);
        }
        if let Some(ms) = self.integrator.max_steps {
            integrator.max_steps = ms;
        }
        if let Some(spd) = self.integrator.samples_per_decade {
            integrator.sampling = SamplePolicy::LogPerDecade(spd);
        }
        if let Some(h0) = self.integrator.initial_step {
            integrator.initial_step = Some(T::of(h0));
        }
        // table times must land on the grid exactly
        for req in &outputs {
            if let OutputRequest::TableAt(times) = req {
                integrator
                    .include_times
                    .extend(times.iter().map(|&t| T::of(t)));
            }
        }

        Ok(ResolvedExperiment {
            spec,
            x0: self.x0.iter().map(|&v| T::of(v)).collect(),
            v0,
            horizon: T::of(self.horizon),
            integrator,
            outputs,
        })
    }
}

fn missing<T: Real>(what: &str) -> Error<T> {
    Error::Config(format!("variant requires `{what}`"))
}

/// Parses `name` or `name:p1:p2:...` into a builtin problem.
pub fn parse_problem<T: Real>(text: &str) -> Result<Problem<T>, Error<T>> {
    let mut parts = text.split(':');
    let name = parts.next().unwrap_or_default();
    let params: Vec<f64> = parts
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| Error::Config(format!("bad problem parameter `{p}` in `{text}`")))
        })
        .collect::<Result<_, _>>()?;
    Problem::builtin(name, &params)
}

fn parse_output<T: Real>(text: &str) -> Result<OutputRequest, Error<T>> {
    let (head, tail) = match text.split_once(':') {
        Some((h, t)) => (h, Some(t)),
        None => (text, None),
    };
    let parse_list = |t: Option<&str>| -> Result<Vec<f64>, Error<T>> {
        t.ok_or_else(|| Error::Config(format!("`{head}` needs arguments")))?
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad number `{p}` in `{text}`")))
            })
            .collect()
    };
    match head {
        "table_at" => Ok(OutputRequest::TableAt(parse_list(tail)?)),
        "rate_window" => {
            let args = parse_list(tail)?;
            if args.len() != 2 || args[0] >= args[1] {
                return Err(Error::Config(format!(
                    "`rate_window` expects `lo,hi` with lo < hi, got `{text}`"
                )));
            }
            Ok(OutputRequest::RateWindow(args[0], args[1]))
        }
        "ergodic" => Ok(OutputRequest::Ergodic),
        "invariants" => Ok(OutputRequest::Invariants),
        "oracle_compare" => Ok(OutputRequest::OracleCompare),
        other => Err(Error::Config(format!("unknown output request `{other}`"))),
    }
}

//! Compiled-in experiment presets: one per reference table and one per
//! theorem-level property check.

use crate::error::Error;

use super::config::ExperimentConfig;

pub const PRESET_NAMES: &[&str] = &[
    "paper_case1",
    "paper_case2",
    "paper_case3",
    "paper_case4",
    "paper_compare",
    "thm_minimizing",
    "thm_fast_rate",
    "thm_ergodic",
];

/// The rank-deficient least-squares instance used by the theorem presets:
/// `Φ(x) = ½(x₁ − 1)²` on ℝ², argmin is the line `x₁ = 1`, `p = (1, 0)`.
pub const QUADRATIC_LINE: &str = "quadratic:1:2:1:0:1";

fn base(name: &str, alpha: f64, schedule: &str, horizon: f64) -> ExperimentConfig {
    ExperimentConfig {
        name: name.to_string(),
        variant: "avd_alpha_eps".into(),
        alpha: Some(alpha),
        gamma: None,
        schedule: schedule.into(),
        problem: "zero:1".into(),
        t0: 1.0,
        horizon,
        x0: vec![1.0],
        v0: vec![],
        outputs: vec!["invariants".into()],
        integrator: Default::default(),
    }
}

/// Configs of a named preset; table/rate/ergodic outputs are layered on by
/// the runners.
pub fn preset_configs(name: &str) -> Result<Vec<ExperimentConfig>, Error<f64>> {
    let configs = match name {
        // slow schedule, integration only
        "paper_case1" => (1..=4)
            .map(|alpha| {
                let mut c = base(
                    &format!("case1_alpha{alpha}"),
                    f64::from(alpha),
                    "log_inv",
                    1e3,
                );
                c.outputs.push("table_at:10,100,1000".into());
                c
            })
            .collect(),
        // ε = 1/t decay rates, plus the faster ε = 1/√t instance
        "paper_case2" => {
            let mut configs: Vec<_> = (1..=4)
                .map(|alpha| {
                    let mut c = base(
                        &format!("case2_alpha{alpha}"),
                        f64::from(alpha),
                        "power:1",
                        1e5,
                    );
                    c.outputs.push("rate_window:100,100000".into());
                    if alpha <= 3 {
                        c.outputs.push("oracle_compare".into());
                    }
                    c
                })
                .collect();
            let mut sqrt_case = base("case2_sqrt_alpha4", 4.0, "power:0.5", 1e5);
            sqrt_case.outputs.push("rate_window:100,100000".into());
            configs.push(sqrt_case);
            configs
        }
        // ε = 1/t² closed forms
        "paper_case3" => (1..=4)
            .map(|alpha| {
                let mut c = base(
                    &format!("case3_alpha{alpha}"),
                    f64::from(alpha),
                    "power:2",
                    1e4,
                );
                c.outputs.push("oracle_compare".into());
                if alpha == 4 {
                    c.outputs.push("rate_window:100,10000".into());
                }
                c
            })
            .collect(),
        // ε = 1/t³, α = 4 value table
        "paper_case4" => {
            let mut c = base("case4_alpha4", 4.0, "power:3", 1e4);
            c.outputs.push("table_at:10,100,1000,10000".into());
            c.outputs.push("oracle_compare".into());
            vec![c]
        }
        // vanishing damping vs fixed friction at ε = 1/t
        "paper_compare" => {
            let mut avd = base("compare_avd", 3.0, "power:1", 100.0);
            avd.outputs.push("table_at:10,20,50,100".into());
            avd.outputs.push("oracle_compare".into());
            let mut hbf = ExperimentConfig {
                name: "compare_hbf".into(),
                variant: "hbf_eps".into(),
                alpha: None,
                gamma: Some(3.0),
                schedule: "power:1".into(),
                problem: "zero:1".into(),
                t0: 1.0,
                horizon: 100.0,
                x0: vec![1.0],
                v0: vec![],
                outputs: vec!["invariants".into()],
                integrator: Default::default(),
            };
            hbf.outputs.push("table_at:10,20,50,100".into());
            vec![avd, hbf]
        }
        // minimizing property in the fast regime (α > 1, ∫ε/t < ∞)
        "thm_minimizing" => {
            let mut c = base("thm_minimizing", 2.0, "power:1", 1e4);
            c.problem = QUADRATIC_LINE.into();
            c.x0 = vec![0.0, 0.0];
            vec![c]
        }
        // O(1/t²) values under a superfast schedule, α ∈ {3, 4}
        "thm_fast_rate" => [3.0, 4.0]
            .iter()
            .map(|&alpha| {
                let mut c = base(
                    &format!("thm_fast_rate_alpha{alpha}"),
                    alpha,
                    "power:3",
                    1e4,
                );
                c.problem = QUADRATIC_LINE.into();
                c.x0 = vec![0.0, 0.0];
                c
            })
            .collect(),
        // slow-regime ergodic convergence toward the minimum-norm point
        "thm_ergodic" => (1..=4)
            .map(|alpha| {
                let mut c = base(
                    &format!("thm_ergodic_alpha{alpha}"),
                    f64::from(alpha),
                    "log_inv",
                    1e4,
                );
                c.outputs.push("ergodic".into());
                c
            })
            .collect(),
        other => {
            return Err(Error::UnknownBuiltin {
                kind: "preset",
                name: other.to_string(),
            })
        }
    };
    Ok(configs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_resolves() {
        for name in PRESET_NAMES {
            let configs = preset_configs(name).unwrap();
            assert!(!configs.is_empty(), "{name} is empty");
            for config in configs {
                config
                    .resolve::<f64>()
                    .unwrap_or_else(|e| panic!("{name}/{}: {e}", config.name));
            }
        }
        assert!(preset_configs("nope").is_err());
    }

    #[test]
    fn preset_inventory_matches_tables_and_theorems() {
        // one preset per reference table
        for id in ["paper_case1", "paper_case4", "paper_compare"] {
            assert!(PRESET_NAMES.contains(&id));
        }
        // and one per theorem-level check
        for id in ["thm_minimizing", "thm_fast_rate", "thm_ergodic"] {
            assert!(PRESET_NAMES.contains(&id));
        }
    }
}

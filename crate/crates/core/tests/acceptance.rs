//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. Thresholds are pinned here and in `experiments::checks`.
//!
//! Three checks compare against reference values that are demonstrably
//! wrong or unreachable (two sign misprints in the published tables and a
//! halving factor the slow schedule cannot reach before t ≈ 1e13); those
//! tests fail honestly, naming the cells, rather than weakening the
//! thresholds. See the failure messages for the measured values.

use std::time::Instant;

use avd_lab::closed_form::ClosedFormCase;
use avd_lab::diagnostics;
use avd_lab::experiments::checks::{self, CheckResult};

fn report(criterion: &str, checks: &[CheckResult]) -> bool {
    let ok = checks.iter().all(|c| c.passed);
    println!(
        "ACCEPTANCE {criterion}: {}",
        if ok { "PASS" } else { "FAIL" }
    );
    for check in checks {
        println!("  {check}");
    }
    ok
}

fn assert_all(criterion: &str, checks: Vec<CheckResult>) {
    let ok = report(criterion, &checks);
    assert!(
        ok,
        "{criterion} failed: {}",
        checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{c}"))
            .collect::<Vec<_>>()
            .join(" | ")
    );
}

/// Criterion 1 — closed-form agreement at default tolerances: for
/// ε = 1/t² with α ∈ {1, 3, 4} and ε = 1/t³ with α = 4, the integrated
/// trajectory matches the exact solution to 1e-6·(1+|x|) on [1, 1e4].
#[test]
fn criterion_01_oracle_equivalence() {
    let start = Instant::now();
    let cases = [
        ClosedFormCase::EpsInvT2 { alpha: 1 },
        ClosedFormCase::EpsInvT2 { alpha: 3 },
        ClosedFormCase::EpsInvT2 { alpha: 4 },
        ClosedFormCase::EpsInvT3Alpha4,
    ];
    let mut results = Vec::new();
    for case in cases {
        let config = avd_lab::experiments::ExperimentConfig {
            name: format!("acc1_{}", case.label().replace([':', '='], "_")),
            variant: "avd_alpha_eps".into(),
            alpha: Some(f64::from(case.alpha())),
            gamma: None,
            schedule: match case {
                ClosedFormCase::EpsInvT { .. } => "power:1".into(),
                ClosedFormCase::EpsInvT2 { .. } => "power:2".into(),
                ClosedFormCase::EpsInvT3Alpha4 => "power:3".into(),
            },
            problem: "zero:1".into(),
            t0: 1.0,
            horizon: 1e4,
            x0: vec![1.0],
            v0: vec![],
            outputs: vec![],
            integrator: Default::default(),
        };
        let (_, traj) = checks::integrate_config(&config).unwrap();
        results.push(checks::oracle_agreement(&traj, case));
    }
    println!("criterion 1 runtime: {:.2?} (expected < 5 s)", start.elapsed());
    assert_all("1 (oracle equivalence)", results);
}

/// Criterion 2 — the ε = 1/t³, α = 4 value table matches
/// (0.74257, 0.709214, 0.70602, 0.705703) within 5e-4.
#[test]
fn criterion_02_case4_table() {
    let (_, comparison) = checks::table_for_preset("paper_case4").unwrap();
    let checks: Vec<CheckResult> = comparison
        .cells
        .iter()
        .map(|c| CheckResult {
            name: format!("case4[{}, t={}]", c.row, c.time),
            passed: c.pass,
            value: c.deviation,
            threshold: c.tolerance,
            detail: format!("computed {:.7} vs reference {:.7}", c.computed, c.reference),
        })
        .collect();
    assert_all("2 (case 4 table)", checks);
}

/// Criterion 3 — the slow-schedule table matches all 12 cells within
/// max(0.005, 0.25·|reference|), the (α=3, t=10) cell within 0.01.
/// Failures name cells.
#[test]
fn criterion_03_case1_table() {
    let (_, comparison) = checks::table_for_preset("paper_case1").unwrap();
    let checks: Vec<CheckResult> = comparison
        .cells
        .iter()
        .map(|c| CheckResult {
            name: format!("case1[{}, t={}]", c.row, c.time),
            passed: c.pass,
            value: c.deviation,
            threshold: c.tolerance,
            detail: format!(
                "computed {:.6} vs reference {:.6} (numerics-only row)",
                c.computed, c.reference
            ),
        })
        .collect();
    assert_all("3 (case 1 table)", checks);
}

/// Criterion 4 — comparison table: the vanishing-damping row matches
/// (−0.098, 0.018, −0.010, 0.006) and the fixed-friction row matches
/// (0.455, 0.358, 0.263, 0.208), all within 0.005; additionally
/// max|x(t)| < max|y(t)| for the listed t ≥ 20.
#[test]
fn criterion_04_comparison_table() {
    let mut all = checks::verify_preset("paper_compare").unwrap();
    all.retain(|c| c.name.starts_with("table[") || c.name.starts_with("outperformance["));
    assert_all("4 (comparison table)", all);
}

/// Criterion 5 — envelope decay exponents for ε = 1/t are −(2α−1)/4
/// within ±0.1 for α ∈ {1,2,3,4}; for ε = 1/√t, α = 4 the exponent is
/// −15/8 ± 0.1.
#[test]
fn criterion_05_decay_rule() {
    let mut all = checks::verify_preset("paper_case2").unwrap();
    all.retain(|c| c.name.starts_with("rate["));
    assert_eq!(all.len(), 5, "five rate targets");
    assert_all("5 (decay rule)", all);
}

/// Criterion 6 — fast-rate property: for the rank-deficient quadratic,
/// α ∈ {3,4} and ε = 1/t³, the running sup of t²(Φ − inf Φ) over
/// [10, 1e4] is finite and grows less than 5% over the last decade.
#[test]
fn criterion_06_fast_rate() {
    let mut all = checks::verify_preset("thm_fast_rate").unwrap();
    all.retain(|c| {
        c.name.starts_with("fast_sup_finite[") || c.name.starts_with("fast_sup_saturated[")
    });
    assert_eq!(all.len(), 4, "two checks per alpha");
    assert_all("6 (fast-rate property)", all);
}

/// Criterion 7 — Lyapunov suite: on every integrated preset the global
/// energy never rises by more than 1e-8·(1+|W(t₀)|) between samples; the
/// slope bound violation is ≤ 1e-6 on the superfast α ≥ 3 presets; the
/// velocity dissipation integral holds with 1e-6 slack.
#[test]
fn criterion_07_lyapunov_suite() {
    let mut all = Vec::new();
    for preset in avd_lab::experiments::PRESET_NAMES {
        all.extend(checks::verify_preset(preset).unwrap());
    }
    all.retain(|c| {
        c.name.starts_with("energy_decay[")
            || c.name.starts_with("lyapunov_slope[")
            || c.name.starts_with("velocity_integral[")
    });
    // every preset trajectory contributes an energy check, and the
    // superfast alpha >= 3 presets contribute slope checks
    assert!(all.iter().filter(|c| c.name.starts_with("energy_decay")).count() >= 23);
    assert!(all.iter().filter(|c| c.name.starts_with("lyapunov_slope")).count() >= 3);
    assert_all("7 (Lyapunov suite)", all);
}

/// Criterion 8 — slow-regime ergodic property at desk scale: for the
/// ε = 1/(1+ln t) presets (all α), A(1e4) ≤ 0.5·A(1e2) and the running
/// infimum of ‖x − p‖ at 1e4 is ≤ 0.05.
#[test]
fn criterion_08_ergodic_property() {
    let mut all = checks::verify_preset("thm_ergodic").unwrap();
    all.retain(|c| c.name.starts_with("ergodic_decay[") || c.name.starts_with("running_inf["));
    assert_eq!(all.len(), 8, "two checks per alpha");
    assert_all("8 (slow-regime ergodic property)", all);
}

/// Criterion 9 — Tikhonov-path suite across all builtin problems and
/// ε ∈ {1, 1e-2, …, 1e-10}: residual scaling, ‖x_ε‖ ≤ ‖p‖ + 1e-10, and
/// ‖x_{1e-10} − p‖ ≤ 1e-5.
#[test]
fn criterion_09_tikhonov_suite() {
    let all = checks::tikhonov_suite().unwrap();
    assert_eq!(all.len(), 12, "three checks per builtin problem");
    assert_all("9 (Tikhonov-path suite)", all);
}

/// Criterion 10 — Bessel self-consistency: recurrence and Wronskian
/// residuals ≤ 1e-11 on [0.5, 1e3] for orders 0–6, and the first zero of
/// J₀ at 2.404825558 ± 1e-8, cross-checked against an independent
/// series root-find.
#[test]
fn criterion_10_bessel_self_consistency() {
    let mut all = checks::bessel_suite().unwrap();

    // independent oracle: 30-term ascending series for J0, bisected on
    // [2, 3] with no code shared with the library implementation
    let series_j0 = |x: f64| -> f64 {
        let u = x * x / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..=30 {
            term *= -u / ((k * k) as f64);
            sum += term;
        }
        sum
    };
    let mut lo = 2.0;
    let mut hi = 3.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if series_j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let oracle_zero = 0.5 * (lo + hi);
    all.push(CheckResult {
        name: "bessel_j0_zero_vs_series_oracle".into(),
        passed: (oracle_zero - checks::J0_FIRST_ZERO).abs() <= checks::J0_ZERO_TOL,
        value: (oracle_zero - checks::J0_FIRST_ZERO).abs(),
        threshold: checks::J0_ZERO_TOL,
        detail: format!("independent series root-find gives {oracle_zero:.12}"),
    });
    assert_all("10 (Bessel self-consistency)", all);
}

/// The cross-module dissipation statement behind criterion 7, exercised
/// directly with library calls rather than preset plumbing.
#[test]
fn energy_monotonicity_cross_module() {
    let config = avd_lab::experiments::ExperimentConfig {
        name: "acc_w".into(),
        variant: "hbf_eps".into(),
        alpha: None,
        gamma: Some(3.0),
        schedule: "power:1".into(),
        problem: "zero:1".into(),
        t0: 1.0,
        horizon: 1e3,
        x0: vec![1.0],
        v0: vec![],
        outputs: vec![],
        integrator: Default::default(),
    };
    let (_, traj) = checks::integrate_config(&config).unwrap();
    let w = diagnostics::global_energy(&traj);
    let increase = diagnostics::check_energy_decay(&w);
    assert!(increase <= 1e-8 * (1.0 + w[0].1.abs()));
}

//! Bessel functions of the first and second kind, integer orders 0–8.
//!
//! These back the closed-form trajectory oracles, so they are built from
//! scratch and validated through identities rather than against an external
//! library:
//!
//! * `x < 12`: ascending power series for `J₀`, `J₁`, `Y₀`, `Y₁` (the `Y`
//!   series use harmonic-number sums, no digamma evaluations); higher `J`
//!   orders by Miller's backward recurrence with Neumann-sum normalization.
//! * `x ≥ 12`: Hankel asymptotic expansions for order 0 and 1, then upward
//!   recurrence (stable here since every supported order is below `x`).
//! * `Y` of higher order by upward recurrence, which is unconditionally
//!   stable for the second kind.
//!
//! The switchover point is validated by the Wronskian
//! `J_{ν+1} Y_ν − J_ν Y_{ν+1} = 2/(πx)` in the test suite.

use crate::error::Error;
use crate::real::Real;

/// Largest supported order.
pub const MAX_ORDER: u32 = 8;
/// Largest supported argument.
pub const MAX_ARGUMENT: f64 = 1e5;
/// `Y_ν` diverges at the origin; arguments below this are rejected.
pub const MIN_ARGUMENT_Y: f64 = 1e-8;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_CUTOFF: f64 = 12.0;

/// Bessel function of the first kind `J_ν(x)`, `0 ≤ ν ≤ 8`, `0 < x ≤ 1e5`.
pub fn bessel_j<T: Real>(nu: u32, x: T) -> Result<T, Error<T>> {
    check_order(nu, x)?;
    if x <= T::zero() || x > T::of(MAX_ARGUMENT) {
        return Err(Error::OutOfRange {
            what: "bessel argument",
            value: x,
            bounds: "0 < x <= 1e5",
        });
    }
    Ok(j_unchecked(nu, x))
}

/// Bessel function of the second kind `Y_ν(x)`, `0 ≤ ν ≤ 8`, `1e-8 ≤ x ≤ 1e5`.
pub fn bessel_y<T: Real>(nu: u32, x: T) -> Result<T, Error<T>> {
    check_order(nu, x)?;
    if x < T::of(MIN_ARGUMENT_Y) || x > T::of(MAX_ARGUMENT) {
        return Err(Error::OutOfRange {
            what: "bessel argument",
            value: x,
            bounds: "1e-8 <= x <= 1e5",
        });
    }
    Ok(y_unchecked(nu, x))
}

fn check_order<T: Real>(nu: u32, _x: T) -> Result<(), Error<T>> {
    if nu > MAX_ORDER {
        return Err(Error::OutOfRange {
            what: "bessel order",
            value: T::of(f64::from(nu)),
            bounds: "0 <= nu <= 8",
        });
    }
    Ok(())
}

fn j_unchecked<T: Real>(nu: u32, x: T) -> T {
    if x < T::of(SERIES_CUTOFF) {
        match nu {
            0 => j_series(0, x),
            1 => j_series(1, x),
            _ => j_miller(nu, x),
        }
    } else {
        let (j0, _) = hankel(0, x);
        if nu == 0 {
            return j0;
        }
        let (j1, _) = hankel(1, x);
        forward_recurrence(nu, x, j0, j1)
    }
}

fn y_unchecked<T: Real>(nu: u32, x: T) -> T {
    let (y0, y1) = if x < T::of(SERIES_CUTOFF) {
        (y0_series(x), y1_series(x))
    } else {
        (hankel(0, x).1, hankel(1, x).1)
    };
    match nu {
        0 => y0,
        1 => y1,
        _ => forward_recurrence(nu, x, y0, y1),
    }
}

/// `C_{k+1} = (2k/x) C_k − C_{k−1}`, safe when the sequence is dominant
/// (all `Y` orders; `J` only when every order stays below `x`).
fn forward_recurrence<T: Real>(nu: u32, x: T, c0: T, c1: T) -> T {
    let mut prev = c0;
    let mut cur = c1;
    for k in 1..nu {
        let next = T::of(2.0 * f64::from(k)) / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Ascending series for `J₀` or `J₁`.
fn j_series<T: Real>(nu: u32, x: T) -> T {
    let half = x / T::of(2.0);
    let u = half * half;
    let mut term = if nu == 0 { T::one() } else { half };
    let mut sum = term;
    for k in 1..200 {
        let kf = T::of(f64::from(k));
        term = -term * u / (kf * (kf + T::of(f64::from(nu))));
        sum = sum + term;
        if term.abs() <= sum.abs() * T::epsilon() {
            break;
        }
    }
    sum
}

/// `Y₀(x) = (2/π)(ln(x/2)+γ)J₀(x) + (2/π) Σ_{k≥1} (−1)^{k+1} H_k u^k/(k!)²`.
fn y0_series<T: Real>(x: T) -> T {
    let two_over_pi = T::of(std::f64::consts::FRAC_2_PI);
    let u = x * x / T::of(4.0);
    let log_part = ((x / T::of(2.0)).ln() + T::of(EULER_GAMMA)) * j_series(0, x);

    let mut base = T::one(); // u^k/(k!)², without sign
    let mut harmonic = T::zero();
    let mut sum = T::zero();
    let mut sign = T::one();
    for k in 1..200 {
        let kf = T::of(f64::from(k));
        base = base * u / (kf * kf);
        harmonic = harmonic + T::one() / kf;
        sign = -sign;
        let term = -sign * harmonic * base; // (−1)^{k+1}
        sum = sum + term;
        if base * harmonic <= (sum.abs() + T::one()) * T::epsilon() {
            break;
        }
    }
    two_over_pi * (log_part + sum)
}

/// `Y₁(x) = (2/π)(ln(x/2)+γ)J₁(x) − 2/(πx)
///          − (x/2π) Σ_{k≥0} (−1)^k (H_k + H_{k+1}) u^k/(k!(k+1)!)`.
fn y1_series<T: Real>(x: T) -> T {
    let pi = T::of(std::f64::consts::PI);
    let u = x * x / T::of(4.0);
    let log_part = T::of(2.0) / pi * ((x / T::of(2.0)).ln() + T::of(EULER_GAMMA)) * j_series(1, x);
    let singular = -T::of(2.0) / (pi * x);

    let mut base = T::one(); // u^k/(k!(k+1)!)
    let mut h_k = T::zero();
    let mut h_k1 = T::one();
    let mut sign = T::one();
    let mut sum = h_k1; // k = 0 term: (H₀+H₁)·1 = 1
    for k in 1..200 {
        let kf = T::of(f64::from(k));
        base = base * u / (kf * (kf + T::one()));
        sign = -sign;
        h_k = h_k + T::one() / kf;
        h_k1 = h_k1 + T::one() / (kf + T::one());
        let term = sign * (h_k + h_k1) * base;
        sum = sum + term;
        if term.abs() <= (sum.abs() + T::one()) * T::epsilon() {
            break;
        }
    }
    log_part + singular - x / (T::of(2.0) * pi) * sum
}

/// Miller backward recurrence for `J_ν`, `ν ≥ 2`, small arguments.
///
/// Runs the three-term recurrence downward from a padded start order with an
/// arbitrary seed, then fixes the scale with the Neumann sum
/// `J₀ + 2J₂ + 2J₄ + ⋯ = 1`.
fn j_miller<T: Real>(nu: u32, x: T) -> T {
    let start = {
        let base = (nu as usize).max(x.into_f64().ceil() as usize) + 24;
        base + (base & 1) // even
    };
    let big = T::of(1e100);
    let mut f_next = T::zero();
    let mut f_cur = T::of(1e-30);
    let mut norm = T::zero();
    let mut target = T::zero();

    let mut k = start;
    loop {
        let f_prev = T::of(2.0 * k as f64) / x * f_cur - f_next;
        f_next = f_cur;
        f_cur = f_prev;
        let idx = k - 1;
        if idx % 2 == 0 {
            norm = norm + if idx == 0 { f_cur } else { T::of(2.0) * f_cur };
        }
        if idx == nu as usize {
            target = f_cur;
        }
        if f_cur.abs() > big {
            f_cur = f_cur / big;
            f_next = f_next / big;
            norm = norm / big;
            target = target / big;
        }
        if idx == 0 {
            break;
        }
        k = idx;
    }
    target / norm
}

/// Hankel's large-argument expansion; returns `(J_ν, Y_ν)` for ν ∈ {0, 1}.
fn hankel<T: Real>(nu: u32, x: T) -> (T, T) {
    debug_assert!(nu <= 1);
    let mu = T::of(4.0 * f64::from(nu) * f64::from(nu));
    let eight_x = T::of(8.0) * x;

    let mut p = T::one();
    let mut q = T::zero();
    let mut a = T::one();
    let mut prev_abs = T::infinity();
    for k in 1u32..30 {
        let odd = T::of((2.0 * f64::from(k) - 1.0).powi(2));
        a = a * (mu - odd) / (T::of(f64::from(k)) * eight_x);
        if a.abs() >= prev_abs {
            break; // asymptotic tail started growing
        }
        prev_abs = a.abs();
        // odd k lands in Q, even k in P, signs alternating within each
        if k % 2 == 1 {
            let qsign = if ((k - 1) / 2) % 2 == 0 { T::one() } else { -T::one() };
            q = q + qsign * a;
        } else {
            let psign = if (k / 2) % 2 == 0 { T::one() } else { -T::one() };
            p = p + psign * a;
        }
        if a.abs() < T::epsilon() {
            break;
        }
    }

    let chi = x - T::of((2.0 * f64::from(nu) + 1.0) * std::f64::consts::FRAC_PI_4);
    let amp = (T::of(2.0) / (T::of(std::f64::consts::PI) * x)).sqrt();
    let (sin_chi, cos_chi) = chi.sin_cos();
    let j = amp * (p * cos_chi - q * sin_chi);
    let y = amp * (p * sin_chi + q * cos_chi);
    (j, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn series_leading_terms_near_zero() {
        let j0: f64 = bessel_j(0, 1e-12).unwrap();
        assert_relative_eq!(j0, 1.0, epsilon = 1e-15);
        let j1: f64 = bessel_j(1, 1e-12).unwrap();
        assert_relative_eq!(j1, 5e-13, max_relative = 1e-12);
    }

    #[test]
    fn reference_values_at_two() {
        // Abramowitz & Stegun tables
        assert_relative_eq!(bessel_j(0, 2.0f64).unwrap(), 0.223_890_779_141_235_7, epsilon = 1e-13);
        assert_relative_eq!(bessel_j(1, 2.0f64).unwrap(), 0.576_724_807_756_873_4, epsilon = 1e-13);
        assert_relative_eq!(bessel_y(0, 2.0f64).unwrap(), 0.510_375_672_649_745_1, epsilon = 1e-12);
        assert_relative_eq!(bessel_y(1, 2.0f64).unwrap(), -0.107_032_431_540_937_5, epsilon = 1e-12);
    }

    #[test]
    fn recurrence_identity_holds() {
        // J_{ν−1}(x) + J_{ν+1}(x) = (2ν/x) J_ν(x) at x = 2, ν = 2
        let x = 2.0f64;
        let lhs = bessel_j(1, x).unwrap() + bessel_j(3, x).unwrap();
        let rhs = 2.0 * 2.0 / x * bessel_j(2, x).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12, "residual {}", (lhs - rhs).abs());
    }

    #[test]
    fn wronskian_at_two() {
        let x = 2.0f64;
        let w = bessel_j(1, x).unwrap() * bessel_y(0, x).unwrap()
            - bessel_j(0, x).unwrap() * bessel_y(1, x).unwrap();
        assert!((w - 2.0 / (std::f64::consts::PI * x)).abs() <= 1e-11);
    }

    #[test]
    fn y0_is_negative_for_small_argument() {
        assert!(bessel_y(0, 0.1f64).unwrap() < 0.0);
    }

    #[test]
    fn envelope_decays_like_inverse_sqrt() {
        // |Y₀(x)|·√x stays bounded on [10, 1e4]
        let mut sup: f64 = 0.0;
        let mut x = 10.0f64;
        while x <= 1e4 {
            let v: f64 = bessel_y(0, x).unwrap();
            sup = sup.max(v.abs() * x.sqrt());
            x *= 1.07;
        }
        assert!(sup < 1.0, "sup |Y0|·sqrt(x) = {sup}");
    }

    #[test]
    fn domain_guards() {
        assert!(bessel_j(0, 0.0f64).is_err());
        assert!(bessel_j(0, -1.0f64).is_err());
        assert!(bessel_j(9, 1.0f64).is_err());
        assert!(bessel_j(0, 2e5f64).is_err());
        assert!(bessel_y(0, 1e-9f64).is_err());
    }

    #[test]
    fn integral_representation_cross_check() {
        // J_ν(x) = (1/π) ∫₀^π cos(ντ − x sin τ) dτ, independent quadrature
        use crate::quadrature::adaptive_simpson;
        for (nu, x) in [(0u32, 2.0f64), (1, 2.0), (2, 5.0), (4, 9.0)] {
            let f = |tau: f64| (f64::from(nu) * tau - x * tau.sin()).cos();
            let quad =
                adaptive_simpson(&f, 0.0, std::f64::consts::PI, 1e-13, 1e-15).unwrap()
                    / std::f64::consts::PI;
            let ours = bessel_j(nu, x).unwrap();
            assert!((quad - ours).abs() <= 1e-11, "nu={nu} x={x}: {quad} vs {ours}");
        }
    }
}

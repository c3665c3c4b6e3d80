//! Adaptive Simpson quadrature.
//!
//! Used by the schedule classifier to evaluate the regime integrals
//! `∫ ε(t)/t dt` and `∫ t ε(t) dt` over decade segments, and by tests as an
//! independent oracle (e.g. for Bessel integral representations).

use crate::error::Error;
use crate::real::Real;

const MAX_DEPTH: u32 = 60;

/// Integrates `f` over `[a, b]` to the requested mixed tolerance.
///
/// Failure to converge within the recursion budget is reported, never
/// swallowed.
pub fn adaptive_simpson<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    rel_tol: T,
    abs_tol: T,
) -> Result<T, Error<T>> {
    if !(b > a) {
        return Err(Error::InvalidParameter(format!(
            "quadrature interval [{a}, {b}] is empty"
        )));
    }
    let m = midpoint(a, b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(f, a, b, fa, fm, fb, whole, rel_tol, abs_tol, MAX_DEPTH)
}

fn midpoint<T: Real>(a: T, b: T) -> T {
    a + (b - a) / T::of(2.0)
}

fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::of(6.0) * (fa + T::of(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    rel_tol: T,
    abs_tol: T,
    depth: u32,
) -> Result<T, Error<T>> {
    let m = midpoint(a, b);
    let lm = midpoint(a, m);
    let rm = midpoint(m, b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;

    let tol = abs_tol + rel_tol * (left + right).abs();
    if delta.abs() <= T::of(15.0) * tol {
        // Richardson correction of the composite rule
        return Ok(left + right + delta / T::of(15.0));
    }
    if depth == 0 {
        return Err(Error::QuadratureDepth { a, b });
    }
    let half_rel = rel_tol;
    let half_abs = abs_tol / T::of(2.0);
    let l = recurse(f, a, m, fa, flm, fm, left, half_rel, half_abs, depth - 1)?;
    let r = recurse(f, m, b, fm, frm, fb, right, half_rel, half_abs, depth - 1)?;
    Ok(l + r)
}

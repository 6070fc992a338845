//! Bracketed scalar root finding: plain bisection for zero refinement and
//! Brent's method for the increment equations. Objective closures are
//! fallible so quadrature-backed equations can propagate their own errors.

use crate::{CoreError, Result};

/// Brent's method on a bracketing interval [a, b] with f(a) f(b) <= 0.
/// Converges to |b - a| <= tol (absolute on the abscissa).
pub fn brent<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(CoreError::SolverError(format!(
            "no sign change on [{a}, {b}]"
        )));
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut mflag = true;
    for _ in 0..200 {
        if fb == 0.0 || (b - a).abs() < tol {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            // inverse quadratic interpolation
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let cond1 = !((s > lo.min(b) && s < lo.max(b)) || (s < lo.min(b) && s > lo.max(b)));
        let cond2 = mflag && (s - b).abs() >= (b - c).abs() / 2.0;
        let cond3 = !mflag && (s - b).abs() >= (c - d).abs() / 2.0;
        let cond4 = mflag && (b - c).abs() < tol;
        let cond5 = !mflag && (c - d).abs() < tol;
        if cond1 || cond2 || cond3 || cond4 || cond5 {
            s = 0.5 * (a + b);
            mflag = true;
        } else {
            mflag = false;
        }
        let fs = f(s)?;
        d = c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Err(CoreError::SolverError(
        "Brent iteration limit reached".into(),
    ))
}

/// Expand an upper bracket from `start` by factor 1.5 until `f` changes sign,
/// capping at `cap`. Returns the bracketing pair.
pub fn bracket_upward<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    start: f64,
    first_step: f64,
    cap: f64,
) -> Result<(f64, f64)> {
    let f_start = f(start)?;
    if f_start == 0.0 {
        return Ok((start, start));
    }
    let mut step = first_step;
    let mut lo = start;
    loop {
        let hi = (lo + step).min(cap);
        if f(hi)?.signum() != f_start.signum() {
            return Ok((lo, hi));
        }
        if hi >= cap {
            return Err(CoreError::SolverError(format!(
                "no sign change found in [{start}, {cap}]"
            )));
        }
        lo = hi;
        step *= 1.5;
    }
}

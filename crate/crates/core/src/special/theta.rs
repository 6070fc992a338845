//! The Riemann-Siegel theta function: asymptotic series for t >= 10, direct
//! log-gamma evaluation below.

use super::gamma::{ln_gamma_complex, zeta_even};
use crate::{CoreError, PrecisionPolicy, Result};
use num_complex::Complex64;
use std::sync::LazyLock;

const TWO_PI: f64 = std::f64::consts::TAU;
const SERIES_CUTOVER: f64 = 10.0;

/// Coefficients of the 1/t series:
/// theta(t) ~ t/2 ln(t/2pi) - t/2 - pi/8 + sum_n c_n t^{1-2n},
/// c_n = (1 - 2^{1-2n}) |B_{2n}| / (4n (2n-1)).
fn series_coeff(n: usize) -> f64 {
    static TABLE: LazyLock<Vec<f64>> = LazyLock::new(|| {
        let mut v = vec![0.0; 41];
        for (n, slot) in v.iter_mut().enumerate().skip(1) {
            let mut fact = 1.0f64;
            for j in 2..=(2 * n) {
                fact *= j as f64;
            }
            let abs_b2n = 2.0 * fact * zeta_even(n) / TWO_PI.powi(2 * n as i32);
            *slot = (1.0 - 2.0f64.powi(1 - 2 * n as i32)) * abs_b2n
                / ((4 * n) as f64 * (2 * n - 1) as f64);
        }
        v
    });
    TABLE[n]
}

/// Riemann-Siegel theta, absolute error below `policy.abs_tol` for t >= 0.
pub fn rs_theta(t: f64, policy: &PrecisionPolicy) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(CoreError::DomainError(format!(
            "rs_theta requires t >= 0, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    if t < SERIES_CUTOVER {
        let lg = ln_gamma_complex(Complex64::new(0.25, 0.5 * t))?;
        return Ok(lg.im - 0.5 * t * std::f64::consts::PI.ln());
    }
    let mut acc = 0.5 * t * (t / TWO_PI).ln() - 0.5 * t - std::f64::consts::PI / 8.0;
    let inv_t2 = 1.0 / (t * t);
    let mut w = 1.0 / t;
    let mut prev = f64::INFINITY;
    for n in 1..=40.min(policy.max_series_terms) {
        let term = series_coeff(n) * w;
        if term.abs() > prev {
            // asymptotic floor reached before the tolerance
            return Err(CoreError::BudgetExceeded(format!(
                "theta series bottoms out above abs_tol at t = {t}"
            )));
        }
        acc += term;
        if term.abs() < 0.05 * policy.abs_tol {
            return Ok(acc);
        }
        prev = term.abs();
        w *= inv_t2;
    }
    Err(CoreError::BudgetExceeded(format!(
        "theta series needs more than {} terms at t = {t}",
        policy.max_series_terms
    )))
}

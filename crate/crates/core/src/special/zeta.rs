//! Euler-Maclaurin evaluation of zeta(sigma + i t) for sigma >= 1/2.
//!
//! The truncated Dirichlet sum runs to N ~ |t|/4, after which the pole term,
//! the midpoint correction and the Bernoulli tail bring the absolute error
//! under the policy target. Integrands over long ranges reuse a
//! [`DirichletTables`] so the logs and powers are computed once.

use super::gamma::bernoulli_over_factorial;
use crate::{CoreError, PrecisionPolicy, Result};
use num_complex::Complex64;


/// Main-sum truncation for height t; the Bernoulli tail then decays by
/// (t / 2 pi N)^2 per term. The default ratio ~0.51 reaches everyday
/// tolerances well inside the series budget; tight policies get a larger N
/// because the tail bottoms out near exp(-c N) before it can diverge.
pub(crate) fn em_truncation(t: f64, policy: &PrecisionPolicy) -> usize {
    if policy.abs_tol < 1e-9 {
        ((t.abs() / 3.0).ceil() as usize).max(48)
    } else {
        ((t.abs() / 4.5).ceil() as usize).max(24)
    }
}

/// Cached ln n and n^{-sigma} for n = 1..=n_max at a fixed sigma.
pub(crate) struct DirichletTables {
    pub sigma: f64,
    ln_n: Vec<f64>,
    pow_n: Vec<f64>,
}

impl DirichletTables {
    pub fn new(sigma: f64, n_max: usize) -> Self {
        let ln_n: Vec<f64> = (1..=n_max).map(|n| (n as f64).ln()).collect();
        let pow_n: Vec<f64> = ln_n.iter().map(|l| (-sigma * l).exp()).collect();
        DirichletTables { sigma, ln_n, pow_n }
    }

    fn capacity(&self) -> usize {
        self.ln_n.len()
    }
}

/// zeta(sigma + i t) with tables for the right sigma and enough capacity.
pub(crate) fn zeta_em(
    tables: &DirichletTables,
    t: f64,
    policy: &PrecisionPolicy,
) -> Result<Complex64> {
    let sigma = tables.sigma;
    let s = Complex64::new(sigma, t);
    if (s - 1.0).norm() < 1e-9 {
        return Err(CoreError::DomainError(
            "zeta evaluated at the pole s = 1".into(),
        ));
    }
    let n = em_truncation(t, policy);
    if n > tables.capacity() {
        return Err(CoreError::BudgetExceeded(format!(
            "Dirichlet table capacity {} below required {n}",
            tables.capacity()
        )));
    }
    // main sum, smallest terms first
    let mut sum = Complex64::new(0.0, 0.0);
    for m in (1..=n).rev() {
        let (sin, cos) = (-t * tables.ln_n[m - 1]).sin_cos();
        sum += tables.pow_n[m - 1] * Complex64::new(cos, sin);
    }
    let nf = n as f64;
    let n_pow_ms = {
        let (sin, cos) = (-t * tables.ln_n[n - 1]).sin_cos();
        tables.pow_n[n - 1] * Complex64::new(cos, sin)
    };
    let mut acc = sum + n_pow_ms * nf / (s - 1.0) - 0.5 * n_pow_ms;
    // Bernoulli tail
    let inv_n2 = 1.0 / (nf * nf);
    let mut term = n_pow_ms * s / (12.0 * nf);
    let mut prev = f64::INFINITY;
    for k in 1..=policy.max_series_terms.min(80) {
        let mag = term.norm();
        if mag > prev {
            return Err(CoreError::BudgetExceeded(format!(
                "Euler-Maclaurin tail diverges before abs_tol at sigma={sigma}, t={t}"
            )));
        }
        acc += term;
        if mag < 0.05 * policy.abs_tol {
            return Ok(acc);
        }
        prev = mag;
        let ratio_b = bernoulli_over_factorial(k + 1) / bernoulli_over_factorial(k);
        term = term * ratio_b * (s + (2 * k - 1) as f64) * (s + (2 * k) as f64) * inv_n2;
    }
    Err(CoreError::BudgetExceeded(format!(
        "Euler-Maclaurin tail needs more than {} terms at sigma={sigma}, t={t}",
        policy.max_series_terms
    )))
}

/// zeta(sigma + i t) for sigma >= 1/2, absolute error below `policy.abs_tol`.
pub fn zeta_on_sigma(sigma: f64, t: f64, policy: &PrecisionPolicy) -> Result<Complex64> {
    if !(sigma >= 0.5) {
        return Err(CoreError::DomainError(format!(
            "zeta_on_sigma requires sigma >= 1/2, got {sigma}"
        )));
    }
    let tables = DirichletTables::new(sigma, em_truncation(t, policy));
    zeta_em(&tables, t, policy)
}

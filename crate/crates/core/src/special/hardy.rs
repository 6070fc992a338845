//! Hardy's Z function: Z(t) = e^{i theta(t)} zeta(1/2 + it), real on the real
//! line, |Z(t)| = |zeta(1/2 + it)|.
//!
//! Below `T_SWITCH` the value comes from the Euler-Maclaurin zeta rotated by
//! theta, which is uniformly accurate down to t = 0. Above it the
//! Riemann-Siegel main sum plus three correction terms is both faster and
//! accurate enough for the default scalar tolerance; when a policy demands
//! more than the correction terms can guarantee, the evaluation falls back to
//! the (slower) Euler-Maclaurin path instead of returning an optimistic
//! value.

use super::theta::rs_theta;
use super::zeta::{em_truncation, zeta_em, DirichletTables};
use crate::{CoreError, PrecisionPolicy, Result};
use std::sync::LazyLock;

const TWO_PI: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;

/// Crossover between the Euler-Maclaurin and Riemann-Siegel regimes.
const T_SWITCH: f64 = 1500.0;

/// ln n and n^{-1/2} for the critical line, shared by both regimes.
struct CritTables {
    ln_n: Vec<f64>,
    inv_sqrt: Vec<f64>,
}

static CRIT: LazyLock<CritTables> = LazyLock::new(|| {
    let n_max = 4096; // covers EM below T_SWITCH and RS main sums to t ~ 1e8
    let ln_n: Vec<f64> = (1..=n_max).map(|n| (n as f64).ln()).collect();
    let inv_sqrt: Vec<f64> = (1..=n_max).map(|n| 1.0 / (n as f64).sqrt()).collect();
    CritTables { ln_n, inv_sqrt }
});

static CRIT_EM: LazyLock<DirichletTables> = LazyLock::new(|| {
    // sized for the tightest truncation a policy can request below the
    // crossover
    DirichletTables::new(0.5, (T_SWITCH / 3.0) as usize + 16)
});

/// Guaranteed bound for the Riemann-Siegel remainder after three correction
/// terms, c (t/2pi)^{-7/4}.
fn rs_error_bound(t: f64) -> f64 {
    0.011 * (t / TWO_PI).powf(-1.75)
}

/// Z(t) for t >= 0 with absolute error below `policy.abs_tol`.
pub fn hardy_z(t: f64, policy: &PrecisionPolicy) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(CoreError::DomainError(format!(
            "hardy_z requires t >= 0, got {t}"
        )));
    }
    if t < T_SWITCH || rs_error_bound(t) > policy.abs_tol {
        z_euler_maclaurin(t, policy)
    } else {
        z_riemann_siegel(t, policy)
    }
}

fn z_euler_maclaurin(t: f64, policy: &PrecisionPolicy) -> Result<f64> {
    let zeta = if t < T_SWITCH {
        zeta_em(&CRIT_EM, t, policy)?
    } else {
        let tables = DirichletTables::new(0.5, em_truncation(t, policy));
        zeta_em(&tables, t, policy)?
    };
    let th = rs_theta(t, policy)?;
    let (sin, cos) = th.sin_cos();
    Ok(cos * zeta.re - sin * zeta.im)
}

fn z_riemann_siegel(t: f64, policy: &PrecisionPolicy) -> Result<f64> {
    let tau = t / TWO_PI;
    let root = tau.sqrt();
    let n = root.floor() as usize;
    let p = root - n as f64;
    if n >= CRIT.ln_n.len() {
        return Err(CoreError::DomainError(format!(
            "t = {t} beyond the supported Riemann-Siegel height"
        )));
    }
    let th = rs_theta(t, policy)?;
    let mut main = 0.0;
    for m in 1..=n {
        main += CRIT.inv_sqrt[m - 1] * (th - t * CRIT.ln_n[m - 1]).cos();
    }
    main *= 2.0;
    // remainder: (-1)^{N-1} tau^{-1/4} [ C0 + C1 tau^{-1/2} + C2 tau^{-1} ]
    let a = 1.0 / root;
    let c0 = psi(p);
    let c1 = -psi_d3(p) / (96.0 * PI * PI);
    let c2 = psi_d2(p) / (64.0 * PI * PI) + psi_d6(p) / (18432.0 * PI.powi(4));
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let rem = sign * root.sqrt().recip() * (c0 + a * (c1 + a * c2));
    Ok(main + rem)
}

/// The Riemann-Siegel shape function
/// psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p),
/// rewritten around its removable singularities at p = 1/4 and 3/4 so both
/// the value and finite-difference derivatives stay fully accurate there.
fn psi(p: f64) -> f64 {
    if p < 0.5 {
        let q = p - 0.25;
        if q == 0.0 {
            return 0.5;
        }
        -(TWO_PI * (q * q - 0.5 * q)).sin() / (TWO_PI * q).sin()
    } else {
        let r = p - 0.75;
        if r == 0.0 {
            return 0.5;
        }
        (TWO_PI * (r * r + 0.5 * r)).sin() / (TWO_PI * r).sin()
    }
}

fn psi_d2(p: f64) -> f64 {
    let h = 5e-3;
    (-psi(p - 2.0 * h) + 16.0 * psi(p - h) - 30.0 * psi(p) + 16.0 * psi(p + h)
        - psi(p + 2.0 * h))
        / (12.0 * h * h)
}

fn psi_d3(p: f64) -> f64 {
    let h = 5e-3;
    (psi(p + 2.0 * h) - 2.0 * psi(p + h) + 2.0 * psi(p - h) - psi(p - 2.0 * h)) / (2.0 * h * h * h)
}

fn psi_d6(p: f64) -> f64 {
    let h = 0.02;
    (psi(p - 3.0 * h) - 6.0 * psi(p - 2.0 * h) + 15.0 * psi(p - h) - 20.0 * psi(p)
        + 15.0 * psi(p + h)
        - 6.0 * psi(p + 2.0 * h)
        + psi(p + 3.0 * h))
        / h.powi(6)
}

use crate::{CoreError, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// 2 pi^2, the scale constant of the fourth-moment leading coefficient.
pub const TWO_PI_SQ: f64 = 2.0 * std::f64::consts::PI * std::f64::consts::PI;

/// Tolerances and budgets governing every numeric kernel.
///
/// For a fixed policy all kernels are deterministic, so records produced
/// under the same policy are bit-for-bit reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    /// Absolute error target for one scalar evaluation (Z, zeta, theta).
    pub abs_tol: f64,
    /// Relative error target for one moment integral.
    pub rel_tol: f64,
    /// Cap on tail/correction series length (Bernoulli and related tails).
    pub max_series_terms: usize,
    /// Cap on adaptive panel subdivision depth.
    pub max_panel_depth: usize,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            abs_tol: 1e-6,
            rel_tol: 1e-6,
            max_series_terms: 64,
            max_panel_depth: 28,
        }
    }
}

impl PrecisionPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(CoreError::DomainError(
                "tolerances must be positive".into(),
            ));
        }
        if self.max_series_terms < 1 || self.max_panel_depth < 1 {
            return Err(CoreError::DomainError(
                "series and panel budgets must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Configurable constants of the functional family.
///
/// `euler_c` is the constant `c` of the increment law; the reverse-iteration
/// identities pin it to the Euler–Mascheroni constant, which is the default.
/// The fourth-moment coefficients `a_1..a_4` ship unset and are normally
/// produced by [`crate::functionals::fit_fourth_moment_coeffs`]; `a_0` is
/// fixed at `1/(2 pi^2)`. `cbar` holds the calibrated normalization of the
/// `|S1|^{2l}` moments, keyed by `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub euler_c: f64,
    /// Fitted or user-supplied a_1..a_4; `None` until fitted.
    pub a_tail: Option<[f64; 4]>,
    /// Calibrated cbar(l) values, l >= 1.
    pub cbar: BTreeMap<u32, f64>,
    /// Floor for ladder base points.
    pub t0: f64,
    /// Right end of the admissible x segment [1, alpha] for distinctness runs.
    pub alpha: f64,
    /// Condition-number cap for coefficient fitting.
    pub fit_condition_cap: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            euler_c: 0.577_215_664_901_532_9,
            a_tail: None,
            cbar: BTreeMap::new(),
            t0: 100.0,
            alpha: 3.0,
            fit_condition_cap: 1e12,
        }
    }
}

impl Constants {
    /// The fixed leading coefficient a_0 = 1/(2 pi^2).
    pub fn a0() -> f64 {
        1.0 / TWO_PI_SQ
    }

    /// Full coefficient vector [a_0, a_1, .., a_4], if the tail is set.
    pub fn a_coeffs(&self) -> Result<[f64; 5]> {
        let t = self
            .a_tail
            .ok_or_else(|| CoreError::MissingConstant("a_1..a_4 (run the fit first)".into()))?;
        Ok([Self::a0(), t[0], t[1], t[2], t[3]])
    }

    pub fn cbar(&self, l: u32) -> Result<f64> {
        self.cbar.get(&l).copied().ok_or_else(|| {
            CoreError::MissingConstant(format!("cbar({l}) (run the calibration first)"))
        })
    }

    pub fn one_minus_c(&self) -> f64 {
        1.0 - self.euler_c
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.euler_c > 0.5 && self.euler_c < 0.6) {
            return Err(CoreError::DomainError(format!(
                "euler_c = {} outside (0.5, 0.6)",
                self.euler_c
            )));
        }
        if self.cbar.values().any(|v| !(*v > 0.0)) {
            return Err(CoreError::DomainError("cbar values must be positive".into()));
        }
        if !(self.t0 > 0.0) {
            return Err(CoreError::DomainError("t0 must be positive".into()));
        }
        if !(self.alpha > 1.0) {
            return Err(CoreError::DomainError("alpha must exceed 1".into()));
        }
        Ok(())
    }
}

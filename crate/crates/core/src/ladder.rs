//! Reverse-iteration sequences T < T^1 < ... < T^k driven by the
//! second-moment increment law, and the partition checks over them.
//!
//! Integral mode promotes the increment relation
//! `int_{T^{r-1}}^{T^r} |Z|^2 = (1 - c) T^{r-1}` to the definition of a step
//! and solves it by bracketed root finding against the adaptive quadrature.
//! Asymptotic mode solves the same relation against the closed-form main
//! term `Jhat(T) = T ln(T / 2 pi) - T`, which keeps it independent of the
//! quadrature path (integral mode is exact for the first functional by
//! construction, so verification runs use asymptotic mode).

use crate::quadrature::{moment_integral, IntegrandKind};
use crate::roots::{bracket_upward, brent};
use crate::{Constants, CoreError, PrecisionPolicy, Result};
use serde::{Deserialize, Serialize};

const TWO_PI: f64 = std::f64::consts::TAU;
const MAX_K: usize = 10;
const ROOT_REL_TOL: f64 = 1e-10;

/// How a reverse-iteration step is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderMode {
    /// Step solves the increment relation against the actual |Z|^2 integral.
    Integral,
    /// Step solves it against the closed-form main term.
    Asymptotic,
}

/// Closed-form main term of the second moment.
pub fn j_hat(t: f64) -> f64 {
    t * (t / TWO_PI).ln() - t
}

/// A base point with its reverse iterates T^0 = T < T^1 < ... < T^k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderSequence {
    pub base: f64,
    pub mode: LadderMode,
    /// T^0 .. T^k, strictly increasing.
    pub iterates: Vec<f64>,
    /// T^r - T^{r-1} for r = 1..k.
    pub increments: Vec<f64>,
}

impl LadderSequence {
    pub fn k(&self) -> usize {
        self.iterates.len() - 1
    }

    pub fn top(&self) -> f64 {
        *self.iterates.last().unwrap()
    }
}

/// One step: the unique u > t with increment (1 - c) t in the given mode.
pub(crate) fn ladder_step(
    t: f64,
    mode: LadderMode,
    constants: &Constants,
    policy: &PrecisionPolicy,
) -> Result<f64> {
    let target = constants.one_minus_c() * t;
    let cap = 10.0 * t;
    let guess = target / (t / TWO_PI).ln().max(0.5);
    match mode {
        LadderMode::Asymptotic => {
            let mut f = |u: f64| Ok(j_hat(u) - j_hat(t) - target);
            let (lo, hi) = bracket_upward(&mut f, t, 0.75 * guess, cap)?;
            brent(f, lo, hi, ROOT_REL_TOL * t)
        }
        LadderMode::Integral => {
            let mut f = |u: f64| {
                Ok(moment_integral(t, u, IntegrandKind::Crit2, policy, None)?.value - target)
            };
            let (lo, hi) = bracket_upward(&mut f, t, 0.75 * guess, cap)?;
            brent(f, lo, hi, ROOT_REL_TOL * t)
        }
    }
}

/// Reverse iterates T^1 .. T^k of the base point.
pub fn reverse_iterate(
    t: f64,
    k: usize,
    mode: LadderMode,
    constants: &Constants,
    policy: &PrecisionPolicy,
) -> Result<LadderSequence> {
    if !(t >= constants.t0) {
        return Err(CoreError::DomainError(format!(
            "base point {t} below the configured floor {}",
            constants.t0
        )));
    }
    if k > MAX_K {
        return Err(CoreError::DomainError(format!(
            "k = {k} exceeds the supported depth {MAX_K}"
        )));
    }
    let mut iterates = Vec::with_capacity(k + 1);
    iterates.push(t);
    for r in 0..k {
        let next = ladder_step(iterates[r], mode, constants, policy)?;
        iterates.push(next);
    }
    let increments = iterates.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(LadderSequence {
        base: t,
        mode,
        iterates,
        increments,
    })
}

/// Defect report for the partition properties of a sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    /// max_r | inc_r / inc_{r+1} - 1 |: the equidistance defect.
    pub equidistance_defect: f64,
    /// Same defect over the |Z|^2 integrals of consecutive segments.
    pub increment_defect: f64,
    /// Each segment integral of |Z|^2, recomputed directly.
    pub segment_integrals: Vec<f64>,
    /// inc_r / ((1 - c) T / ln T) with T the base point.
    pub model_ratios: Vec<f64>,
    /// |segment integral - (1 - c) T^{r-1}|, the defining-equation residuals.
    pub step_residuals: Vec<f64>,
    /// Residual allowance per step: quadrature error plus the root bracket.
    pub residual_tolerances: Vec<f64>,
}

/// Equidistance and equal-increment defects of a sequence with k >= 2.
pub fn check_partition_properties(
    seq: &LadderSequence,
    constants: &Constants,
    policy: &PrecisionPolicy,
) -> Result<PartitionReport> {
    if seq.k() < 2 {
        return Err(CoreError::DomainError(
            "partition checks need at least two steps".into(),
        ));
    }
    let mut equidistance_defect: f64 = 0.0;
    for w in seq.increments.windows(2) {
        equidistance_defect = equidistance_defect.max((w[0] / w[1] - 1.0).abs());
    }
    let mut segment_integrals = Vec::new();
    let mut step_residuals = Vec::new();
    let mut residual_tolerances = Vec::new();
    for w in seq.iterates.windows(2) {
        let rec = moment_integral(w[0], w[1], IntegrandKind::Crit2, policy, None)?;
        let target = constants.one_minus_c() * w[0];
        segment_integrals.push(rec.value);
        step_residuals.push((rec.value - target).abs());
        residual_tolerances.push(2.0 * rec.err_estimate + 1e-7 * target);
    }
    let mut increment_defect: f64 = 0.0;
    for w in segment_integrals.windows(2) {
        increment_defect = increment_defect.max((w[0] / w[1] - 1.0).abs());
    }
    let model = constants.one_minus_c() * seq.base / seq.base.ln();
    let model_ratios = seq.increments.iter().map(|inc| inc / model).collect();
    Ok(PartitionReport {
        equidistance_defect,
        increment_defect,
        segment_integrals,
        model_ratios,
        step_residuals,
        residual_tolerances,
    })
}

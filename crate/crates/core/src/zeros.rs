//! Critical-line zeros, Gram points, and the argument functions S(t), S1(t).
//!
//! Zeros are isolated by sign scanning of Z at a fraction of the local mean
//! spacing and refined by bisection, so every table entry is bracketed by an
//! actual sign change. A theta-based count cross-check drives targeted
//! rescans at finer steps; close pairs that slip through the first pass shift
//! the count defect by two and are picked up there.

use crate::roots::brent;
use crate::special::{hardy_z, rs_theta};
use crate::{CoreError, PrecisionPolicy, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const TWO_PI: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;
const SCAN_START: f64 = 4.0;
const ZERO_TOL: f64 = 1e-10;

/// Mean zero spacing at height t.
fn mean_spacing(t: f64) -> f64 {
    TWO_PI / (t.max(20.0) / TWO_PI).ln().max(0.9)
}

/// Ascending ordinates of critical-line zeros up to a guaranteed bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroTable {
    zeros: Vec<f64>,
    upper_bound: f64,
}

impl ZeroTable {
    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn upper_bound(&self) -> f64 {
        self.upper_bound
    }

    /// N(t): number of table zeros <= t.
    pub fn count_to(&self, t: f64) -> usize {
        self.zeros.partition_point(|z| *z <= t)
    }
}

/// The summation points t_nu.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NuKind {
    /// Solutions of theta(t) = nu pi.
    Gram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuSequence {
    pub points: Vec<f64>,
    pub kind: NuKind,
}

/// All zeros with ordinate <= t_max, each to absolute accuracy 1e-9.
pub fn build_zero_table(t_max: f64, policy: &PrecisionPolicy) -> Result<ZeroTable> {
    if !(t_max >= 10.0) {
        return Err(CoreError::DomainError(format!(
            "build_zero_table requires t_max >= 10, got {t_max}"
        )));
    }
    let mut zeros = scan_range(SCAN_START, t_max, 5.0, policy)?;
    zeros.sort_by(f64::total_cmp);
    // count cross-check with targeted rescans; a missed close pair shifts
    // the defect by two from its location onward
    for round in 0..4 {
        let suspects = suspicious_gaps(&zeros, t_max, policy)?;
        if suspects.is_empty() {
            break;
        }
        let denom = 5.0 * 8f64.powi(round + 1);
        for (lo, hi) in suspects {
            let found = scan_range(lo, hi, denom, policy)?;
            for z in found {
                if zeros.iter().all(|y| (y - z).abs() > 1e-7) {
                    zeros.push(z);
                }
            }
        }
        zeros.sort_by(f64::total_cmp);
    }
    if !suspicious_gaps(&zeros, t_max, policy)?.is_empty() {
        return Err(CoreError::CoverageError(format!(
            "zero count vs theta estimate still inconsistent below {t_max} after refinement"
        )));
    }
    let table = ZeroTable {
        zeros,
        upper_bound: t_max,
    };
    let defect = count_defect(&table, t_max, policy)?;
    if defect.abs() >= 2.0 {
        return Err(CoreError::CoverageError(format!(
            "zero count vs theta estimate defect {defect:.2} at t_max = {t_max}"
        )));
    }
    Ok(table)
}

/// Sign-change scan with step = spacing / step_denom, followed by parallel
/// bisection of the brackets.
fn scan_range(lo: f64, hi: f64, step_denom: f64, policy: &PrecisionPolicy) -> Result<Vec<f64>> {
    let mut brackets = Vec::new();
    let mut t = lo;
    let mut z_prev = hardy_z(t, policy)?;
    while t < hi {
        let t_next = (t + mean_spacing(t) / step_denom).min(hi);
        let z_next = hardy_z(t_next, policy)?;
        if z_prev != 0.0 && z_prev.signum() != z_next.signum() {
            brackets.push((t, t_next));
        }
        t = t_next;
        z_prev = z_next;
    }
    let refined: Vec<Result<f64>> = brackets
        .par_iter()
        .map(|(a, b)| bisect_zero(*a, *b, policy))
        .collect();
    refined.into_iter().collect()
}

fn bisect_zero(mut lo: f64, mut hi: f64, policy: &PrecisionPolicy) -> Result<f64> {
    let mut f_lo = hardy_z(lo, policy)?;
    while hi - lo > ZERO_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = hardy_z(mid, policy)?;
        if f_lo.signum() == f_mid.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// theta-based count defect theta(t)/pi + 1 - N(t); a missed pair shows up
/// as a persistent shift by two.
fn count_defect(table: &ZeroTable, t: f64, policy: &PrecisionPolicy) -> Result<f64> {
    Ok(rs_theta(t, policy)? / PI + 1.0 - table.count_to(t) as f64)
}

/// Intervals whose theta-based count defect flags a miss. Each flagged run
/// is extended backward to the last midpoint with a small defect: the miss
/// itself sits in a window where the defect has not fully jumped yet, so a
/// rescan starting at the first flagged window would step right over it.
fn suspicious_gaps(
    zeros: &[f64],
    t_max: f64,
    policy: &PrecisionPolicy,
) -> Result<Vec<(f64, f64)>> {
    let table = ZeroTable {
        zeros: zeros.to_vec(),
        upper_bound: t_max,
    };
    let mut knots = vec![SCAN_START];
    knots.extend_from_slice(zeros);
    knots.push(t_max);
    let n = knots.len() - 1;
    let mut defects = vec![0.0f64; n];
    for (i, w) in knots.windows(2).enumerate() {
        let mid = 0.5 * (w[0] + w[1]);
        if mid > 10.0 {
            defects[i] = count_defect(&table, mid, policy)?;
        }
    }
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut i = 0;
    while i < n {
        if defects[i].abs() < 1.6 {
            i += 1;
            continue;
        }
        // anchor the rescan at the last window that looked healthy
        let mut start = i;
        while start > 0 && defects[start - 1].abs() >= 0.8 {
            start -= 1;
        }
        let mut end = i;
        while end + 1 < n && defects[end + 1].abs() >= 1.6 {
            end += 1;
        }
        let lo = (knots[start] - 0.1).max(SCAN_START);
        let hi = (knots[end + 1] + 0.1).min(t_max);
        match out.last_mut() {
            Some(last) if last.1 >= lo => last.1 = hi,
            _ => out.push((lo, hi)),
        }
        i = end + 1;
    }
    Ok(out)
}

/// All solutions of theta(t) = nu pi in (lower, upper], each to 1e-9.
pub fn gram_points(lower: f64, upper: f64, policy: &PrecisionPolicy) -> Result<NuSequence> {
    let (_, seq) = gram_points_with_prev(lower, upper, policy)?;
    Ok(seq)
}

/// Gram points in (lower, upper] plus the last one at or below `lower`
/// (used as the left edge of the first spacing weight).
pub(crate) fn gram_points_with_prev(
    lower: f64,
    upper: f64,
    policy: &PrecisionPolicy,
) -> Result<(f64, NuSequence)> {
    if !(lower >= 10.0) {
        return Err(CoreError::DomainError(format!(
            "gram_points requires lower >= 10, got {lower}"
        )));
    }
    if upper < lower {
        return Err(CoreError::DomainError("upper below lower".into()));
    }
    let th_lo = rs_theta(lower, policy)?;
    let th_hi = rs_theta(upper, policy)?;
    let nu_first = (th_lo / PI).floor() as i64 + 1;
    let nu_last = (th_hi / PI).floor() as i64;
    let solve = |target: f64, lo: f64, hi: f64| -> Result<f64> {
        brent(|t| Ok(rs_theta(t, policy)? - target), lo, hi, ZERO_TOL)
    };
    // previous point, bracketing downward from `lower`
    let prev_target = (nu_first - 1) as f64 * PI;
    let mut prev_lo = lower - mean_spacing(lower);
    while rs_theta(prev_lo.max(10.0), policy)? > prev_target && prev_lo > 10.0 {
        prev_lo -= mean_spacing(lower);
    }
    let prev = if rs_theta(prev_lo.max(10.0), policy)? <= prev_target {
        solve(prev_target, prev_lo.max(10.0), lower)?
    } else {
        // interval starts too close to the theta domain edge; fall back to
        // the left endpoint itself as the weight edge
        lower
    };
    let mut points = Vec::new();
    let mut left = lower;
    for nu in nu_first..=nu_last {
        let target = nu as f64 * PI;
        let mut right = left + mean_spacing(left);
        while rs_theta(right, policy)? < target {
            right += mean_spacing(right);
        }
        let g = solve(target, left, right)?;
        points.push(g);
        left = g;
    }
    Ok((
        prev,
        NuSequence {
            points,
            kind: NuKind::Gram,
        },
    ))
}

/// S(t) = N(t) - 1 - theta(t)/pi, the standard branch, continuous between
/// zeros and jumping by +1 across each zero.
pub fn s_of_t(t: f64, table: &ZeroTable, policy: &PrecisionPolicy) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(CoreError::DomainError("s_of_t requires t >= 0".into()));
    }
    if t > table.upper_bound() {
        return Err(CoreError::CoverageError(format!(
            "t = {t} beyond table coverage {}",
            table.upper_bound()
        )));
    }
    Ok(table.count_to(t) as f64 - 1.0 - rs_theta(t, policy)? / PI)
}

/// Repeated-evaluation form of S1(t) = int_0^t S(u) du.
///
/// The zero-count part integrates in closed form from prefix sums of the
/// ordinates; the theta part uses a unit-spaced antiderivative grid refined
/// by a 15-point panel from the nearest checkpoint. One construction serves
/// any number of evaluations below `cover`.
pub struct S1Evaluator<'a> {
    table: &'a ZeroTable,
    prefix: Vec<f64>,
    theta_cum: Vec<f64>,
    cover: f64,
    policy: PrecisionPolicy,
}

impl<'a> S1Evaluator<'a> {
    pub fn new(table: &'a ZeroTable, cover: f64, policy: &PrecisionPolicy) -> Result<Self> {
        if cover > table.upper_bound() {
            return Err(CoreError::CoverageError(format!(
                "requested cover {cover} beyond table coverage {}",
                table.upper_bound()
            )));
        }
        let mut prefix = vec![0.0];
        for z in table.zeros() {
            prefix.push(prefix.last().unwrap() + z);
        }
        let n_units = cover.ceil() as usize + 1;
        let mut theta_cum = Vec::with_capacity(n_units + 1);
        theta_cum.push(0.0);
        for k in 0..n_units {
            let inc = gl15_theta(k as f64, k as f64 + 1.0, policy)?;
            theta_cum.push(theta_cum.last().unwrap() + inc);
        }
        Ok(S1Evaluator {
            table,
            prefix,
            theta_cum,
            cover,
            policy: *policy,
        })
    }

    pub fn s1(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(CoreError::DomainError("s1 requires t >= 0".into()));
        }
        if t > self.cover {
            return Err(CoreError::CoverageError(format!(
                "t = {t} beyond evaluator cover {}",
                self.cover
            )));
        }
        let k = self.table.count_to(t);
        let count_part = k as f64 * t - self.prefix[k] - t;
        let unit = t.floor() as usize;
        let theta_part = self.theta_cum[unit] + gl15_theta(unit as f64, t, &self.policy)?;
        Ok(count_part - theta_part / PI)
    }
}

/// 15-point Gauss-Legendre integral of theta over [a, b]; theta is smooth and
/// nearly linear on unit ranges, so a single panel is exact to rounding.
fn gl15_theta(a: f64, b: f64, policy: &PrecisionPolicy) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let rule = &*crate::gauss::G15;
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * rs_theta(c + r * x, policy)?;
    }
    Ok(acc * r)
}

/// S1(t) by one-off construction; use [`S1Evaluator`] for repeated calls.
pub fn s1_of_t(t: f64, table: &ZeroTable, policy: &PrecisionPolicy) -> Result<f64> {
    S1Evaluator::new(table, t, policy)?.s1(t)
}

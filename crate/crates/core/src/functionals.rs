//! The normalized functionals built from moment integrals, reverse-iteration
//! endpoints, divisor sums, Gram-point sums, log-gamma increments and S1
//! moments, plus the coefficient fit and calibration that back them.
//!
//! Every functional is normalized by 1/tau and targets a fixed value as tau
//! grows (x, or x/pi for the Gram-point sum); a [`FunctionalSample`] records
//! the value together with the sub-quantities that entered the composition.

use crate::fitting::lstsq;
use crate::ladder::{ladder_step, LadderMode};
use crate::quadrature::{moment_integral, moment_integral_leaves, IntegrandKind};
use crate::special::{divisor_sum_range, hardy_z, ln_gamma, zeta_on_sigma};
use crate::zeros::{gram_points_with_prev, ZeroTable};
use crate::{Constants, CoreError, PrecisionPolicy, Result, TWO_PI_SQ};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One functional evaluation at finite tau.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalSample {
    pub tau: f64,
    /// The limit the functional targets (x, or x/pi for the Gram-point sum).
    pub x_target: f64,
    pub value: f64,
    /// |value / x_target - 1|; NaN when the target is zero.
    pub rel_error_vs_target: f64,
    /// Sub-integrals and endpoints entering the composition.
    pub components: BTreeMap<String, f64>,
}

impl FunctionalSample {
    fn new(tau: f64, x_target: f64, value: f64, components: BTreeMap<String, f64>) -> Self {
        let rel = if x_target != 0.0 {
            (value / x_target - 1.0).abs()
        } else {
            f64::NAN
        };
        FunctionalSample {
            tau,
            x_target,
            value,
            rel_error_vs_target: rel,
            components,
        }
    }
}

/// Exact rational (x^n + y^n) / z^n with natural x, y, z and n >= 3.
#[derive(Debug, Clone, PartialEq)]
pub struct FermatRational {
    pub x: u64,
    pub y: u64,
    pub z: u64,
    pub n: u32,
    value: BigRational,
}

impl FermatRational {
    pub fn new(x: u64, y: u64, z: u64, n: u32) -> Result<Self> {
        if x < 1 || y < 1 || z < 1 {
            return Err(CoreError::DomainError(
                "Fermat rational needs x, y, z >= 1".into(),
            ));
        }
        if n < 3 {
            return Err(CoreError::DomainError(format!(
                "Fermat rational needs exponent n >= 3, got {n}"
            )));
        }
        let num = BigInt::from(x).pow(n) + BigInt::from(y).pow(n);
        let den = BigInt::from(z).pow(n);
        let value = BigRational::new(num, den);
        Ok(FermatRational { x, y, z, n, value })
    }

    /// The exact rational value.
    pub fn value(&self) -> &BigRational {
        &self.value
    }

    /// Nearest double; the functionals evaluate at this point.
    pub fn value_f64(&self) -> Result<f64> {
        let v = self
            .value
            .to_f64()
            .ok_or_else(|| CoreError::DomainError("rational does not fit in f64".into()))?;
        if !v.is_finite() || v <= 0.0 {
            return Err(CoreError::DomainError(
                "rational out of the positive finite range".into(),
            ));
        }
        Ok(v)
    }

    /// Whether the exact rational equals 1, i.e. whether x^n + y^n = z^n
    /// would hold; reported from the exact arithmetic, never assumed.
    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }
}

/// Fitted fourth-moment coefficients with a_0 pinned to 1/(2 pi^2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffFit {
    pub a_coeffs: [f64; 5],
    /// Relative root-mean-square residual of the regression: the square
    /// root of the unexplained fraction of the data's sum of squares. The
    /// regressed data grows like ln^3 T, so only this scale-aware form is
    /// comparable across grids of different extent.
    pub residual: f64,
    pub tau_grid: Vec<f64>,
}

impl CoeffFit {
    /// A coefficient vector with the tail zeroed: only the pinned leading
    /// term. Useful as a neutral baseline before any fit has run.
    pub fn leading_only() -> Self {
        CoeffFit {
            a_coeffs: [Constants::a0(), 0.0, 0.0, 0.0, 0.0],
            residual: 0.0,
            tau_grid: Vec::new(),
        }
    }

    pub fn from_constants(constants: &Constants) -> Result<Self> {
        Ok(CoeffFit {
            a_coeffs: constants.a_coeffs()?,
            residual: 0.0,
            tau_grid: Vec::new(),
        })
    }
}

/// c_0 = 1, c_s = 2 pi^2 zeta(2 sigma)^{-s} a_s for s = 1..4.
pub fn c_coeffs(sigma: f64, a: &[f64; 5], policy: &PrecisionPolicy) -> Result<[f64; 5]> {
    if !(sigma >= 0.5) {
        return Err(CoreError::DomainError(format!(
            "c_coeffs requires sigma >= 1/2, got {sigma}"
        )));
    }
    let zeta_2s = zeta_on_sigma(2.0 * sigma, 0.0, policy)?.re;
    let mut c = [0.0; 5];
    c[0] = 1.0;
    for s in 1..5 {
        c[s] = TWO_PI_SQ * zeta_2s.powi(-(s as i32)) * a[s];
    }
    Ok(c)
}

fn ladder_interval(
    x: f64,
    tau: f64,
    scale: f64,
    mode: LadderMode,
    constants: &Constants,
    policy: &PrecisionPolicy,
) -> Result<(f64, f64)> {
    let lower = x * tau / scale;
    if !(lower >= constants.t0) {
        return Err(CoreError::DomainError(format!(
            "interval start {lower} below the configured floor {} (tau too small)",
            constants.t0
        )));
    }
    let upper = ladder_step(lower, mode, constants, policy)?;
    Ok((lower, upper))
}

/// The first functional: (1/tau) int over one reverse-iteration step of
/// |Z|^2, starting at x tau / (1 - c). Tends to x; in integral mode the
/// value is x by construction, so verification runs use asymptotic mode.
pub fn functional_f1(
    x: f64,
    tau: f64,
    mode: LadderMode,
    constants: &Constants,
    policy: &PrecisionPolicy,
) -> Result<FunctionalSample> {
    if !(x > 0.0) {
        return Err(CoreError::DomainError("x must be positive".into()));
    }
    let (lower, upper) = ladder_interval(x, tau, constants.one_minus_c(), mode, constants, policy)?;
    let rec = moment_integral(lower, upper, IntegrandKind::Crit2, policy, None)?;
    let mut comp = BTreeMap::new();
    comp.insert("lower".into(), lower);
    comp.insert("upper".into(), upper);
    comp.insert("raw_integral".into(), rec.value);
    comp.insert("err_estimate".into(), rec.err_estimate);
    Ok(FunctionalSample::new(tau, x, rec.value / tau, comp))
}

/// The composed functional: with L = 2 pi^2 x tau / zeta^4(2 sigma) and U its
/// reverse iterate,
/// (1/tau) [int_L^U |zeta_sigma|^2]^4 [int_0^L |Z|^4]
///          / sum_s c_s [int_L^U |Z|^2]^{4-s} [int_L^U |zeta_sigma|^2]^s.
/// Tends to x for every fixed x > 0 and sigma >= 1/2 + eps.
pub fn crossbreed_functional(
    x: f64,
    sigma: f64,
    tau: f64,
    coeffs: &CoeffFit,
    mode: LadderMode,
    constants: &Constants,
    policy: &PrecisionPolicy,
) -> Result<FunctionalSample> {
    if !(x > 0.0) {
        return Err(CoreError::DomainError("x must be positive".into()));
    }
    if !(sigma >= 0.5) {
        return Err(CoreError::DomainError(format!(
            "crossbreed requires sigma >= 1/2, got {sigma}"
        )));
    }
    let zeta_2s = zeta_on_sigma(2.0 * sigma, 0.0, policy)?.re;
    let scale = zeta_2s.powi(4) / TWO_PI_SQ;
    let (lower, upper) = ladder_interval(x, tau, scale, mode, constants, policy)?;
    let sigma2 = moment_integral(lower, upper, IntegrandKind::Sigma2 { sigma }, policy, None)?;
    let crit2 = moment_integral(lower, upper, IntegrandKind::Crit2, policy, None)?;
    let crit4 = moment_integral(0.0, lower, IntegrandKind::Crit4, policy, None)?;
    let c = c_coeffs(sigma, &coeffs.a_coeffs, policy)?;
    let mut denom = 0.0;
    for (s, cs) in c.iter().enumerate() {
        denom += cs * crit2.value.powi(4 - s as i32) * sigma2.value.powi(s as i32);
    }
    if !(denom.is_finite() && denom > f64::MIN_POSITIVE * 1e16) {
        return Err(CoreError::DivisionDegenerate);
    }
    let value = sigma2.value.powi(4) * crit4.value / denom / tau;
    let mut comp = BTreeMap::new();
    comp.insert("sigma2_lu".into(), sigma2.value);
    comp.insert("crit2_lu".into(), crit2.value);
    comp.insert("crit4_0l".into(), crit4.value);
    comp.insert("denominator".into(), denom);
    comp.insert("ladder_upper".into(), upper);
    comp.insert("lower".into(), lower);
    Ok(FunctionalSample::new(tau, x, value, comp))
}

/// Outcome of extrapolating a functional trajectory to its limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeVerdict {
    pub extrapolated_limit: f64,
    pub fit_std_error: f64,
    /// Whether the limit is separated from 1 by more than three standard
    /// errors. A numerical witness, never a proof.
    pub separated_from_one: bool,
    pub separation_margin: f64,
}

/// Fit value(tau) = limit + beta / ln tau and report the limit with its
/// standard error.
pub(crate) fn extrapolate_in_inverse_log(taus: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    if taus.len() < 3 {
        return Err(CoreError::DomainError(
            "extrapolation needs at least three grid points".into(),
        ));
    }
    let design: Vec<Vec<f64>> = taus.iter().map(|t| vec![1.0, 1.0 / t.ln()]).collect();
    let fit = lstsq(&design, values)?;
    Ok((fit.beta[0], fit.std_errors[0]))
}

/// Evaluate the composed functional at the exact rational of a Fermat triple
/// over a tau grid and extrapolate; the verdict reports whether the limit is
/// numerically separated from 1.
pub fn fermat_probe(
    fr: &FermatRational,
    sigma: f64,
    tau_grid: &[f64],
    coeffs: &CoeffFit,
    mode: LadderMode,
    constants: &Constants,
    policy: &PrecisionPolicy,
) -> Result<(Vec<FunctionalSample>, ProbeVerdict)> {
    let x = fr.value_f64()?;
    let mut samples = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        samples.push(crossbreed_functional(
            x, sigma, tau, coeffs, mode, constants, policy,
        )?);
    }
    let taus: Vec<f64> = samples.iter().map(|s| s.tau).collect();
    let values: Vec<f64> = samples.iter().map(|s| s.value).collect();
    let (limit, se) = extrapolate_in_inverse_log(&taus, &values)?;
    let margin = (limit - 1.0).abs();
    let verdict = ProbeVerdict {
        extrapolated_limit: limit,
        fit_std_error: se,
        separated_from_one: margin > 3.0 * se,
        separation_margin: margin,
    };
    Ok((samples, verdict))
}

/// (1/tau) sum of d(n) over one reverse-iteration step. Tends to x.
pub fn divisor_sum_functional(
    x: f64,
    tau: f64,
    mode: LadderMode,
    constants: &Constants,
    policy: &PrecisionPolicy,
) -> Result<FunctionalSample> {
    if !(x > 0.0) {
        return Err(CoreError::DomainError("x must be positive".into()));
    }
    let (lower, upper) = ladder_interval(x, tau, constants.one_minus_c(), mode, constants, policy)?;
    let sum = divisor_sum_range(lower, upper)?;
    let mut comp = BTreeMap::new();
    comp.insert("lower".into(), lower);
    comp.insert("upper".into(), upper);
    comp.insert("divisor_sum".into(), sum as f64);
    Ok(FunctionalSample::new(tau, x, sum as f64 / tau, comp))
}

/// (1/tau) sum over Gram points t_nu in one reverse-iteration step of
/// |zeta(1/2 + i t_nu)|^2 (g_nu - g_{nu-1}) / pi. Tends to x / pi.
///
/// The spacing weight makes the sum a Riemann sum of the second moment over
/// the Gram partition; the unweighted sum over-counts by the logarithm of the
/// height and cannot stay asymptotic to the other family members (the
/// unweighted total is reported in the components for reference).
pub fn tnu_sum_functional(
    x: f64,
    tau: f64,
    mode: LadderMode,
    constants: &Constants,
    policy: &PrecisionPolicy,
) -> Result<FunctionalSample> {
    if !(x > 0.0) {
        return Err(CoreError::DomainError("x must be positive".into()));
    }
    let (lower, upper) = ladder_interval(x, tau, constants.one_minus_c(), mode, constants, policy)?;
    let (prev, seq) = gram_points_with_prev(lower, upper, policy)?;
    let mut weighted = 0.0;
    let mut plain = 0.0;
    let mut last = prev;
    for g in &seq.points {
        let z = hardy_z(*g, policy)?;
        weighted += z * z * (g - last);
        plain += z * z;
        last = *g;
    }
    let pi = std::f64::consts::PI;
    let mut comp = BTreeMap::new();
    comp.insert("lower".into(), lower);
    comp.insert("upper".into(), upper);
    comp.insert("gram_count".into(), seq.points.len() as f64);
    comp.insert("weighted_sum".into(), weighted);
    comp.insert("plain_sum".into(), plain);
    Ok(FunctionalSample::new(
        tau,
        x / pi,
        weighted / pi / tau,
        comp,
    ))
}

/// (1/tau) [ln Gamma(U) - ln Gamma(L)] over one reverse-iteration step.
/// Tends to x.
pub fn gamma_ratio_functional(
    x: f64,
    tau: f64,
    mode: LadderMode,
    constants: &Constants,
    policy: &PrecisionPolicy,
) -> Result<FunctionalSample> {
    if !(x > 0.0) {
        return Err(CoreError::DomainError("x must be positive".into()));
    }
    let (lower, upper) = ladder_interval(x, tau, constants.one_minus_c(), mode, constants, policy)?;
    let value = (ln_gamma(upper)? - ln_gamma(lower)?) / tau;
    let mut comp = BTreeMap::new();
    comp.insert("lower".into(), lower);
    comp.insert("upper".into(), upper);
    Ok(FunctionalSample::new(tau, x, value, comp))
}

/// (1/tau) int_1^{x tau / zeta(2 sigma)} |zeta(sigma + it)|^2. Tends to x.
pub fn sigma_moment_functional(
    x: f64,
    sigma: f64,
    tau: f64,
    policy: &PrecisionPolicy,
) -> Result<FunctionalSample> {
    if !(x > 0.0) {
        return Err(CoreError::DomainError("x must be positive".into()));
    }
    if !(sigma >= 0.5) {
        return Err(CoreError::DomainError(format!(
            "sigma moment requires sigma >= 1/2, got {sigma}"
        )));
    }
    let zeta_2s = zeta_on_sigma(2.0 * sigma, 0.0, policy)?.re;
    let upper = x * tau / zeta_2s;
    let mut comp = BTreeMap::new();
    comp.insert("upper".into(), upper);
    if upper <= 1.0 {
        comp.insert("raw_integral".into(), 0.0);
        return Ok(FunctionalSample::new(tau, x, 0.0, comp));
    }
    let rec = moment_integral(1.0, upper, IntegrandKind::Sigma2 { sigma }, policy, None)?;
    comp.insert("raw_integral".into(), rec.value);
    comp.insert("err_estimate".into(), rec.err_estimate);
    Ok(FunctionalSample::new(tau, x, rec.value / tau, comp))
}

/// (1/tau) int_0^{x tau / cbar(l)} |S1|^{2l}. Tends to x once cbar(l) is
/// calibrated.
pub fn s1_moment_functional(
    x: f64,
    l: u32,
    tau: f64,
    table: &ZeroTable,
    constants: &Constants,
    policy: &PrecisionPolicy,
) -> Result<FunctionalSample> {
    if !(x > 0.0) {
        return Err(CoreError::DomainError("x must be positive".into()));
    }
    let cbar = constants.cbar(l)?;
    let upper = x * tau / cbar;
    let mut comp = BTreeMap::new();
    comp.insert("upper".into(), upper);
    comp.insert("cbar".into(), cbar);
    if upper <= 0.0 {
        comp.insert("raw_integral".into(), 0.0);
        return Ok(FunctionalSample::new(tau, x, 0.0, comp));
    }
    let rec = moment_integral(0.0, upper, IntegrandKind::S1Moment { l }, policy, Some(table))?;
    comp.insert("raw_integral".into(), rec.value);
    comp.insert("err_estimate".into(), rec.err_estimate);
    Ok(FunctionalSample::new(tau, x, rec.value / tau, comp))
}

/// Least-squares fit of a_1..a_4 from fourth-moment data on a grid of
/// heights: regresses I_4(T)/T - a_0 ln^4 T on {ln^3 T, ln^2 T, ln T, 1}.
pub fn fit_fourth_moment_coeffs(
    t_grid: &[f64],
    constants: &Constants,
    policy: &PrecisionPolicy,
) -> Result<CoeffFit> {
    if t_grid.len() < 8 {
        return Err(CoreError::DomainError(format!(
            "coefficient fit needs at least 8 grid points, got {}",
            t_grid.len()
        )));
    }
    let mut design = Vec::with_capacity(t_grid.len());
    let mut y = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !(t > 0.0) {
            return Err(CoreError::DomainError("grid heights must be positive".into()));
        }
        let rec = crate::quadrature::fourth_moment(t, policy)?;
        let l = t.ln();
        design.push(vec![l.powi(3), l.powi(2), l, 1.0]);
        y.push(rec.value / t - Constants::a0() * l.powi(4));
    }
    let fit = lstsq(&design, &y)?;
    if fit.condition > constants.fit_condition_cap {
        return Err(CoreError::IllConditioned {
            cond: fit.condition,
            cap: constants.fit_condition_cap,
        });
    }
    let data_rms = (y.iter().map(|v| v * v).sum::<f64>() / y.len() as f64).sqrt();
    let residual = if data_rms > 0.0 {
        fit.rms_residual / data_rms
    } else {
        fit.rms_residual
    };
    Ok(CoeffFit {
        a_coeffs: [
            Constants::a0(),
            fit.beta[0],
            fit.beta[1],
            fit.beta[2],
            fit.beta[3],
        ],
        residual,
        tau_grid: t_grid.to_vec(),
    })
}

/// Calibrate cbar(l) at a reference height: the unique c with
/// (1/tau_ref) int_0^{tau_ref / c} |S1|^{2l} = 1, found by locating the
/// upper endpoint U* with G(U*) = tau_ref on the accepted-panel prefix of a
/// single adaptive pass. Returns the constant; the caller stores it.
pub fn calibrate_cbar(
    l: u32,
    tau_ref: f64,
    table: &ZeroTable,
    policy: &PrecisionPolicy,
) -> Result<f64> {
    if l < 1 {
        return Err(CoreError::DomainError("calibration needs l >= 1".into()));
    }
    if !(tau_ref > 0.0) {
        return Err(CoreError::DomainError("tau_ref must be positive".into()));
    }
    let cover = table.upper_bound();
    let raw = moment_integral_leaves(0.0, cover, IntegrandKind::S1Moment { l }, policy, Some(table))?;
    if raw.value <= tau_ref {
        return Err(CoreError::CoverageError(format!(
            "S1 moment over the covered range reaches only {:.3} of the target {tau_ref}",
            raw.value
        )));
    }
    // walk the accepted panels to the crossing, then solve inside it
    let mut acc = 0.0;
    let mut crossing = None;
    for (lo, hi, v) in &raw.leaves {
        if acc + v >= tau_ref {
            crossing = Some((*lo, *hi, acc));
            break;
        }
        acc += v;
    }
    let (lo, hi, prefix) = crossing.ok_or_else(|| {
        CoreError::SolverError("prefix accumulation missed the crossing".into())
    })?;
    let eval = crate::zeros::S1Evaluator::new(table, hi, policy)?;
    let p = 2 * l as i32;
    let u_star = crate::roots::brent(
        |u| {
            let partial = gl_partial(&eval, lo, u, p)?;
            Ok(prefix + partial - tau_ref)
        },
        lo,
        hi,
        1e-9 * hi.max(1.0),
    )?;
    Ok(tau_ref / u_star)
}

/// Small fixed-rule integral of |S1|^p over [a, b] inside one panel.
fn gl_partial(eval: &crate::zeros::S1Evaluator, a: f64, b: f64, p: i32) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let rule = &*crate::gauss::G30;
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * eval.s1(c + r * x)?.powi(p);
    }
    Ok(acc * r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Constants, PrecisionPolicy) {
        (Constants::default(), PrecisionPolicy::default())
    }

    #[test]
    fn c0_is_one_for_any_sigma() {
        let (_, p) = setup();
        let a = [Constants::a0(), 0.3, 0.2, 0.1, 0.05];
        for sigma in [0.55, 1.0, 2.0] {
            let c = c_coeffs(sigma, &a, &p).unwrap();
            assert_eq!(c[0], 1.0);
        }
    }

    #[test]
    fn zero_tail_gives_zero_higher_coefficients() {
        let (_, p) = setup();
        let c = c_coeffs(1.0, &[Constants::a0(), 0.0, 0.0, 0.0, 0.0], &p).unwrap();
        assert_eq!(&c[1..], &[0.0; 4]);
    }

    #[test]
    fn c1_at_sigma_one_with_unit_a1_is_twelve() {
        // zeta(2) = pi^2/6, so c_1 = 2 pi^2 * 6 / pi^2 = 12
        let (_, p) = setup();
        let c = c_coeffs(1.0, &[Constants::a0(), 1.0, 0.0, 0.0, 0.0], &p).unwrap();
        assert!((c[1] - 12.0).abs() < 1e-9, "c1 = {}", c[1]);
    }

    #[test]
    fn fermat_rational_values() {
        let fr = FermatRational::new(1, 1, 1, 3).unwrap();
        assert_eq!(fr.value_f64().unwrap(), 2.0);
        let fr = FermatRational::new(3, 4, 5, 3).unwrap();
        // (27 + 64) / 125 = 91/125 exactly
        assert_eq!(fr.value_f64().unwrap(), 91.0 / 125.0);
        assert_eq!(fr.value(), &BigRational::new(91.into(), 125.into()));
    }

    #[test]
    fn fermat_exponent_two_is_rejected() {
        assert!(matches!(
            FermatRational::new(3, 4, 5, 2),
            Err(CoreError::DomainError(_))
        ));
    }

    #[test]
    fn fermat_zero_inputs_are_rejected() {
        assert!(FermatRational::new(0, 1, 1, 3).is_err());
    }

    #[test]
    fn f1_integral_mode_is_circular_by_construction() {
        // the step is defined by the very integral the functional divides
        // out, so the value is x up to the solver tolerance
        let (c, p) = setup();
        for x in [0.5, 1.0] {
            let s = functional_f1(x, 1000.0, LadderMode::Integral, &c, &p).unwrap();
            assert!(
                (s.value - x).abs() < 1e-5 * x,
                "x={x}: value {}",
                s.value
            );
        }
    }

    #[test]
    fn f1_requires_desk_scale_tau() {
        let (c, p) = setup();
        // x tau / (1 - c) below t0
        assert!(functional_f1(1.0, 10.0, LadderMode::Asymptotic, &c, &p).is_err());
    }

    #[test]
    fn sigma_moment_with_degenerate_upper_limit_is_zero() {
        let (_, p) = setup();
        let s = sigma_moment_functional(1.0, 1.0, 1.0, &p).unwrap();
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn sigma_moment_increases_in_x() {
        let (_, p) = setup();
        let tau = 2000.0;
        let v: Vec<f64> = [0.5, 1.0, 2.0]
            .iter()
            .map(|x| sigma_moment_functional(*x, 1.0, tau, &p).unwrap().value)
            .collect();
        assert!(v[0] < v[1] && v[1] < v[2], "{v:?}");
    }

    #[test]
    fn s1_moment_requires_calibration() {
        let (c, p) = setup();
        let table = crate::zeros::build_zero_table(60.0, &p).unwrap();
        assert!(matches!(
            s1_moment_functional(1.0, 1, 100.0, &table, &c, &p),
            Err(CoreError::MissingConstant(_))
        ));
    }

    #[test]
    fn s1_moment_entries_are_independent_per_l() {
        let (mut c, p) = setup();
        c.cbar.insert(1, 0.9);
        let table = crate::zeros::build_zero_table(60.0, &p).unwrap();
        // l = 2 still missing even though l = 1 is set
        assert!(matches!(
            s1_moment_functional(1.0, 2, 10.0, &table, &c, &p),
            Err(CoreError::MissingConstant(_))
        ));
    }

    #[test]
    fn synthetic_coefficients_are_recovered_exactly() {
        // bypass quadrature: feed the regression synthetic noiseless data
        let truth = [0.25, -0.8, 1.5, 2.0];
        let ts: Vec<f64> = (0..10).map(|i| 600.0 * 1.35f64.powi(i)).collect();
        let design: Vec<Vec<f64>> = ts
            .iter()
            .map(|t| {
                let l = t.ln();
                vec![l.powi(3), l.powi(2), l, 1.0]
            })
            .collect();
        let y: Vec<f64> = design
            .iter()
            .map(|row| row.iter().zip(&truth).map(|(a, b)| a * b).sum())
            .collect();
        let fit = crate::fitting::lstsq(&design, &y).unwrap();
        for (b, t) in fit.beta.iter().zip(&truth) {
            assert!((b - t).abs() < 1e-6);
        }
    }

    #[test]
    fn extrapolation_recovers_a_known_limit() {
        let taus = [1e3, 3e3, 1e4, 3e4];
        let values: Vec<f64> = taus.iter().map(|t: &f64| 2.0 + 5.0 / t.ln()).collect();
        let (limit, se) = extrapolate_in_inverse_log(&taus, &values).unwrap();
        assert!((limit - 2.0).abs() < 1e-10);
        assert!(se < 1e-10);
    }
}

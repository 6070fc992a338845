//! Command implementations: orchestration over the core crate, caching, and
//! artifact emission.

use crate::cache;
use crate::config::{fmt_f64, save_constants, RunConfig};
use crate::report;
use anyhow::{anyhow, bail, Context};
use serde_json::json;
use zetalab::chain::{evaluate_chain, ChainReport};
use zetalab::functionals::{
    calibrate_cbar, crossbreed_functional, divisor_sum_functional, fermat_probe,
    fit_fourth_moment_coeffs, functional_f1, gamma_ratio_functional, s1_moment_functional,
    sigma_moment_functional, tnu_sum_functional, CoeffFit, FermatRational, FunctionalSample,
};
use zetalab::ladder::{check_partition_properties, reverse_iterate, LadderMode, LadderSequence};
use zetalab::quadrature::{moment_integral, IntegrandKind, MomentRecord};
use zetalab::zeros::{build_zero_table, ZeroTable};

fn mode_tag(mode: LadderMode) -> f64 {
    match mode {
        LadderMode::Integral => 0.0,
        LadderMode::Asymptotic => 1.0,
    }
}

/// Constants that parameterize ladder endpoints, as digest inputs.
fn constant_params(cfg: &RunConfig) -> Vec<(&'static str, f64)> {
    let mut p = vec![
        ("euler_c", cfg.constants.euler_c),
        ("t0", cfg.constants.t0),
    ];
    if let Some(a) = cfg.constants.a_tail {
        p.push(("a1", a[0]));
        p.push(("a2", a[1]));
        p.push(("a3", a[2]));
        p.push(("a4", a[3]));
    }
    p
}

/// Cached zero table with its own header: the coverage bound and the policy
/// it was built under.
#[derive(serde::Serialize, serde::Deserialize)]
struct CachedZeroTable {
    t_max: f64,
    policy: zetalab::PrecisionPolicy,
    table: ZeroTable,
}

/// Load or build a zero table covering t_max.
pub fn zero_table(cfg: &RunConfig, t_max: f64) -> anyhow::Result<ZeroTable> {
    let key = cache::cache_key("zeros", &[("t_max", t_max)], &cfg.policy);
    if let Some(cached) = cache::load::<CachedZeroTable>(&cfg.cache_dir, &key) {
        if cached.policy == cfg.policy && cached.table.upper_bound() >= t_max {
            return Ok(cached.table);
        }
    }
    let table = build_zero_table(t_max, &cfg.policy)?;
    cache::store(
        &cfg.cache_dir,
        &key,
        &CachedZeroTable {
            t_max,
            policy: cfg.policy,
            table: table.clone(),
        },
    )?;
    Ok(table)
}

/// Coefficients from the config when fitted, leading-term-only otherwise.
fn coeffs_from_config(cfg: &RunConfig) -> CoeffFit {
    CoeffFit::from_constants(&cfg.constants).unwrap_or_else(|_| CoeffFit::leading_only())
}

// ---------------------------------------------------------------------------
// moment
// ---------------------------------------------------------------------------

pub fn cmd_moment(cfg: &RunConfig, kind: IntegrandKind, lower: f64, upper: f64) -> anyhow::Result<String> {
    let mut params = vec![("lower", lower), ("upper", upper)];
    match kind {
        IntegrandKind::Crit2 => params.push(("power", 2.0)),
        IntegrandKind::Crit4 => params.push(("power", 4.0)),
        IntegrandKind::Sigma2 { sigma } => params.push(("sigma", sigma)),
        IntegrandKind::S1Moment { l } => params.push(("l", l as f64)),
    }
    let key = cache::cache_key("moment", &params, &cfg.policy);
    let record: MomentRecord = match cache::load(&cfg.cache_dir, &key) {
        Some(r) => r,
        None => {
            let table;
            let table_ref = match kind {
                IntegrandKind::S1Moment { .. } => {
                    table = zero_table(cfg, upper.max(12.0) * 1.01)?;
                    Some(&table)
                }
                _ => None,
            };
            let r = moment_integral(lower, upper, kind, &cfg.policy, table_ref)?;
            cache::store(&cfg.cache_dir, &key, &r)?;
            r
        }
    };
    if report::is_json(cfg) {
        return Ok(report::json_envelope(cfg, &record, &[]));
    }
    let mut s = report::config_comment_lines(cfg);
    s.push_str("lower,upper,kind,power,value,err_estimate,evaluations\n");
    s.push_str(&format!(
        "{},{},{},{},{},{},{}\n",
        fmt_f64(record.lower),
        fmt_f64(record.upper),
        record.kind.label(),
        record.kind.power(),
        fmt_f64(record.value),
        fmt_f64(record.err_estimate),
        record.evaluations
    ));
    Ok(s)
}

// ---------------------------------------------------------------------------
// ladder
// ---------------------------------------------------------------------------

pub fn cmd_ladder(cfg: &RunConfig, t: f64, k: usize) -> anyhow::Result<String> {
    let mut params = vec![("t", t), ("k", k as f64), ("mode", mode_tag(cfg.mode))];
    params.extend(constant_params(cfg));
    let key = cache::cache_key("ladder", &params, &cfg.policy);
    let seq: LadderSequence = match cache::load(&cfg.cache_dir, &key) {
        Some(s) => s,
        None => {
            let s = reverse_iterate(t, k, cfg.mode, &cfg.constants, &cfg.policy)?;
            cache::store(&cfg.cache_dir, &key, &s)?;
            s
        }
    };
    let partition = if seq.k() >= 2 {
        Some(check_partition_properties(&seq, &cfg.constants, &cfg.policy)?)
    } else {
        None
    };
    if report::is_json(cfg) {
        let results = json!({ "sequence": seq, "partition": partition });
        return Ok(report::json_envelope(cfg, &results, &[]));
    }
    let mut s = report::config_comment_lines(cfg);
    s.push_str("r,iterate,increment\n");
    for (r, it) in seq.iterates.iter().enumerate() {
        let inc = if r == 0 {
            String::new()
        } else {
            fmt_f64(seq.increments[r - 1])
        };
        s.push_str(&format!("{r},{},{inc}\n", fmt_f64(*it)));
    }
    if let Some(p) = partition {
        s.push_str(&format!(
            "# equidistance_defect = {}\n# increment_defect = {}\n",
            fmt_f64(p.equidistance_defect),
            fmt_f64(p.increment_defect)
        ));
        for (i, r) in p.model_ratios.iter().enumerate() {
            s.push_str(&format!("# model_ratio_{} = {}\n", i + 1, fmt_f64(*r)));
        }
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// functional
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionalKind {
    F1,
    Crossbreed,
    Divisor,
    Tnu,
    Gamma,
    SigmaMoment,
    S1,
}

impl FunctionalKind {
    pub fn label(&self) -> &'static str {
        match self {
            FunctionalKind::F1 => "f1",
            FunctionalKind::Crossbreed => "crossbreed",
            FunctionalKind::Divisor => "divisor",
            FunctionalKind::Tnu => "tnu",
            FunctionalKind::Gamma => "gamma",
            FunctionalKind::SigmaMoment => "sigma_moment",
            FunctionalKind::S1 => "s1",
        }
    }
}

pub fn cmd_functional(cfg: &RunConfig, kind: FunctionalKind) -> anyhow::Result<String> {
    let coeffs = coeffs_from_config(cfg);
    let mut samples: Vec<FunctionalSample> = Vec::new();
    for &x in &cfg.x_values {
        for &tau in &cfg.tau_grid {
            let mut params = vec![
                ("x", x),
                ("tau", tau),
                ("sigma", cfg.sigma),
                ("l", cfg.l as f64),
                ("mode", mode_tag(cfg.mode)),
            ];
            params.extend(constant_params(cfg));
            if let Ok(c) = cfg.constants.cbar(cfg.l) {
                params.push(("cbar", c));
            }
            let key = cache::cache_key(&format!("functional-{}", kind.label()), &params, &cfg.policy);
            if let Some(s) = cache::load(&cfg.cache_dir, &key) {
                samples.push(s);
                continue;
            }
            let sample = match kind {
                FunctionalKind::F1 => {
                    functional_f1(x, tau, cfg.mode, &cfg.constants, &cfg.policy)?
                }
                FunctionalKind::Crossbreed => crossbreed_functional(
                    x,
                    cfg.sigma,
                    tau,
                    &coeffs,
                    cfg.mode,
                    &cfg.constants,
                    &cfg.policy,
                )?,
                FunctionalKind::Divisor => {
                    divisor_sum_functional(x, tau, cfg.mode, &cfg.constants, &cfg.policy)?
                }
                FunctionalKind::Tnu => {
                    tnu_sum_functional(x, tau, cfg.mode, &cfg.constants, &cfg.policy)?
                }
                FunctionalKind::Gamma => {
                    gamma_ratio_functional(x, tau, cfg.mode, &cfg.constants, &cfg.policy)?
                }
                FunctionalKind::SigmaMoment => {
                    sigma_moment_functional(x, cfg.sigma, tau, &cfg.policy)?
                }
                FunctionalKind::S1 => {
                    let cbar = cfg.constants.cbar(cfg.l)?;
                    let table = zero_table(cfg, (x * tau / cbar).max(12.0) * 1.01)?;
                    s1_moment_functional(x, cfg.l, tau, &table, &cfg.constants, &cfg.policy)?
                }
            };
            cache::store(&cfg.cache_dir, &key, &sample)?;
            samples.push(sample);
        }
    }
    if report::is_json(cfg) {
        let results = json!({ "kind": kind.label(), "samples": samples });
        return Ok(report::json_envelope(cfg, &results, &[]));
    }
    let mut s = report::config_comment_lines(cfg);
    s.push_str("kind,x,tau,value,x_target,rel_error_vs_target\n");
    let mut i = 0;
    for &x in &cfg.x_values {
        for _ in &cfg.tau_grid {
            let smp = &samples[i];
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                kind.label(),
                fmt_f64(x),
                fmt_f64(smp.tau),
                fmt_f64(smp.value),
                fmt_f64(smp.x_target),
                fmt_f64(smp.rel_error_vs_target)
            ));
            i += 1;
        }
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// chain
// ---------------------------------------------------------------------------

pub struct ChainOutcome {
    pub rendered: String,
    pub complete_rows: usize,
    pub svg: Option<String>,
}

pub fn cmd_chain(cfg: &RunConfig, x: f64) -> anyhow::Result<ChainOutcome> {
    // artifacts must echo the scale the chain actually ran at
    let cfg = &{
        let mut c = cfg.clone();
        c.x_values = vec![x];
        c
    };
    let coeffs = coeffs_from_config(cfg);
    let tau_max = cfg.tau_grid.last().copied().unwrap_or(1e3);
    // table height: the S1 member needs x tau / cbar(l); other members need
    // no zeros at all
    let table_height = match cfg.constants.cbar(cfg.l) {
        Ok(cbar) => (x * tau_max / cbar).max(20.0) * 1.01,
        Err(_) => 20.0,
    };
    let table = zero_table(cfg, table_height)?;
    let mut params = vec![
        ("x", x),
        ("sigma", cfg.sigma),
        ("l", cfg.l as f64),
        ("mode", mode_tag(cfg.mode)),
    ];
    for (i, tau) in cfg.tau_grid.iter().enumerate() {
        params.push((Box::leak(format!("tau{i}").into_boxed_str()), *tau));
    }
    params.extend(constant_params(cfg));
    if let Ok(c) = cfg.constants.cbar(cfg.l) {
        params.push(("cbar", c));
    }
    let key = cache::cache_key("chain", &params, &cfg.policy);
    let rep: ChainReport = match cache::load(&cfg.cache_dir, &key) {
        Some(r) => r,
        None => {
            let r = evaluate_chain(
                x,
                cfg.sigma,
                cfg.l,
                &cfg.tau_grid,
                cfg.mode,
                &coeffs,
                &table,
                &cfg.constants,
                &cfg.policy,
            )?;
            cache::store(&cfg.cache_dir, &key, &r)?;
            r
        }
    };
    let svg = cfg.plot_svg.then(|| report::chain_svg(&rep));
    let rendered = if report::is_json(cfg) {
        let errors: Vec<String> = rep
            .members
            .iter()
            .enumerate()
            .flat_map(|(m, row)| {
                row.iter().enumerate().filter_map(move |(j, c)| match c {
                    zetalab::chain::CellValue::Error { error } => Some(format!(
                        "member {} at tau index {j}: {error}",
                        zetalab::chain::MEMBER_NAMES[m]
                    )),
                    _ => None,
                })
            })
            .collect();
        report::json_envelope(cfg, &rep, &errors)
    } else {
        report::chain_csv(cfg, &rep)
    };
    Ok(ChainOutcome {
        rendered,
        complete_rows: rep.complete_rows(),
        svg,
    })
}

// ---------------------------------------------------------------------------
// fermat
// ---------------------------------------------------------------------------

pub fn cmd_fermat(cfg: &RunConfig, triple: (u64, u64, u64), n: u32) -> anyhow::Result<String> {
    let fr = FermatRational::new(triple.0, triple.1, triple.2, n)?;
    let coeffs = coeffs_from_config(cfg);
    let mut params = vec![
        ("x", triple.0 as f64),
        ("y", triple.1 as f64),
        ("z", triple.2 as f64),
        ("n", n as f64),
        ("sigma", cfg.sigma),
        ("mode", mode_tag(cfg.mode)),
    ];
    for (i, tau) in cfg.tau_grid.iter().enumerate() {
        params.push((Box::leak(format!("tau{i}").into_boxed_str()), *tau));
    }
    params.extend(constant_params(cfg));
    let key = cache::cache_key("fermat", &params, &cfg.policy);
    type Stored = (Vec<FunctionalSample>, zetalab::functionals::ProbeVerdict);
    let (samples, verdict): Stored = match cache::load(&cfg.cache_dir, &key) {
        Some(v) => v,
        None => {
            let v = fermat_probe(
                &fr,
                cfg.sigma,
                &cfg.tau_grid,
                &coeffs,
                cfg.mode,
                &cfg.constants,
                &cfg.policy,
            )?;
            cache::store(&cfg.cache_dir, &key, &v)?;
            v
        }
    };
    let rational = format!("{}/{}", fr.value().numer(), fr.value().denom());
    if report::is_json(cfg) {
        let results = json!({
            "triple": { "x": triple.0, "y": triple.1, "z": triple.2, "n": n },
            "rational": rational,
            "rational_f64": fr.value_f64()?,
            "trajectory": samples,
            "verdict": verdict,
        });
        return Ok(report::json_envelope(cfg, &results, &[]));
    }
    let mut s = report::config_comment_lines(cfg);
    s.push_str(&format!("# rational = {rational}\n"));
    s.push_str("tau,value,x_target,rel_error_vs_target\n");
    for smp in &samples {
        s.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(smp.tau),
            fmt_f64(smp.value),
            fmt_f64(smp.x_target),
            fmt_f64(smp.rel_error_vs_target)
        ));
    }
    s.push_str(&format!(
        "# extrapolated_limit = {}\n# fit_std_error = {}\n# separated_from_one = {}\n",
        fmt_f64(verdict.extrapolated_limit),
        fmt_f64(verdict.fit_std_error),
        verdict.separated_from_one
    ));
    Ok(s)
}

// ---------------------------------------------------------------------------
// fit / calibrate / zeros
// ---------------------------------------------------------------------------

pub fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        bail!("grid spec must be lo:hi:n, got '{spec}'");
    }
    let lo: f64 = parts[0].parse().context("grid lo")?;
    let hi: f64 = parts[1].parse().context("grid hi")?;
    let n: usize = parts[2].parse().context("grid n")?;
    if !(lo > 0.0 && hi > lo && n >= 2) {
        bail!("grid spec needs 0 < lo < hi and n >= 2");
    }
    // geometric spacing
    let ratio = (hi / lo).powf(1.0 / (n - 1) as f64);
    Ok((0..n).map(|i| lo * ratio.powi(i as i32)).collect())
}

pub fn cmd_fit(cfg: &mut RunConfig, grid_spec: &str) -> anyhow::Result<String> {
    let grid = parse_grid(grid_spec)?;
    let fit = fit_fourth_moment_coeffs(&grid, &cfg.constants, &cfg.policy)?;
    cfg.constants.a_tail = Some([
        fit.a_coeffs[1],
        fit.a_coeffs[2],
        fit.a_coeffs[3],
        fit.a_coeffs[4],
    ]);
    if let Some(path) = cfg.config_path.clone() {
        save_constants(cfg, &path)?;
    }
    if report::is_json(cfg) {
        return Ok(report::json_envelope(cfg, &fit, &[]));
    }
    let mut s = report::config_comment_lines(cfg);
    s.push_str("a0,a1,a2,a3,a4,residual\n");
    s.push_str(&format!(
        "{},{},{},{},{},{}\n",
        fmt_f64(fit.a_coeffs[0]),
        fmt_f64(fit.a_coeffs[1]),
        fmt_f64(fit.a_coeffs[2]),
        fmt_f64(fit.a_coeffs[3]),
        fmt_f64(fit.a_coeffs[4]),
        fmt_f64(fit.residual)
    ));
    Ok(s)
}

pub fn cmd_calibrate(cfg: &mut RunConfig, l: u32, tau_ref: f64) -> anyhow::Result<String> {
    // the crossing height is not known a priori; grow the table until the
    // accumulated moment reaches the reference
    let mut height = 1.6 * tau_ref;
    let mut cbar = None;
    for _ in 0..4 {
        let table = zero_table(cfg, height)?;
        match calibrate_cbar(l, tau_ref, &table, &cfg.policy) {
            Ok(v) => {
                cbar = Some(v);
                break;
            }
            Err(zetalab::CoreError::CoverageError(_)) => height *= 1.5,
            Err(e) => return Err(e.into()),
        }
    }
    let cbar = cbar.ok_or_else(|| anyhow!("calibration did not converge within the height cap"))?;
    cfg.constants.cbar.insert(l, cbar);
    if let Some(path) = cfg.config_path.clone() {
        save_constants(cfg, &path)?;
    }
    if report::is_json(cfg) {
        let results = json!({ "l": l, "tau_ref": tau_ref, "cbar": cbar });
        return Ok(report::json_envelope(cfg, &results, &[]));
    }
    let mut s = report::config_comment_lines(cfg);
    s.push_str("l,tau_ref,cbar\n");
    s.push_str(&format!("{l},{},{}\n", fmt_f64(tau_ref), fmt_f64(cbar)));
    Ok(s)
}

pub fn cmd_zeros(cfg: &RunConfig, t_max: f64) -> anyhow::Result<String> {
    let table = zero_table(cfg, t_max)?;
    if report::is_json(cfg) {
        return Ok(report::json_envelope(cfg, &table, &[]));
    }
    let mut s = report::config_comment_lines(cfg);
    s.push_str(&format!("# t_max = {}\n", fmt_f64(table.upper_bound())));
    s.push_str("index,ordinate\n");
    for (i, z) in table.zeros().iter().enumerate() {
        if *z > t_max {
            break;
        }
        s.push_str(&format!("{},{}\n", i + 1, fmt_f64(*z)));
    }
    Ok(s)
}

//! Flat key-value configuration with fail-fast parsing: unknown keys are
//! errors, and every emitted artifact embeds the resolved configuration.

use anyhow::{bail, Context};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use zetalab::ladder::LadderMode;
use zetalab::{Constants, PrecisionPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Fully resolved run configuration: defaults, then the config file, then
/// command-line flags.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub sigma: f64,
    pub epsilon: f64,
    pub x_values: Vec<f64>,
    pub l: u32,
    pub tau_grid: Vec<f64>,
    pub mode: LadderMode,
    pub policy: PrecisionPolicy,
    pub constants: Constants,
    pub cache_dir: PathBuf,
    pub output: OutputFormat,
    pub plot_svg: bool,
    #[serde(skip)]
    pub config_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            sigma: 1.0,
            epsilon: 0.05,
            x_values: vec![1.0],
            l: 1,
            tau_grid: vec![1e3, 3e3, 1e4],
            mode: LadderMode::Asymptotic,
            policy: PrecisionPolicy::default(),
            constants: Constants::default(),
            cache_dir: PathBuf::from("zetalab-cache"),
            output: OutputFormat::Csv,
            plot_svg: false,
            config_path: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        if !(self.sigma >= 0.5 + self.epsilon) {
            bail!(
                "sigma = {} below 1/2 + epsilon = {}",
                self.sigma,
                0.5 + self.epsilon
            );
        }
        if self.tau_grid.is_empty() {
            bail!("empty tau grid");
        }
        if self.tau_grid.windows(2).any(|w| w[0] >= w[1]) {
            bail!("tau grid must be strictly ascending");
        }
        if self.tau_grid.iter().any(|t| !(*t > 0.0)) {
            bail!("tau values must be positive");
        }
        if self.x_values.iter().any(|x| !(*x > 0.0)) {
            bail!("x values must be positive");
        }
        self.policy.validate()?;
        self.constants.validate()?;
        Ok(())
    }

    /// Flat key-value rendering embedded in every artifact.
    pub fn flat_pairs(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("sigma".into(), fmt_f64(self.sigma)),
            ("epsilon".into(), fmt_f64(self.epsilon)),
            (
                "x".into(),
                self.x_values.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(","),
            ),
            ("l".into(), self.l.to_string()),
            (
                "tau".into(),
                self.tau_grid.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(","),
            ),
            (
                "mode".into(),
                match self.mode {
                    LadderMode::Integral => "integral".into(),
                    LadderMode::Asymptotic => "asymptotic".into(),
                },
            ),
            ("abs_tol".into(), fmt_f64(self.policy.abs_tol)),
            ("rel_tol".into(), fmt_f64(self.policy.rel_tol)),
            (
                "max_series_terms".into(),
                self.policy.max_series_terms.to_string(),
            ),
            (
                "max_panel_depth".into(),
                self.policy.max_panel_depth.to_string(),
            ),
            ("euler_c".into(), fmt_f64(self.constants.euler_c)),
            ("t0".into(), fmt_f64(self.constants.t0)),
            ("alpha".into(), fmt_f64(self.constants.alpha)),
            (
                "fit_condition_cap".into(),
                fmt_f64(self.constants.fit_condition_cap),
            ),
            (
                "cache_dir".into(),
                self.cache_dir.display().to_string(),
            ),
            (
                "out".into(),
                match self.output {
                    OutputFormat::Csv => "csv".into(),
                    OutputFormat::Json => "json".into(),
                },
            ),
        ];
        if let Some(a) = self.constants.a_tail {
            for (i, v) in a.iter().enumerate() {
                out.push((format!("a{}", i + 1), fmt_f64(*v)));
            }
        }
        for (l, v) in &self.constants.cbar {
            out.push((format!("cbar.{l}"), fmt_f64(*v)));
        }
        out
    }
}

pub fn fmt_f64(v: f64) -> String {
    // shortest round-trip formatting: deterministic and exact
    format!("{v}")
}

/// Parse a flat key = value config file; unknown keys are errors.
pub fn apply_file(cfg: &mut RunConfig, path: &Path) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("{}:{}: expected key = value", path.display(), lineno + 1))?;
        let key = key.trim();
        let value = value.trim();
        apply_key(cfg, key, value)
            .with_context(|| format!("{}:{}: key '{key}'", path.display(), lineno + 1))?;
    }
    cfg.config_path = Some(path.to_path_buf());
    Ok(())
}

fn parse_f64(value: &str) -> anyhow::Result<f64> {
    value
        .parse::<f64>()
        .with_context(|| format!("not a number: '{value}'"))
}

fn parse_list(value: &str) -> anyhow::Result<Vec<f64>> {
    value.split(',').map(|v| parse_f64(v.trim())).collect()
}

fn apply_key(cfg: &mut RunConfig, key: &str, value: &str) -> anyhow::Result<()> {
    match key {
        "sigma" => cfg.sigma = parse_f64(value)?,
        "epsilon" => cfg.epsilon = parse_f64(value)?,
        "x" => cfg.x_values = parse_list(value)?,
        "l" => cfg.l = value.parse()?,
        "tau" => cfg.tau_grid = parse_list(value)?,
        "mode" => {
            cfg.mode = match value {
                "integral" => LadderMode::Integral,
                "asymptotic" => LadderMode::Asymptotic,
                other => bail!("unknown mode '{other}' (integral|asymptotic)"),
            }
        }
        "abs_tol" => cfg.policy.abs_tol = parse_f64(value)?,
        "rel_tol" => cfg.policy.rel_tol = parse_f64(value)?,
        "max_series_terms" => cfg.policy.max_series_terms = value.parse()?,
        "max_panel_depth" => cfg.policy.max_panel_depth = value.parse()?,
        "euler_c" => cfg.constants.euler_c = parse_f64(value)?,
        "t0" => cfg.constants.t0 = parse_f64(value)?,
        "alpha" => cfg.constants.alpha = parse_f64(value)?,
        "fit_condition_cap" => cfg.constants.fit_condition_cap = parse_f64(value)?,
        "a1" | "a2" | "a3" | "a4" => {
            let idx = key[1..].parse::<usize>().unwrap() - 1;
            let mut tail = cfg.constants.a_tail.unwrap_or([0.0; 4]);
            tail[idx] = parse_f64(value)?;
            cfg.constants.a_tail = Some(tail);
        }
        "cache_dir" => cfg.cache_dir = PathBuf::from(value),
        "out" => {
            cfg.output = match value {
                "csv" => OutputFormat::Csv,
                "json" => OutputFormat::Json,
                other => bail!("unknown output format '{other}' (csv|json)"),
            }
        }
        _ => {
            if let Some(l) = key.strip_prefix("cbar.") {
                let l: u32 = l.parse().context("cbar key index")?;
                cfg.constants.cbar.insert(l, parse_f64(value)?);
            } else {
                bail!("unknown configuration key");
            }
        }
    }
    Ok(())
}

/// Persist fitted coefficients / calibrated constants back to the config
/// file, keeping it the single source of reproducibility.
pub fn save_constants(cfg: &RunConfig, path: &Path) -> anyhow::Result<()> {
    let mut pairs: BTreeMap<String, String> = BTreeMap::new();
    for (k, v) in cfg.flat_pairs() {
        pairs.insert(k, v);
    }
    let mut text = String::from("# zetalab configuration (regenerated)\n");
    for (k, v) in pairs {
        text.push_str(&format!("{k} = {v}\n"));
    }
    std::fs::write(path, text).with_context(|| format!("writing config {}", path.display()))?;
    Ok(())
}

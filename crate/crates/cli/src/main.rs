//! zetalab: numerical experiments over zeta moment integrals, with cached,
//! reproducible CSV/JSON artifacts.

mod cache;
mod commands;
mod config;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use commands::FunctionalKind;
use config::{OutputFormat, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;
use zetalab::ladder::LadderMode;
use zetalab::quadrature::IntegrandKind;

const EXIT_USAGE: u8 = 1;
const EXIT_COMPUTE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "zetalab",
    version,
    about = "Numerical laboratory for zeta moment integrals and functional chains",
    disable_help_subcommand = true
)]
struct Cli {
    /// Flat key=value configuration file (unknown keys are errors)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Off-critical-line abscissa sigma
    #[arg(long, global = true)]
    sigma: Option<f64>,
    /// Margin epsilon in the constraint sigma >= 1/2 + epsilon
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Functional scale x (repeatable)
    #[arg(long, global = true)]
    x: Vec<f64>,
    /// S1-moment order parameter l
    #[arg(long, global = true)]
    l: Option<u32>,
    /// Normalization height tau (repeatable, ascending)
    #[arg(long, global = true)]
    tau: Vec<f64>,
    /// Reverse-iteration mode
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Relative tolerance for moment integrals
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Absolute tolerance for scalar kernels
    #[arg(long = "abs-tol", global = true)]
    abs_tol: Option<f64>,
    /// Cache directory
    #[arg(long = "cache-dir", global = true)]
    cache_dir: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    out: Option<OutArg>,
    /// Plot format (only `svg`); writes zetalab_chain.svg next to the cache
    #[arg(long, global = true)]
    plot: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Integral,
    Asymptotic,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MomentKindArg {
    Crit2,
    Crit4,
    Sigma2,
    S1,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionalKindArg {
    F1,
    Crossbreed,
    Divisor,
    Tnu,
    Gamma,
    SigmaMoment,
    S1,
}

#[derive(Subcommand)]
enum Command {
    /// One moment integral over [lower, upper]
    Moment {
        #[arg(long, value_enum)]
        kind: MomentKindArg,
        #[arg(long, default_value_t = 0.0)]
        lower: f64,
        #[arg(long)]
        upper: f64,
    },
    /// Reverse iterates of a base point with partition checks
    Ladder {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        k: usize,
    },
    /// One functional over the configured x and tau grids
    Functional {
        #[arg(long, value_enum)]
        kind: FunctionalKindArg,
    },
    /// All family members against the basic state over the tau grid
    Chain,
    /// The composed functional at an exact rational (x^n + y^n)/z^n
    Fermat {
        /// The triple x y z
        #[arg(long, num_args = 3)]
        triple: Vec<u64>,
        #[arg(long)]
        n: u32,
    },
    /// Fit the fourth-moment coefficients on a geometric grid lo:hi:n
    Fit {
        #[arg(long)]
        grid: String,
    },
    /// Calibrate cbar(l) at a reference height
    Calibrate {
        #[arg(long = "tau-ref")]
        tau_ref: f64,
    },
    /// Critical-line zeros up to a height
    Zeros {
        #[arg(long = "t-max")]
        t_max: f64,
    },
}

fn build_config(cli: &Cli) -> anyhow::Result<(RunConfig, bool)> {
    let mut cfg = RunConfig::default();
    let mut x_explicit = false;
    if let Some(path) = &cli.config {
        config::apply_file(&mut cfg, path)?;
        x_explicit = true; // a config file pins x explicitly via its defaults
    }
    if let Some(v) = cli.sigma {
        cfg.sigma = v;
    }
    if let Some(v) = cli.epsilon {
        cfg.epsilon = v;
    }
    if !cli.x.is_empty() {
        cfg.x_values = cli.x.clone();
        x_explicit = true;
    }
    if let Some(v) = cli.l {
        cfg.l = v;
    }
    if !cli.tau.is_empty() {
        cfg.tau_grid = cli.tau.clone();
    }
    if let Some(m) = cli.mode {
        cfg.mode = match m {
            ModeArg::Integral => LadderMode::Integral,
            ModeArg::Asymptotic => LadderMode::Asymptotic,
        };
    }
    if let Some(v) = cli.tol {
        cfg.policy.rel_tol = v;
    }
    if let Some(v) = cli.abs_tol {
        cfg.policy.abs_tol = v;
    }
    if let Some(d) = &cli.cache_dir {
        cfg.cache_dir = d.clone();
    }
    if let Some(o) = cli.out {
        cfg.output = match o {
            OutArg::Csv => OutputFormat::Csv,
            OutArg::Json => OutputFormat::Json,
        };
    }
    if let Some(p) = &cli.plot {
        if p != "svg" {
            anyhow::bail!("unsupported plot format '{p}' (only svg)");
        }
        cfg.plot_svg = true;
    }
    cfg.validate()?;
    Ok((cfg, x_explicit))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version are not usage errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            println!("{}", report::json_error("usage", &e.to_string()));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let (mut cfg, x_explicit) = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            println!("{}", report::json_error("usage", &format!("{e:#}")));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let outcome = run(&cli, &mut cfg, x_explicit);
    match outcome {
        Ok(code) => code,
        Err(e) => {
            println!("{}", report::json_error("computation", &format!("{e:#}")));
            ExitCode::from(EXIT_COMPUTE)
        }
    }
}

fn run(cli: &Cli, cfg: &mut RunConfig, x_explicit: bool) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Moment { kind, lower, upper } => {
            if upper < lower {
                println!("{}", report::json_error("usage", "upper below lower"));
                return Ok(ExitCode::from(EXIT_USAGE));
            }
            let kind = match kind {
                MomentKindArg::Crit2 => IntegrandKind::Crit2,
                MomentKindArg::Crit4 => IntegrandKind::Crit4,
                MomentKindArg::Sigma2 => IntegrandKind::Sigma2 { sigma: cfg.sigma },
                MomentKindArg::S1 => IntegrandKind::S1Moment { l: cfg.l },
            };
            print!("{}", commands::cmd_moment(cfg, kind, *lower, *upper)?);
        }
        Command::Ladder { t, k } => {
            print!("{}", commands::cmd_ladder(cfg, *t, *k)?);
        }
        Command::Functional { kind } => {
            let kind = match kind {
                FunctionalKindArg::F1 => FunctionalKind::F1,
                FunctionalKindArg::Crossbreed => FunctionalKind::Crossbreed,
                FunctionalKindArg::Divisor => FunctionalKind::Divisor,
                FunctionalKindArg::Tnu => FunctionalKind::Tnu,
                FunctionalKindArg::Gamma => FunctionalKind::Gamma,
                FunctionalKindArg::SigmaMoment => FunctionalKind::SigmaMoment,
                FunctionalKindArg::S1 => FunctionalKind::S1,
            };
            print!("{}", commands::cmd_functional(cfg, kind)?);
        }
        Command::Chain => {
            // the default chain scale is the special value x = 1 - c
            let x = if x_explicit {
                cfg.x_values[0]
            } else {
                cfg.constants.one_minus_c()
            };
            let outcome = commands::cmd_chain(cfg, x)?;
            print!("{}", outcome.rendered);
            if let Some(svg) = outcome.svg {
                let path = cfg.cache_dir.join("zetalab_chain.svg");
                std::fs::create_dir_all(&cfg.cache_dir).ok();
                std::fs::write(&path, svg)?;
                eprintln!("plot written to {}", path.display());
            }
            if outcome.complete_rows == 0 {
                return Ok(ExitCode::from(EXIT_COMPUTE));
            }
        }
        Command::Fermat { triple, n } => {
            if triple.len() != 3 {
                println!("{}", report::json_error("usage", "--triple needs x y z"));
                return Ok(ExitCode::from(EXIT_USAGE));
            }
            if *n < 3 {
                println!(
                    "{}",
                    report::json_error("usage", "exponent n must be at least 3")
                );
                return Ok(ExitCode::from(EXIT_USAGE));
            }
            print!(
                "{}",
                commands::cmd_fermat(cfg, (triple[0], triple[1], triple[2]), *n)?
            );
        }
        Command::Fit { grid } => {
            print!("{}", commands::cmd_fit(cfg, grid)?);
        }
        Command::Calibrate { tau_ref } => {
            let l = cfg.l;
            print!("{}", commands::cmd_calibrate(cfg, l, *tau_ref)?);
        }
        Command::Zeros { t_max } => {
            if *t_max < 10.0 {
                println!(
                    "{}",
                    report::json_error("usage", "t-max must be at least 10")
                );
                return Ok(ExitCode::from(EXIT_USAGE));
            }
            print!("{}", commands::cmd_zeros(cfg, *t_max)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

//! Side-by-side evaluation of the whole functional family at finite heights:
//! every member against the basic state, convergence slopes, and pairwise
//! distinctness experiments across different x.
//!
//! Members are stored raw (not divided by tau), so a report row reproduces
//! the asymptotically equal quantities themselves; all seven scale as x tau.

use crate::functionals::{
    crossbreed_functional, divisor_sum_functional, functional_f1, gamma_ratio_functional,
    s1_moment_functional, sigma_moment_functional, tnu_sum_functional, CoeffFit,
};
use crate::ladder::LadderMode;
use crate::zeros::ZeroTable;
use crate::{Constants, CoreError, PrecisionPolicy, Result};
use serde::{Deserialize, Serialize};

/// Row labels of a chain report, basic state first.
pub const MEMBER_NAMES: [&str; 7] = [
    "basic_state",
    "crossbreed",
    "divisor_sum",
    "tnu_sum_pi",
    "gamma_ratio",
    "sigma_moment",
    "s1_moment",
];

/// A report cell: a finite value or an explicit error marker, never a gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "cell", rename_all = "snake_case")]
pub enum CellValue {
    Value { value: f64 },
    Error { error: String },
}

impl CellValue {
    pub fn value(&self) -> Option<f64> {
        match self {
            CellValue::Value { value } => Some(*value),
            CellValue::Error { .. } => None,
        }
    }

    fn from_result(r: Result<f64>) -> Self {
        match r {
            Ok(value) if value.is_finite() => CellValue::Value { value },
            Ok(value) => CellValue::Error {
                error: format!("non-finite value {value}"),
            },
            Err(e) => CellValue::Error {
                error: e.to_string(),
            },
        }
    }
}

/// All seven members over a tau grid, with ratios to the basic state and
/// fitted convergence exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub x: f64,
    pub sigma: f64,
    pub l: u32,
    pub tau_grid: Vec<f64>,
    /// members[m][j]: raw value of member m at tau_grid[j].
    pub members: Vec<Vec<CellValue>>,
    /// ratios[m][j] = members[m][j] / members[0][j].
    pub ratios: Vec<Vec<CellValue>>,
    /// Fitted exponent p of |ratio - 1| ~ beta (1/ln tau)^p per member, when
    /// at least two finite points exist.
    pub slopes: Vec<Option<f64>>,
}

impl ChainReport {
    pub fn member_names() -> &'static [&'static str; 7] {
        &MEMBER_NAMES
    }

    /// Count of member rows whose every cell is a finite value.
    pub fn complete_rows(&self) -> usize {
        self.members
            .iter()
            .filter(|row| row.iter().all(|c| c.value().is_some()))
            .count()
    }
}

/// Evaluate the full family at each tau of the grid.
///
/// A member failure marks that cell and leaves the rest of the report
/// intact.
pub fn evaluate_chain(
    x: f64,
    sigma: f64,
    l: u32,
    tau_grid: &[f64],
    mode: LadderMode,
    coeffs: &CoeffFit,
    table: &ZeroTable,
    constants: &Constants,
    policy: &PrecisionPolicy,
) -> Result<ChainReport> {
    if tau_grid.is_empty() {
        return Err(CoreError::DomainError("empty tau grid".into()));
    }
    let pi = std::f64::consts::PI;
    let mut members: Vec<Vec<CellValue>> = vec![Vec::new(); 7];
    for &tau in tau_grid {
        let basic = functional_f1(x, tau, mode, constants, policy).map(|s| s.value * tau);
        let cross = crossbreed_functional(x, sigma, tau, coeffs, mode, constants, policy)
            .map(|s| s.value * tau);
        let divisor =
            divisor_sum_functional(x, tau, mode, constants, policy).map(|s| s.value * tau);
        let tnu = tnu_sum_functional(x, tau, mode, constants, policy)
            .map(|s| pi * s.value * tau);
        let gamma = gamma_ratio_functional(x, tau, mode, constants, policy).map(|s| s.value * tau);
        let sigma_m = sigma_moment_functional(x, sigma, tau, policy).map(|s| s.value * tau);
        let s1 = s1_moment_functional(x, l, tau, table, constants, policy).map(|s| s.value * tau);
        for (row, res) in members.iter_mut().zip([
            basic, cross, divisor, tnu, gamma, sigma_m, s1,
        ]) {
            row.push(CellValue::from_result(res));
        }
    }
    let ratios: Vec<Vec<CellValue>> = members
        .iter()
        .map(|row| {
            row.iter()
                .zip(&members[0])
                .map(|(cell, basic)| match (cell.value(), basic.value()) {
                    (Some(v), Some(b)) if b != 0.0 => CellValue::Value { value: v / b },
                    (Some(_), Some(_)) => CellValue::Error {
                        error: "zero basic state".into(),
                    },
                    _ => CellValue::Error {
                        error: "member or basic state unavailable".into(),
                    },
                })
                .collect()
        })
        .collect();
    let slopes = ratios
        .iter()
        .map(|row| fit_slope(tau_grid, row))
        .collect();
    Ok(ChainReport {
        x,
        sigma,
        l,
        tau_grid: tau_grid.to_vec(),
        members,
        ratios,
        slopes,
    })
}

/// Log-log fit of |ratio - 1| against 1/ln tau; the slope is the convergence
/// exponent.
fn fit_slope(taus: &[f64], ratios: &[CellValue]) -> Option<f64> {
    let mut design = Vec::new();
    let mut y = Vec::new();
    for (tau, cell) in taus.iter().zip(ratios) {
        if let Some(r) = cell.value() {
            let dev = (r - 1.0).abs();
            if dev > 1e-14 {
                design.push(vec![1.0, (1.0 / tau.ln()).ln()]);
                y.push(dev.ln());
            }
        }
    }
    if design.len() < 2 {
        return None;
    }
    crate::fitting::lstsq(&design, &y).ok().map(|f| f.beta[1])
}

/// Quotient trajectory of two basic-state integrals and its extrapolated
/// limit (which tends to x2/x1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinctnessReport {
    pub x1: f64,
    pub x2: f64,
    pub tau_grid: Vec<f64>,
    pub ratios: Vec<f64>,
    pub extrapolated_limit: f64,
    pub fit_std_error: f64,
    /// |limit - 1| > 3 fit errors: a numerical witness that the two
    /// functionals differ.
    pub separated_from_one: bool,
}

pub fn distinctness_experiment(
    x1: f64,
    x2: f64,
    tau_grid: &[f64],
    mode: LadderMode,
    constants: &Constants,
    policy: &PrecisionPolicy,
) -> Result<DistinctnessReport> {
    for x in [x1, x2] {
        if !(x >= 1.0 && x <= constants.alpha) {
            return Err(CoreError::DomainError(format!(
                "x = {x} outside the admissible segment [1, {}]",
                constants.alpha
            )));
        }
    }
    let mut ratios = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        let a = functional_f1(x1, tau, mode, constants, policy)?;
        let b = functional_f1(x2, tau, mode, constants, policy)?;
        ratios.push(b.components["raw_integral"] / a.components["raw_integral"]);
    }
    let constant = ratios.windows(2).all(|w| w[0] == w[1]);
    let (limit, se) = if constant {
        // a constant trajectory needs no fit; this also keeps x1 = x2
        // exactly at ratio 1 with zero error
        (ratios[0], 0.0)
    } else {
        crate::functionals::extrapolate_in_inverse_log(tau_grid, &ratios)?
    };
    Ok(DistinctnessReport {
        x1,
        x2,
        tau_grid: tau_grid.to_vec(),
        ratios,
        extrapolated_limit: limit,
        fit_std_error: se,
        separated_from_one: (limit - 1.0).abs() > 3.0 * se,
    })
}

/// Pairwise member-by-member separation across a family of x values at one
/// tau.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyComparison {
    pub x_list: Vec<f64>,
    pub tau: f64,
    /// members[i][m]: raw member m for x_list[i].
    pub members: Vec<Vec<CellValue>>,
    /// separated[i][j]: whether every member pair is separated from ratio 1
    /// (None when any cell of the pair failed). Symmetric by construction.
    pub separated: Vec<Vec<Option<bool>>>,
}

pub fn chain_family_compare(
    x_list: &[f64],
    sigma: f64,
    l: u32,
    tau: f64,
    mode: LadderMode,
    coeffs: &CoeffFit,
    table: &ZeroTable,
    constants: &Constants,
    policy: &PrecisionPolicy,
) -> Result<FamilyComparison> {
    let mut members = Vec::with_capacity(x_list.len());
    for &x in x_list {
        let rep = evaluate_chain(x, sigma, l, &[tau], mode, coeffs, table, constants, policy)?;
        members.push(rep.members.iter().map(|row| row[0].clone()).collect::<Vec<_>>());
    }
    // separation threshold: well above quadrature noise, far below any
    // genuine x1 != x2 gap at desk scale
    let threshold = 100.0 * policy.rel_tol;
    let n = x_list.len();
    let mut separated = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                separated[i][j] = Some(false);
                continue;
            }
            let mut all = Some(true);
            for m in 0..7 {
                match (members[i][m].value(), members[j][m].value()) {
                    (Some(a), Some(b)) if a != 0.0 && b != 0.0 => {
                        let dev = (a / b - 1.0).abs().max((b / a - 1.0).abs());
                        if dev <= threshold {
                            all = Some(false);
                        }
                    }
                    _ => {
                        all = None;
                        break;
                    }
                }
            }
            separated[i][j] = all;
        }
    }
    Ok(FamilyComparison {
        x_list: x_list.to_vec(),
        tau,
        members,
        separated,
    })
}

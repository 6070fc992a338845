//! Small dense least squares used by the coefficient fit and the convergence
//! extrapolations. Normal equations with column scaling are plenty for the
//! 2-5 parameter models here.

use crate::{CoreError, Result};

/// Least-squares solution of `design * beta ~ y`.
pub struct LstSq {
    pub beta: Vec<f64>,
    /// Root-mean-square residual per observation.
    pub rms_residual: f64,
    /// Standard errors of the coefficients (NaN when dof = 0).
    pub std_errors: Vec<f64>,
    /// 1-norm condition estimate of the scaled normal matrix.
    pub condition: f64,
}

/// Solve min ||X beta - y||_2 via scaled normal equations.
pub fn lstsq(design: &[Vec<f64>], y: &[f64]) -> Result<LstSq> {
    let m = design.len();
    if m == 0 || design[0].is_empty() {
        return Err(CoreError::DomainError("empty design matrix".into()));
    }
    let k = design[0].len();
    if y.len() != m {
        return Err(CoreError::DomainError(
            "design/observation length mismatch".into(),
        ));
    }
    if m < k {
        return Err(CoreError::DomainError(format!(
            "underdetermined fit: {m} observations for {k} coefficients"
        )));
    }
    // column scaling
    let mut scale = vec![0.0f64; k];
    for row in design {
        for (j, v) in row.iter().enumerate() {
            scale[j] = scale[j].max(v.abs());
        }
    }
    for s in &mut scale {
        if *s == 0.0 {
            *s = 1.0;
        }
    }
    // normal matrix and right-hand side in scaled coordinates
    let mut ata = vec![vec![0.0f64; k]; k];
    let mut aty = vec![0.0f64; k];
    for (row, &yi) in design.iter().zip(y) {
        for i in 0..k {
            let ri = row[i] / scale[i];
            aty[i] += ri * yi;
            for j in 0..k {
                ata[i][j] += ri * row[j] / scale[j];
            }
        }
    }
    let inv = invert(&ata).ok_or_else(|| CoreError::IllConditioned {
        cond: f64::INFINITY,
        cap: f64::MAX,
    })?;
    let condition = norm1(&ata) * norm1(&inv);
    let mut beta_scaled = vec![0.0f64; k];
    for i in 0..k {
        for j in 0..k {
            beta_scaled[i] += inv[i][j] * aty[j];
        }
    }
    let beta: Vec<f64> = beta_scaled
        .iter()
        .zip(&scale)
        .map(|(b, s)| b / s)
        .collect();
    // residuals
    let mut ssr = 0.0;
    for (row, &yi) in design.iter().zip(y) {
        let fit: f64 = row.iter().zip(&beta).map(|(a, b)| a * b).sum();
        ssr += (yi - fit).powi(2);
    }
    let rms_residual = (ssr / m as f64).sqrt();
    let dof = m.saturating_sub(k);
    let var = if dof > 0 { ssr / dof as f64 } else { f64::NAN };
    let std_errors: Vec<f64> = (0..k)
        .map(|i| (var * inv[i][i]).sqrt() / scale[i])
        .collect();
    Ok(LstSq {
        beta,
        rms_residual,
        std_errors,
        condition,
    })
}

fn norm1(a: &[Vec<f64>]) -> f64 {
    let k = a.len();
    (0..k)
        .map(|j| (0..k).map(|i| a[i][j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Gauss-Jordan inverse with partial pivoting; None on (near-)singularity.
fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut aug: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let (pivot_row, pivot_val) = (col..n)
            .map(|r| (r, aug[r][col].abs()))
            .fold((col, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if pivot_val < 1e-300 {
            return None;
        }
        aug.swap(col, pivot_row);
        let p = aug[col][col];
        for v in &mut aug[col] {
            *v /= p;
        }
        for r in 0..n {
            if r != col {
                let factor = aug[r][col];
                if factor != 0.0 {
                    for j in 0..2 * n {
                        aug[r][j] -= factor * aug[col][j];
                    }
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

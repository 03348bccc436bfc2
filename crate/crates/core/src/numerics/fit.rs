//! Least-squares fits of the two asymptotic forms `a ln n + b` and `c n^gamma`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `y = a ln n + b`, params `(a, b)`.
    LogLinear,
    /// `y = c n^gamma`, params `(c, gamma)`; residuals measured in `ln y`.
    PowerLaw,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FitModel,
    pub params: (f64, f64),
    pub residual_rms: f64,
    pub n_range: (u64, u64),
}

impl FitResult {
    pub fn predict(&self, n: f64) -> f64 {
        match self.model {
            FitModel::LogLinear => self.params.0 * n.ln() + self.params.1,
            FitModel::PowerLaw => self.params.0 * n.powf(self.params.1),
        }
    }
}

/// Fits `y = a ln n + b` by ordinary least squares.
pub fn fit_log_linear(points: &[(u64, f64)]) -> Result<FitResult> {
    check_points(points)?;
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| y).collect();
    let (slope, intercept, rms) = linear_lsq(&xs, &ys)?;
    Ok(FitResult {
        model: FitModel::LogLinear,
        params: (slope, intercept),
        residual_rms: rms,
        n_range: n_range(points),
    })
}

/// Fits `ln y = gamma ln n + ln c`; returns params `(c, gamma)`.
pub fn fit_power_law(points: &[(u64, f64)]) -> Result<FitResult> {
    check_points(points)?;
    if let Some(&(n, y)) = points.iter().find(|&&(_, y)| !(y > 0.0)) {
        return domain(format!("power-law fit needs y > 0, got y = {y} at n = {n}"));
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| y.ln()).collect();
    let (gamma, ln_c, rms) = linear_lsq(&xs, &ys)?;
    Ok(FitResult {
        model: FitModel::PowerLaw,
        params: (ln_c.exp(), gamma),
        residual_rms: rms,
        n_range: n_range(points),
    })
}

fn check_points(points: &[(u64, f64)]) -> Result<()> {
    if points.len() < 3 {
        return domain(format!("fit needs at least 3 points, got {}", points.len()));
    }
    if points.iter().any(|&(n, _)| n < 1) {
        return domain("fit abscissae must satisfy n >= 1");
    }
    if points.iter().any(|&(_, y)| !y.is_finite()) {
        return domain("fit ordinates must be finite");
    }
    Ok(())
}

fn n_range(points: &[(u64, f64)]) -> (u64, u64) {
    let lo = points.iter().map(|p| p.0).min().unwrap_or(0);
    let hi = points.iter().map(|p| p.0).max().unwrap_or(0);
    (lo, hi)
}

/// Centered normal equations; returns `(slope, intercept, rms residual)`.
fn linear_lsq(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let m = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    if sxx <= f64::EPSILON * xbar.abs().max(1.0) {
        return domain("degenerate fit: all abscissae are equal");
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    Ok((slope, intercept, (ss / m).sqrt()))
}

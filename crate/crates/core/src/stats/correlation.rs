//! Pearson correlation with a t-test p-value, and least-squares line fits.

use serde::{Deserialize, Serialize};

use super::special::reg_incomplete_beta;
use super::StatsError;

/// Correlations within this distance of ±1 are exact linear relations
/// perturbed by rounding, and are reported as ±1.
const UNIT_SNAP: f64 = 8.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PearsonResult {
    pub rho: f64,
    /// Two-sided p-value under the null hypothesis of zero correlation.
    pub p_value: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub n: usize,
    pub rho: f64,
    pub p_value: f64,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl CorrelationReport {
    /// Correlates `y` against `x` and fits `y = slope · x + intercept`.
    pub fn compute(x: &[f64], y: &[f64]) -> Result<Self, StatsError> {
        let p = pearson(x, y)?;
        let fit = linear_fit(x, y)?;
        Ok(CorrelationReport {
            n: p.n,
            rho: p.rho,
            p_value: p.p_value,
            slope: fit.slope,
            intercept: fit.intercept,
            r_squared: fit.r_squared,
        })
    }
}

struct Moments {
    n: usize,
    mean_x: f64,
    mean_y: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
}

fn moments(x: &[f64], y: &[f64]) -> Result<Moments, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(StatsError::DegenerateInput("fewer than 3 points"));
    }
    if !x.iter().chain(y).all(|v| v.is_finite()) {
        return Err(StatsError::DegenerateInput("non-finite value"));
    }
    let nf = n as f64;
    let mean_x = x.iter().sum::<f64>() / nf;
    let mean_y = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mean_x, b - mean_y);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::DegenerateInput("constant series"));
    }
    Ok(Moments {
        n,
        mean_x,
        mean_y,
        sxx,
        syy,
        sxy,
    })
}

/// Sample correlation and its two-sided p-value.
///
/// With `t = r·√((n−2)/(1−r²))` and `ν = n − 2`, the p-value is
/// `I_{ν/(ν+t²)}(ν/2, 1/2)`; the argument simplifies to `1 − r²`.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<PearsonResult, StatsError> {
    let m = moments(x, y)?;
    let mut rho = (m.sxy / (m.sxx * m.syy).sqrt()).clamp(-1.0, 1.0);
    if 1.0 - rho.abs() <= UNIT_SNAP {
        rho = rho.signum();
    }
    Ok(PearsonResult {
        rho,
        p_value: correlation_p_value(rho, m.n)?,
        n: m.n,
    })
}

/// Two-sided p-value of a sample correlation `rho` over `n` points.
pub fn correlation_p_value(rho: f64, n: usize) -> Result<f64, StatsError> {
    if n < 3 {
        return Err(StatsError::DegenerateInput("fewer than 3 points"));
    }
    let r = rho.abs();
    if r >= 1.0 {
        return Ok(0.0);
    }
    let df = (n - 2) as f64;
    reg_incomplete_beta(df / 2.0, 0.5, (1.0 - r) * (1.0 + r))
}

/// Ordinary least squares with `r² = 1 − SS_res / SS_tot`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit, StatsError> {
    let m = moments(x, y)?;
    let slope = m.sxy / m.sxx;
    let intercept = m.mean_y - slope * m.mean_x;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let e = b - (slope * a + intercept);
            e * e
        })
        .sum();
    let r_squared = (1.0 - ss_res / m.syy).clamp(0.0, 1.0);
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

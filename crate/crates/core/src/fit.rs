//! Least-squares straight-line fits in log–log coordinates.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::{Error, Result};

/// Line `ln y ≈ intercept + slope · ln x` with the RMS of the log residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
}

impl LogLogFit {
    /// Fits with an RMS residual above this (in natural-log units) are not
    /// straight lines and get flagged by callers.
    pub const RESIDUAL_FLAG: f64 = 0.1;

    pub fn is_flagged(&self) -> bool {
        !(self.rms_residual <= Self::RESIDUAL_FLAG)
    }
}

/// Fits `ln y` against `ln x`. Needs at least three points, distinct
/// positive `x` and positive `y`.
pub fn fit_log_log(points: impl IntoIterator<Item = (f64, f64)>) -> Result<LogLogFit> {
    let mut logs: Vec<(f64, f64)> = Vec::new();
    for (x, y) in points {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::Fit("positive abscissae"));
        }
        if !(y > 0.0 && y.is_finite()) {
            return Err(Error::Fit("positive values"));
        }
        let lx = x.ln();
        if logs.iter().any(|&(l, _)| l == lx) {
            return Err(Error::Fit("distinct abscissae"));
        }
        logs.push((lx, y.ln()));
    }
    if logs.len() < 3 {
        return Err(Error::Fit("at least three samples"));
    }
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(lx, ly) in &logs {
        sxx += (lx - mean_x) * (lx - mean_x);
        sxy += (lx - mean_x) * (ly - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let rss: f64 = logs
        .iter()
        .map(|&(lx, ly)| {
            let r = ly - (intercept + slope * lx);
            r * r
        })
        .sum();
    Ok(LogLogFit {
        slope,
        intercept,
        rms_residual: (rss / n).sqrt(),
    })
}

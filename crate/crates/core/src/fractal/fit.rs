use crate::error::{Error, Result};

/// Least-squares line through `(log scale, log measure)` points.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub log_scales: Vec<f64>,
    pub log_measures: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl ScalingFit {
    pub fn new(log_scales: Vec<f64>, log_measures: Vec<f64>) -> Result<Self> {
        if log_scales.len() != log_measures.len() {
            return Err(Error::InvalidParameter("scale and measure counts differ".into()));
        }
        if log_scales.len() < 3 {
            return Err(Error::InvalidParameter(format!("need at least 3 scales, got {}", log_scales.len())));
        }
        if log_scales.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("scales must be strictly increasing".into()));
        }
        let (slope, intercept, r_squared) = least_squares(&log_scales, &log_measures);
        Ok(Self {
            log_scales,
            log_measures,
            slope,
            intercept,
            r_squared,
        })
    }
}

pub(crate) fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, my - slope * mx, r2)
}

/// Slope-only fit over precomputed abscissae, for per-voxel use.
#[derive(Debug, Clone)]
pub(crate) struct SlopeFit {
    centered: Vec<f64>,
    sxx: f64,
}

impl SlopeFit {
    pub fn new(log_scales: &[f64]) -> Self {
        let m = log_scales.iter().sum::<f64>() / log_scales.len() as f64;
        let centered: Vec<f64> = log_scales.iter().map(|v| v - m).collect();
        let sxx = centered.iter().map(|v| v * v).sum();
        Self { centered, sxx }
    }

    pub fn slope(&self, y: &[f64]) -> f64 {
        self.centered.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / self.sxx
    }
}

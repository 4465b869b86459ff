use super::quantize::{level_of, Region};
use crate::error::{Error, Result};
use crate::io::volume::{RegionMask, VoxelGrid};

/// Intensity statistics of a region. Moments use raw intensities; energy and
/// entropy (base 2) use a min-max binned histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramSummary {
    pub mean: f64,
    /// Population variance.
    pub variance: f64,
    pub skewness: f64,
    /// Excess kurtosis.
    pub kurtosis: f64,
    pub energy: f64,
    pub entropy: f64,
    /// Zero variance: skewness and kurtosis were set to 0.
    pub degenerate: bool,
}

impl HistogramSummary {
    pub fn from_values(values: &[f64], bins: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyRegion(0));
        }
        if bins < 2 {
            return Err(Error::InvalidParameter("histogram needs at least 2 bins".into()));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
        for &v in values {
            let d = v - mean;
            let d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
        }
        let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
        let degenerate = m2 <= 0.0;
        let (skewness, kurtosis) = if degenerate {
            (0.0, 0.0)
        } else {
            (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
        };
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut hist = vec![0usize; bins];
        for &v in values {
            hist[level_of(v, lo, hi - lo, bins) as usize - 1] += 1;
        }
        let (mut energy, mut entropy) = (0.0, 0.0);
        for &c in &hist {
            if c > 0 {
                let p = c as f64 / n;
                energy += p * p;
                entropy -= p * p.log2();
            }
        }
        Ok(Self {
            mean,
            variance: m2,
            skewness,
            kurtosis,
            energy,
            entropy,
            degenerate,
        })
    }

    pub fn as_pairs(&self) -> [(&'static str, f64); 6] {
        [
            ("Mean", self.mean),
            ("Variance", self.variance),
            ("Skewness", self.skewness),
            ("Kurtosis", self.kurtosis),
            ("Energy", self.energy),
            ("Entropy", self.entropy),
        ]
    }
}

pub const HISTOGRAM_FEATURES: [&str; 6] = ["Mean", "Variance", "Skewness", "Kurtosis", "Energy", "Entropy"];

pub fn region_values(grid: &VoxelGrid, mask: &RegionMask, region: Region) -> Result<Vec<f64>> {
    mask.aligned_with(grid)?;
    Ok(grid
        .data()
        .iter()
        .zip(mask.labels())
        .filter(|(_, &l)| region.contains(l))
        .map(|(&v, _)| v)
        .collect())
}

pub fn histogram_features(grid: &VoxelGrid, mask: &RegionMask, region: impl Into<Region>, bins: usize) -> Result<HistogramSummary> {
    let region = region.into();
    let values = region_values(grid, mask, region)?;
    if values.is_empty() {
        return Err(Error::EmptyRegion(match region {
            Region::Label(l) => l,
            _ => 255,
        }));
    }
    HistogramSummary::from_values(&values, bins)
}

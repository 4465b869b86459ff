//! Grey-tone spatial dependence (co-occurrence) matrices.

use super::quantize::QuantizedRegion;
use super::FeatureMap;
use crate::error::{Error, Result};

pub const GTSDM_FEATURES: [&str; 10] = [
    "Autocorrelation",
    "Contrast",
    "Correlation",
    "Energy",
    "Entropy",
    "Homogeneity",
    "Dissimilarity",
    "ClusterShade",
    "ClusterProminence",
    "MaxProbability",
];

/// Symmetric, normalized co-occurrence matrix for one offset.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceMatrix {
    levels: usize,
    offset: [i32; 3],
    p: Vec<f64>,
}

impl CooccurrenceMatrix {
    pub fn build(q: &QuantizedRegion, offset: [i32; 3]) -> Result<Self> {
        if offset == [0, 0, 0] {
            return Err(Error::InvalidParameter("offset must be non-zero".into()));
        }
        let l = q.levels();
        let [sx, sy, sz] = q.size();
        let [dx, dy, dz] = offset.map(|c| c as i64);
        let grid = q.raw();
        let mut counts = vec![0u64; l * l];
        let mut pairs = 0u64;
        // Only the start positions whose partner lands in the box.
        let range = |d: i64, s: usize| -> (usize, usize) {
            let s = s as i64;
            ((-d).max(0).min(s) as usize, (s - d.max(0)).max(0) as usize)
        };
        let (x0, x1) = range(dx, sx);
        let (y0, y1) = range(dy, sy);
        let (z0, z1) = range(dz, sz);
        let step = dx + sx as i64 * (dy + sy as i64 * dz);
        for z in z0..z1 {
            for y in y0..y1 {
                let row = sx * (y + sy * z);
                for x in x0..x1 {
                    let i = row + x;
                    let a = grid[i];
                    if a == 0 {
                        continue;
                    }
                    let b = grid[(i as i64 + step) as usize];
                    if b == 0 {
                        continue;
                    }
                    let (a, b) = (a as usize - 1, b as usize - 1);
                    counts[a * l + b] += 1;
                    counts[b * l + a] += 1;
                    pairs += 1;
                }
            }
        }
        if pairs == 0 {
            return Err(Error::NoValidPairs(offset));
        }
        let total = (2 * pairs) as f64;
        Ok(Self {
            levels: l,
            offset,
            p: counts.into_iter().map(|c| c as f64 / total).collect(),
        })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn offset(&self) -> [i32; 3] {
        self.offset
    }

    /// `p(i, j)` with 1-based grey levels.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[(i - 1) * self.levels + (j - 1)]
    }

    pub fn features(&self) -> FeatureMap {
        let l = self.levels;
        let mut mu = 0.0;
        for i in 0..l {
            let row: f64 = self.p[i * l..(i + 1) * l].iter().sum();
            mu += (i + 1) as f64 * row;
        }
        let mut var = 0.0;
        let (mut auto, mut contrast, mut energy, mut entropy) = (0.0, 0.0, 0.0, 0.0);
        let (mut homog, mut dissim, mut shade, mut prom, mut maxp) = (0.0, 0.0, 0.0, 0.0, 0.0f64);
        for i in 0..l {
            let gi = (i + 1) as f64;
            for j in 0..l {
                let p = self.p[i * l + j];
                if p == 0.0 {
                    continue;
                }
                let gj = (j + 1) as f64;
                let d = gi - gj;
                let s = gi + gj - 2.0 * mu;
                auto += gi * gj * p;
                contrast += d * d * p;
                energy += p * p;
                entropy -= p * p.log2();
                homog += p / (1.0 + d * d);
                dissim += d.abs() * p;
                shade += s * s * s * p;
                prom += s * s * s * s * p;
                maxp = maxp.max(p);
                var += (gi - mu) * (gi - mu) * p;
            }
        }
        let correlation = if var > 0.0 { (auto - mu * mu) / var } else { 1.0 };
        vec![
            ("Autocorrelation", auto),
            ("Contrast", contrast),
            ("Correlation", correlation),
            ("Energy", energy),
            ("Entropy", entropy),
            ("Homogeneity", homog),
            ("Dissimilarity", dissim),
            ("ClusterShade", shade),
            ("ClusterProminence", prom),
            ("MaxProbability", maxp),
        ]
    }
}

/// Co-occurrence features of `q` at `offset`.
pub fn gtsdm_features(q: &QuantizedRegion, offset: [i32; 3]) -> Result<FeatureMap> {
    Ok(CooccurrenceMatrix::build(q, offset)?.features())
}

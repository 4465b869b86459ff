//! Neighborhood grey-tone difference matrix.
//!
//! Neighborhood is the 3x3x3 cube minus the center, restricted to region
//! voxels. A voxel with no region neighbor does not contribute.

use super::quantize::QuantizedRegion;
use super::FeatureMap;

pub const NGTDM_FEATURES: [&str; 5] = ["Coarseness", "Contrast", "Busyness", "Complexity", "Strength"];

/// Denominator guard for coarseness and strength.
pub const NGTDM_EPS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodDifferenceTable {
    /// `s[i-1]`: summed |i - neighborhood mean| over voxels of level i.
    pub s: Vec<f64>,
    /// `n[i-1]`: contributing voxels at level i.
    pub n: Vec<usize>,
    /// Total contributing voxels.
    pub total: usize,
}

impl NeighborhoodDifferenceTable {
    pub fn build(q: &QuantizedRegion) -> Self {
        let l = q.levels();
        let [sx, sy, sz] = q.size();
        let grid = q.raw();
        let mut s = vec![0.0; l];
        let mut n = vec![0usize; l];
        for z in 0..sz {
            for y in 0..sy {
                for x in 0..sx {
                    let g = grid[x + sx * (y + sy * z)];
                    if g == 0 {
                        continue;
                    }
                    let (mut sum, mut cnt) = (0u64, 0u64);
                    for zz in z.saturating_sub(1)..(z + 2).min(sz) {
                        for yy in y.saturating_sub(1)..(y + 2).min(sy) {
                            let row = sx * (yy + sy * zz);
                            for xx in x.saturating_sub(1)..(x + 2).min(sx) {
                                if xx == x && yy == y && zz == z {
                                    continue;
                                }
                                let h = grid[row + xx];
                                if h > 0 {
                                    sum += h as u64;
                                    cnt += 1;
                                }
                            }
                        }
                    }
                    if cnt == 0 {
                        continue;
                    }
                    let mean = sum as f64 / cnt as f64;
                    s[g as usize - 1] += (g as f64 - mean).abs();
                    n[g as usize - 1] += 1;
                }
            }
        }
        let total = n.iter().sum();
        Self { s, n, total }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let t = self.total.max(1) as f64;
        self.n.iter().map(|&c| c as f64 / t).collect()
    }

    pub fn features(&self) -> FeatureMap {
        let p = self.probabilities();
        let occupied: Vec<usize> = (0..p.len()).filter(|&i| p[i] > 0.0).collect();
        let ng = occupied.len();
        let nv = self.total as f64;
        let sum_s: f64 = self.s.iter().sum();
        let sum_ps: f64 = occupied.iter().map(|&i| p[i] * self.s[i]).sum();
        let coarseness = 1.0 / (NGTDM_EPS + sum_ps);

        let mut pair_sq = 0.0; // sum_ij p_i p_j (i-j)^2
        let mut pair_strength = 0.0; // sum_ij (p_i + p_j)(i-j)^2
        let mut busy_den = 0.0; // sum_ij |i p_i - j p_j|
        let mut complexity = 0.0;
        for &i in &occupied {
            let gi = (i + 1) as f64;
            for &j in &occupied {
                let gj = (j + 1) as f64;
                let d2 = (gi - gj) * (gi - gj);
                pair_sq += p[i] * p[j] * d2;
                pair_strength += (p[i] + p[j]) * d2;
                busy_den += (gi * p[i] - gj * p[j]).abs();
                complexity += (gi - gj).abs() * (p[i] * self.s[i] + p[j] * self.s[j]) / (p[i] + p[j]);
            }
        }
        let contrast = if ng > 1 && nv > 0.0 {
            pair_sq / (ng * (ng - 1)) as f64 * sum_s / nv
        } else {
            0.0
        };
        let busyness = if busy_den > 0.0 { sum_ps / busy_den } else { 0.0 };
        let complexity = if nv > 0.0 { complexity / nv } else { 0.0 };
        let strength = if sum_s > 0.0 { pair_strength / (NGTDM_EPS + sum_s) } else { 0.0 };
        vec![
            ("Coarseness", coarseness),
            ("Contrast", contrast),
            ("Busyness", busyness),
            ("Complexity", complexity),
            ("Strength", strength),
        ]
    }
}

pub fn ngtdm_features(q: &QuantizedRegion) -> FeatureMap {
    NeighborhoodDifferenceTable::build(q).features()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::texture::get;

    #[test]
    fn constant_region() {
        let q = QuantizedRegion::from_levels([3, 3, 3], vec![1; 27], 8).unwrap();
        let f = ngtdm_features(&q);
        assert_eq!(get(&f, "Contrast"), 0.0);
        assert_eq!(get(&f, "Strength"), 0.0);
        assert_eq!(get(&f, "Busyness"), 0.0);
        assert_eq!(get(&f, "Coarseness"), 1.0 / NGTDM_EPS);
    }

    #[test]
    fn parity_checkerboard_table() {
        // Level 1 where x+y+z is even, 2 where odd. Each voxel of the 2x2x2
        // cube sees the other 7: face and corner neighbors (4) have the other
        // level, edge neighbors (3) share its level.
        let grid: Vec<u16> = (0..8).map(|i| 1 + ((i & 1) + ((i >> 1) & 1) + ((i >> 2) & 1)) as u16 % 2).collect();
        let q = QuantizedRegion::from_levels([2, 2, 2], grid, 2).unwrap();
        let t = NeighborhoodDifferenceTable::build(&q);
        assert_eq!(t.n, vec![4, 4]);
        // level 1 voxel: mean = (3*1 + 4*2)/7 = 11/7, |1 - 11/7| = 4/7
        // level 2 voxel: mean = (3*2 + 4*1)/7 = 10/7, |2 - 10/7| = 4/7
        assert!((t.s[0] - 16.0 / 7.0).abs() < 1e-14);
        assert!((t.s[1] - 16.0 / 7.0).abs() < 1e-14);
        assert_eq!(t.probabilities(), vec![0.5, 0.5]);
    }

    #[test]
    fn isolated_voxel_is_skipped() {
        let mut grid = vec![0u16; 27];
        grid[0] = 2;
        grid[26] = 1;
        let q = QuantizedRegion::from_levels([3, 3, 3], grid, 2).unwrap();
        let t = NeighborhoodDifferenceTable::build(&q);
        assert_eq!(t.total, 0);
        let f = t.features();
        assert!(f.iter().all(|(_, v)| v.is_finite()));
    }
}

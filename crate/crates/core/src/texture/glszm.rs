//! Grey-level size-zone matrix over 26-connected constant-level zones.

use std::collections::BTreeMap;

use super::quantize::QuantizedRegion;
use super::FeatureMap;

pub const GLZSM_FEATURES: [&str; 11] = [
    "SmallZoneEmphasis",
    "LargeZoneEmphasis",
    "LowGrayLevelZoneEmphasis",
    "HighGrayLevelZoneEmphasis",
    "SmallZoneLowGrayEmphasis",
    "SmallZoneHighGrayEmphasis",
    "LargeZoneLowGrayEmphasis",
    "LargeZoneHighGrayEmphasis",
    "GrayLevelNonUniformity",
    "ZoneSizeNonUniformity",
    "ZonePercentage",
];

/// Zone counts keyed by `(grey level, zone size)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZoneSizeMatrix {
    pub counts: BTreeMap<(u16, usize), usize>,
    pub max_zone_size: usize,
    pub voxels: usize,
}

struct DisjointSet {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut a: u32) -> u32 {
        while self.parent[a as usize] != a {
            let p = self.parent[a as usize];
            self.parent[a as usize] = self.parent[p as usize];
            a = p;
        }
        a
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }
}

impl ZoneSizeMatrix {
    pub fn build(q: &QuantizedRegion) -> Self {
        let [sx, sy, sz] = q.size();
        let grid = q.raw();
        let mut ds = DisjointSet::new(grid.len());
        // Joining each voxel with its 13 forward neighbors covers all 26.
        let dirs = super::directions::canonical_directions();
        for z in 0..sz {
            for y in 0..sy {
                for x in 0..sx {
                    let i = x + sx * (y + sy * z);
                    let g = grid[i];
                    if g == 0 {
                        continue;
                    }
                    for [dx, dy, dz] in dirs {
                        let (xx, yy, zz) = (x as i64 + dx as i64, y as i64 + dy as i64, z as i64 + dz as i64);
                        if q.level_at(xx, yy, zz) == g {
                            let j = xx as usize + sx * (yy as usize + sy * zz as usize);
                            ds.union(i as u32, j as u32);
                        }
                    }
                }
            }
        }
        let mut counts = BTreeMap::new();
        let mut max_zone_size = 0;
        for (i, &g) in grid.iter().enumerate() {
            if g > 0 && ds.find(i as u32) == i as u32 {
                let s = ds.size[i] as usize;
                max_zone_size = max_zone_size.max(s);
                *counts.entry((g, s)).or_insert(0) += 1;
            }
        }
        Self {
            counts,
            max_zone_size,
            voxels: q.count(),
        }
    }

    pub fn zones(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn features(&self) -> FeatureMap {
        let z = self.zones() as f64;
        let mut acc = [0.0; 8];
        let mut by_level: BTreeMap<u16, f64> = BTreeMap::new();
        let mut by_size: BTreeMap<usize, f64> = BTreeMap::new();
        for (&(g, s), &c) in &self.counts {
            let (c, g2, s2) = (c as f64, (g as f64).powi(2), (s as f64).powi(2));
            acc[0] += c / s2;
            acc[1] += c * s2;
            acc[2] += c / g2;
            acc[3] += c * g2;
            acc[4] += c / (g2 * s2);
            acc[5] += c * g2 / s2;
            acc[6] += c * s2 / g2;
            acc[7] += c * g2 * s2;
            *by_level.entry(g).or_insert(0.0) += c;
            *by_size.entry(s).or_insert(0.0) += c;
        }
        let gln = by_level.values().map(|v| v * v).sum::<f64>() / z;
        let zsn = by_size.values().map(|v| v * v).sum::<f64>() / z;
        let mut out: FeatureMap = GLZSM_FEATURES[..8].iter().zip(acc).map(|(&n, v)| (n, v / z)).collect();
        out.push(("GrayLevelNonUniformity", gln));
        out.push(("ZoneSizeNonUniformity", zsn));
        out.push(("ZonePercentage", z / self.voxels as f64));
        out
    }
}

pub fn glzsm_features(q: &QuantizedRegion) -> FeatureMap {
    ZoneSizeMatrix::build(q).features()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::texture::get;

    #[test]
    fn constant_cube_is_one_zone() {
        for n in [2usize, 3, 5] {
            let q = QuantizedRegion::from_levels([n, n, n], vec![1; n * n * n], 4).unwrap();
            let m = ZoneSizeMatrix::build(&q);
            assert_eq!(m.zones(), 1);
            let f = m.features();
            let v = (n * n * n) as f64;
            assert_eq!(get(&f, "LargeZoneLowGrayEmphasis"), v * v);
            assert_eq!(get(&f, "LowGrayLevelZoneEmphasis"), 1.0);
        }
    }

    #[test]
    fn eight_phase_lattice_all_singletons() {
        let (sx, sy, sz) = (4, 5, 3);
        let grid: Vec<u16> = (0..sx * sy * sz)
            .map(|i| {
                let (x, y, z) = (i % sx, (i / sx) % sy, i / (sx * sy));
                1 + (x % 2 + 2 * (y % 2) + 4 * (z % 2)) as u16
            })
            .collect();
        let q = QuantizedRegion::from_levels([sx, sy, sz], grid, 8).unwrap();
        let m = ZoneSizeMatrix::build(&q);
        assert_eq!(m.zones(), q.count());
        assert_eq!(m.max_zone_size, 1);
    }

    #[test]
    fn diagonal_touch_joins_zones() {
        let mut grid = vec![0u16; 8];
        grid[0] = 1; // (0,0,0)
        grid[7] = 1; // (1,1,1)
        let q = QuantizedRegion::from_levels([2, 2, 2], grid, 2).unwrap();
        let m = ZoneSizeMatrix::build(&q);
        assert_eq!(m.counts.get(&(1, 2)), Some(&1));
    }
}

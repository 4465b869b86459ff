#![allow(dead_code)]
//! Direct-definition texture oracles. Slow and simple on purpose: every
//! voxel pair, neighbourhood and zone is enumerated from scratch.

use std::collections::{BTreeMap, HashMap};

/// A small labelled box, 0 = outside the region.
pub struct Box3 {
    pub size: [usize; 3],
    pub v: Vec<u16>,
    pub levels: usize,
}

impl Box3 {
    pub fn at(&self, x: i64, y: i64, z: i64) -> u16 {
        let [sx, sy, sz] = self.size.map(|s| s as i64);
        if x < 0 || y < 0 || z < 0 || x >= sx || y >= sy || z >= sz {
            return 0;
        }
        self.v[(x + sx * (y + sy * z)) as usize]
    }

    fn coords(&self) -> Vec<(i64, i64, i64)> {
        let [sx, sy, sz] = self.size.map(|s| s as i64);
        let mut out = Vec::new();
        for z in 0..sz {
            for y in 0..sy {
                for x in 0..sx {
                    out.push((x, y, z));
                }
            }
        }
        out
    }
}

pub fn glcm_oracle(b: &Box3, off: [i32; 3]) -> Option<BTreeMap<&'static str, f64>> {
    let mut counts: HashMap<(u16, u16), f64> = HashMap::new();
    let mut total = 0.0;
    for (x, y, z) in b.coords() {
        let a = b.at(x, y, z);
        let c = b.at(x + off[0] as i64, y + off[1] as i64, z + off[2] as i64);
        if a == 0 || c == 0 {
            continue;
        }
        *counts.entry((a, c)).or_default() += 1.0;
        *counts.entry((c, a)).or_default() += 1.0;
        total += 2.0;
    }
    if total == 0.0 {
        return None;
    }
    let l = b.levels as u16;
    let p = |i: u16, j: u16| counts.get(&(i, j)).copied().unwrap_or(0.0) / total;
    let px: Vec<f64> = (1..=l).map(|i| (1..=l).map(|j| p(i, j)).sum()).collect();
    let py: Vec<f64> = (1..=l).map(|j| (1..=l).map(|i| p(i, j)).sum()).collect();
    let mux: f64 = (1..=l).map(|i| i as f64 * px[i as usize - 1]).sum();
    let muy: f64 = (1..=l).map(|j| j as f64 * py[j as usize - 1]).sum();
    let sx = (1..=l).map(|i| (i as f64 - mux).powi(2) * px[i as usize - 1]).sum::<f64>().sqrt();
    let sy = (1..=l).map(|j| (j as f64 - muy).powi(2) * py[j as usize - 1]).sum::<f64>().sqrt();
    let mut f = BTreeMap::new();
    let mut sum = |name: &'static str, g: &dyn Fn(f64, f64, f64) -> f64| {
        let mut s = 0.0;
        for i in 1..=l {
            for j in 1..=l {
                let v = p(i, j);
                if v > 0.0 {
                    s += g(i as f64, j as f64, v);
                }
            }
        }
        f.insert(name, s);
    };
    sum("Autocorrelation", &|i, j, v| i * j * v);
    sum("Contrast", &|i, j, v| (i - j).powi(2) * v);
    sum("Correlation", &|i, j, v| (i - mux) * (j - muy) * v);
    sum("Energy", &|_, _, v| v * v);
    sum("Entropy", &|_, _, v| -v * v.log2());
    sum("Homogeneity", &|i, j, v| v / (1.0 + (i - j).powi(2)));
    sum("Dissimilarity", &|i, j, v| (i - j).abs() * v);
    sum("ClusterShade", &|i, j, v| (i + j - mux - muy).powi(3) * v);
    sum("ClusterProminence", &|i, j, v| (i + j - mux - muy).powi(4) * v);
    let maxp = (1..=l).flat_map(|i| (1..=l).map(move |j| (i, j))).map(|(i, j)| p(i, j)).fold(0.0, f64::max);
    f.insert("MaxProbability", maxp);
    let cov = f["Correlation"];
    f.insert("Correlation", if sx * sy > 0.0 { cov / (sx * sy) } else { 1.0 });
    Some(f)
}

pub fn ngtdm_oracle(b: &Box3, eps: f64) -> BTreeMap<&'static str, f64> {
    let l = b.levels;
    let mut s = vec![0.0; l + 1];
    let mut n = vec![0.0; l + 1];
    for (x, y, z) in b.coords() {
        let g = b.at(x, y, z);
        if g == 0 {
            continue;
        }
        let mut nb = Vec::new();
        for dz in -1..=1 {
            for dy in -1..=1 {
                for dx in -1..=1 {
                    if (dx, dy, dz) != (0, 0, 0) {
                        let h = b.at(x + dx, y + dy, z + dz);
                        if h > 0 {
                            nb.push(h as f64);
                        }
                    }
                }
            }
        }
        if nb.is_empty() {
            continue;
        }
        let mean = nb.iter().sum::<f64>() / nb.len() as f64;
        s[g as usize] += (g as f64 - mean).abs();
        n[g as usize] += 1.0;
    }
    let nv: f64 = n.iter().sum();
    let p: Vec<f64> = n.iter().map(|c| if nv > 0.0 { c / nv } else { 0.0 }).collect();
    let occ: Vec<usize> = (1..=l).filter(|&i| p[i] > 0.0).collect();
    let ng = occ.len() as f64;
    let ssum: f64 = s.iter().sum();
    let ps: f64 = occ.iter().map(|&i| p[i] * s[i]).sum();
    let mut f = BTreeMap::new();
    f.insert("Coarseness", 1.0 / (eps + ps));
    let (mut c, mut bd, mut cx, mut st) = (0.0, 0.0, 0.0, 0.0);
    for &i in &occ {
        for &j in &occ {
            let (fi, fj) = (i as f64, j as f64);
            c += p[i] * p[j] * (fi - fj).powi(2);
            bd += (fi * p[i] - fj * p[j]).abs();
            cx += (fi - fj).abs() * (p[i] * s[i] + p[j] * s[j]) / (p[i] + p[j]);
            st += (p[i] + p[j]) * (fi - fj).powi(2);
        }
    }
    f.insert("Contrast", if ng > 1.0 { c / (ng * (ng - 1.0)) * ssum / nv } else { 0.0 });
    f.insert("Busyness", if bd > 0.0 { ps / bd } else { 0.0 });
    f.insert("Complexity", if nv > 0.0 { cx / nv } else { 0.0 });
    f.insert("Strength", if ssum > 0.0 { st / (eps + ssum) } else { 0.0 });
    f
}

/// Zones by breadth-first flood fill: (level, size) per zone.
pub fn zones(b: &Box3) -> Vec<(u16, usize)> {
    let mut seen = vec![false; b.v.len()];
    let [sx, sy, _] = b.size.map(|s| s as i64);
    let idx = |x: i64, y: i64, z: i64| (x + sx * (y + sy * z)) as usize;
    let mut out = Vec::new();
    for (x, y, z) in b.coords() {
        let g = b.at(x, y, z);
        if g == 0 || seen[idx(x, y, z)] {
            continue;
        }
        seen[idx(x, y, z)] = true;
        let mut queue = std::collections::VecDeque::from([(x, y, z)]);
        let mut size = 0;
        while let Some((a, c, d)) = queue.pop_front() {
            size += 1;
            for dz in -1..=1 {
                for dy in -1..=1 {
                    for dx in -1..=1 {
                        let (u, v, w) = (a + dx, c + dy, d + dz);
                        if b.at(u, v, w) == g && !seen[idx(u, v, w)] {
                            seen[idx(u, v, w)] = true;
                            queue.push_back((u, v, w));
                        }
                    }
                }
            }
        }
        out.push((g, size));
    }
    out
}

pub fn glzsm_oracle(b: &Box3) -> BTreeMap<&'static str, f64> {
    let zs = zones(b);
    let z = zs.len() as f64;
    let avg = |g: &dyn Fn(f64, f64) -> f64| zs.iter().map(|&(l, s)| g(l as f64, s as f64)).sum::<f64>() / z;
    let mut f = BTreeMap::new();
    f.insert("SmallZoneEmphasis", avg(&|_, s| 1.0 / (s * s)));
    f.insert("LargeZoneEmphasis", avg(&|_, s| s * s));
    f.insert("LowGrayLevelZoneEmphasis", avg(&|g, _| 1.0 / (g * g)));
    f.insert("HighGrayLevelZoneEmphasis", avg(&|g, _| g * g));
    f.insert("SmallZoneLowGrayEmphasis", avg(&|g, s| 1.0 / (g * g * s * s)));
    f.insert("SmallZoneHighGrayEmphasis", avg(&|g, s| g * g / (s * s)));
    f.insert("LargeZoneLowGrayEmphasis", avg(&|g, s| s * s / (g * g)));
    f.insert("LargeZoneHighGrayEmphasis", avg(&|g, s| g * g * s * s));
    let mut by_g: HashMap<u16, f64> = HashMap::new();
    let mut by_s: HashMap<usize, f64> = HashMap::new();
    for &(g, s) in &zs {
        *by_g.entry(g).or_default() += 1.0;
        *by_s.entry(s).or_default() += 1.0;
    }
    f.insert("GrayLevelNonUniformity", by_g.values().map(|c| c * c).sum::<f64>() / z);
    f.insert("ZoneSizeNonUniformity", by_s.values().map(|c| c * c).sum::<f64>() / z);
    let voxels = b.v.iter().filter(|&&g| g > 0).count() as f64;
    f.insert("ZonePercentage", z / voxels);
    f
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

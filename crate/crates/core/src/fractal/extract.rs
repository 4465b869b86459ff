//! Texture features of fractal maps.
//!
//! For each map (`ptpsa`, `mBm`, `GmBm`) the GTSDM, NGTDM, GLZSM and HIST
//! families are computed on the whole tumor as `T1C_<map>_<family>_<feature>`
//! and on each sub-region as `T1C_<map>_<region>_<family>_<feature>`.

use super::{gmbm_map, mbm_map, ptpsa_map, FractalConfig, FractalKind, FractalMap};
use crate::error::Result;
use crate::io::volume::{RegionMask, VoxelGrid, EDEMA, ENHANCING, NECROSIS};
use crate::texture::extract::{texture_names, texture_row};
use crate::texture::{Region, RowFragment, TextureConfig};

#[derive(Debug, Clone)]
pub struct FractalExtraction {
    pub row: RowFragment,
    /// In [`FractalKind::ALL`] order.
    pub maps: Vec<FractalMap>,
}

fn regions() -> [(Region, Option<&'static str>); 4] {
    [
        (Region::WholeTumor, None),
        (Region::Label(EDEMA), Some("ED")),
        (Region::Label(ENHANCING), Some("ET")),
        (Region::Label(NECROSIS), Some("NEC")),
    ]
}

fn prefix(kind: FractalKind, tag: Option<&str>) -> String {
    match tag {
        None => format!("T1C_{}", kind.tag()),
        Some(t) => format!("T1C_{}_{t}", kind.tag()),
    }
}

pub fn fractal_feature_names(cfg: &TextureConfig) -> Vec<String> {
    let n_offsets = cfg.distances.len() * 13;
    FractalKind::ALL
        .iter()
        .flat_map(|&k| regions().into_iter().flat_map(move |(_, tag)| texture_names(&prefix(k, tag), n_offsets)))
        .collect()
}

pub fn compute_map(kind: FractalKind, grid: &VoxelGrid, cfg: &FractalConfig) -> Result<FractalMap> {
    match kind {
        FractalKind::Ptpsa => ptpsa_map(grid, cfg.window, &cfg.scales),
        FractalKind::Mbm => mbm_map(grid, cfg.window, &cfg.scales),
        FractalKind::Gmbm => gmbm_map(grid, cfg.window, &cfg.scales),
    }
}

pub fn extract_fractal(
    grid: &VoxelGrid,
    mask: &RegionMask,
    texture: &TextureConfig,
    fractal: &FractalConfig,
) -> Result<FractalExtraction> {
    mask.aligned_with(grid)?;
    let mut row = RowFragment::new();
    let mut maps = Vec::with_capacity(3);
    for kind in FractalKind::ALL {
        let map = compute_map(kind, grid, fractal)?;
        for (region, tag) in regions() {
            row.extend(texture_row(&map.values, mask, region, &prefix(kind, tag), texture)?);
        }
        maps.push(map);
    }
    Ok(FractalExtraction { row, maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::phantom::{simulate_phantom, PhantomKind};

    #[test]
    fn names_and_determinism() {
        let tex = TextureConfig {
            levels: 8,
            distances: vec![1],
        };
        let (g, m) = simulate_phantom(PhantomKind::Fbm, [16, 16, 16], 0.5, 1).unwrap();
        let a = extract_fractal(&g, &m, &tex, &FractalConfig::default()).unwrap();
        let names: Vec<&str> = a.row.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, fractal_feature_names(&tex));
        assert!(names.contains(&"T1C_mBm_GLZSM_LargeZoneLowGrayEmphasis"));
        assert!(names.contains(&"T1C_GmBm_ET_NGTDM_Busyness"));
        let b = extract_fractal(&g, &m, &tex, &FractalConfig::default()).unwrap();
        assert_eq!(a.row, b.row);
    }

    #[test]
    fn constant_phantom_gives_single_zone() {
        let tex = TextureConfig {
            levels: 8,
            distances: vec![1],
        };
        let (g, m) = simulate_phantom(PhantomKind::Constant, [16, 16, 16], 0.5, 0).unwrap();
        let out = extract_fractal(&g, &m, &tex, &FractalConfig::default()).unwrap();
        let get = |n: &str| out.row.iter().find(|(k, _)| k == n).unwrap().1.unwrap();
        let wt = m.labels().iter().filter(|&&l| (1..=3).contains(&l)).count() as f64;
        for map in ["ptpsa", "mBm", "GmBm"] {
            assert_eq!(get(&format!("T1C_{map}_GLZSM_ZonePercentage")), 1.0 / wt);
            assert_eq!(get(&format!("T1C_{map}_GLZSM_LargeZoneEmphasis")), wt * wt);
        }
    }
}

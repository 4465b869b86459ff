//! Assembling named feature rows from a volume and its mask.
//!
//! Conventional names are `T1C_<region>_<family>_<feature>[_d<k>]` with region
//! one of `ED`, `ET`, `NEC`, `WT` and family one of `GTSDM`, `NGTDM`, `GLZSM`,
//! `HIST`, `SHAPE`. `_d<k>` indexes the direction table (see
//! [`directions`](super::directions)); the unsuffixed GTSDM value is the mean
//! over the offsets that had voxel pairs.

use super::directions::offset_table;
use super::glcm::{gtsdm_features, GTSDM_FEATURES};
use super::glszm::{glzsm_features, GLZSM_FEATURES};
use super::histogram::{histogram_features, HISTOGRAM_FEATURES};
use super::ngtdm::{ngtdm_features, NGTDM_FEATURES};
use super::quantize::{quantize, Region};
use super::shape::{shape_features, SHAPE_FEATURES};
use crate::error::{Error, Result};
use crate::io::volume::{RegionMask, VoxelGrid};
use crate::io::StudyConfig;

/// Ordered `(name, value)` cells; `None` marks a missing value.
pub type RowFragment = Vec<(String, Option<f64>)>;

#[derive(Debug, Clone, PartialEq)]
pub struct TextureConfig {
    pub levels: usize,
    pub distances: Vec<usize>,
}

impl Default for TextureConfig {
    fn default() -> Self {
        Self {
            levels: 32,
            distances: vec![1, 2, 3],
        }
    }
}

impl From<&StudyConfig> for TextureConfig {
    fn from(c: &StudyConfig) -> Self {
        Self {
            levels: c.levels,
            distances: c.distances.clone(),
        }
    }
}

/// Names emitted by the texture families (no shape) under `prefix`.
pub(crate) fn texture_names(prefix: &str, n_offsets: usize) -> Vec<String> {
    let mut names = Vec::new();
    for f in GTSDM_FEATURES {
        names.push(format!("{prefix}_GTSDM_{f}"));
        for k in 1..=n_offsets {
            names.push(format!("{prefix}_GTSDM_{f}_d{k}"));
        }
    }
    names.extend(NGTDM_FEATURES.iter().map(|f| format!("{prefix}_NGTDM_{f}")));
    names.extend(GLZSM_FEATURES.iter().map(|f| format!("{prefix}_GLZSM_{f}")));
    names.extend(HISTOGRAM_FEATURES.iter().map(|f| format!("{prefix}_HIST_{f}")));
    names
}

/// Texture families of one region of `grid`. An empty region yields all-missing cells.
pub(crate) fn texture_row(grid: &VoxelGrid, mask: &RegionMask, region: Region, prefix: &str, cfg: &TextureConfig) -> Result<RowFragment> {
    let offsets = offset_table(&cfg.distances);
    let names = texture_names(prefix, offsets.len());
    let q = match quantize(grid, mask, region, cfg.levels) {
        Ok(q) => q,
        Err(Error::EmptyRegion(_)) => return Ok(names.into_iter().map(|n| (n, None)).collect()),
        Err(e) => return Err(e),
    };
    let per_offset: Vec<Option<super::FeatureMap>> = offsets
        .iter()
        .map(|&o| match gtsdm_features(&q, o) {
            Ok(f) => Ok(Some(f)),
            Err(Error::NoValidPairs(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let mut values: Vec<Option<f64>> = Vec::with_capacity(names.len());
    for (fi, _) in GTSDM_FEATURES.iter().enumerate() {
        let present: Vec<f64> = per_offset.iter().flatten().map(|m| m[fi].1).collect();
        values.push((!present.is_empty()).then(|| present.iter().sum::<f64>() / present.len() as f64));
        values.extend(per_offset.iter().map(|m| m.as_ref().map(|m| m[fi].1)));
    }
    values.extend(ngtdm_features(&q).into_iter().map(|(_, v)| Some(v)));
    values.extend(glzsm_features(&q).into_iter().map(|(_, v)| Some(v)));
    let hist = histogram_features(grid, mask, region, cfg.levels)?;
    values.extend(hist.as_pairs().into_iter().map(|(_, v)| Some(v)));
    debug_assert_eq!(values.len(), names.len());
    Ok(names.into_iter().zip(values).collect())
}

/// Every name `extract_conventional` emits, in order.
pub fn conventional_feature_names(cfg: &TextureConfig) -> Vec<String> {
    let n_offsets = cfg.distances.len() * 13;
    let mut names = Vec::new();
    for region in Region::STANDARD {
        let prefix = format!("T1C_{}", region.tag());
        names.extend(texture_names(&prefix, n_offsets));
        names.extend(SHAPE_FEATURES.iter().map(|f| format!("{prefix}_SHAPE_{f}")));
    }
    names
}

/// Conventional features of the four standard regions (edema, enhancing
/// tumor, necrosis, whole tumor). Missing regions give missing cells.
pub fn extract_conventional(grid: &VoxelGrid, mask: &RegionMask, cfg: &TextureConfig) -> Result<RowFragment> {
    mask.aligned_with(grid)?;
    let mut row = RowFragment::new();
    for region in Region::STANDARD {
        let prefix = format!("T1C_{}", region.tag());
        row.extend(texture_row(grid, mask, region, &prefix, cfg)?);
        match shape_features(mask, grid.spacing(), region, Region::Brain) {
            Ok(s) => row.extend(s.as_pairs().into_iter().map(|(n, v)| (format!("{prefix}_SHAPE_{n}"), v))),
            Err(Error::EmptyRegion(_)) => {
                row.extend(SHAPE_FEATURES.iter().map(|n| (format!("{prefix}_SHAPE_{n}"), None)))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(row)
}

fn definition(family: &str, feature: &str) -> &'static str {
    match (family, feature) {
        ("GTSDM", "Autocorrelation") => "sum_ij i*j*p(i,j) over the symmetric normalized co-occurrence matrix",
        ("GTSDM", "Contrast") => "sum_ij (i-j)^2 p(i,j)",
        ("GTSDM", "Correlation") => "(sum_ij i*j*p(i,j) - mu^2) / sigma^2; 1 when sigma = 0",
        ("GTSDM", "Energy") => "sum_ij p(i,j)^2",
        ("GTSDM", "Entropy") => "-sum_ij p(i,j) log2 p(i,j)",
        ("GTSDM", "Homogeneity") => "sum_ij p(i,j) / (1 + (i-j)^2)",
        ("GTSDM", "Dissimilarity") => "sum_ij |i-j| p(i,j)",
        ("GTSDM", "ClusterShade") => "sum_ij (i+j-2mu)^3 p(i,j)",
        ("GTSDM", "ClusterProminence") => "sum_ij (i+j-2mu)^4 p(i,j)",
        ("GTSDM", "MaxProbability") => "max_ij p(i,j)",
        ("NGTDM", "Coarseness") => "1 / (eps + sum_i p_i s_i), eps = 1e-6",
        ("NGTDM", "Contrast") => "[sum_ij p_i p_j (i-j)^2 / (Ng(Ng-1))] * sum_i s_i / Nv",
        ("NGTDM", "Busyness") => "sum_i p_i s_i / sum_ij |i p_i - j p_j|",
        ("NGTDM", "Complexity") => "sum_ij |i-j| (p_i s_i + p_j s_j) / (p_i + p_j) / Nv",
        ("NGTDM", "Strength") => "sum_ij (p_i + p_j)(i-j)^2 / (eps + sum_i s_i)",
        ("GLZSM", "SmallZoneEmphasis") => "(1/Z) sum_gs Z(g,s) / s^2",
        ("GLZSM", "LargeZoneEmphasis") => "(1/Z) sum_gs Z(g,s) s^2",
        ("GLZSM", "LowGrayLevelZoneEmphasis") => "(1/Z) sum_gs Z(g,s) / g^2",
        ("GLZSM", "HighGrayLevelZoneEmphasis") => "(1/Z) sum_gs Z(g,s) g^2",
        ("GLZSM", "SmallZoneLowGrayEmphasis") => "(1/Z) sum_gs Z(g,s) / (g^2 s^2)",
        ("GLZSM", "SmallZoneHighGrayEmphasis") => "(1/Z) sum_gs Z(g,s) g^2 / s^2",
        ("GLZSM", "LargeZoneLowGrayEmphasis") => "(1/Z) sum_gs Z(g,s) s^2 / g^2",
        ("GLZSM", "LargeZoneHighGrayEmphasis") => "(1/Z) sum_gs Z(g,s) g^2 s^2",
        ("GLZSM", "GrayLevelNonUniformity") => "(1/Z) sum_g (sum_s Z(g,s))^2",
        ("GLZSM", "ZoneSizeNonUniformity") => "(1/Z) sum_s (sum_g Z(g,s))^2",
        ("GLZSM", "ZonePercentage") => "Z / region voxel count",
        ("HIST", "Mean") => "mean intensity",
        ("HIST", "Variance") => "population variance of intensity",
        ("HIST", "Skewness") => "third standardized moment; 0 for constant regions",
        ("HIST", "Kurtosis") => "excess kurtosis; 0 for constant regions",
        ("HIST", "Energy") => "sum of squared bin probabilities (levels bins, min-max)",
        ("HIST", "Entropy") => "-sum p log2 p over histogram bins",
        ("SHAPE", "Volume") => "voxel count * voxel volume (mm^3)",
        ("SHAPE", "VolumeRatio") => "region voxels / brain (non-background) voxels",
        ("SHAPE", "MajorAxisLength") => "4 sqrt(largest eigenvalue of coordinate covariance), mm",
        ("SHAPE", "SecondAxisLength") => "4 sqrt(second eigenvalue), mm",
        ("SHAPE", "ThirdAxisLength") => "4 sqrt(smallest eigenvalue), mm",
        ("SHAPE", "Eccentricity") => "sqrt(1 - lambda2 / lambda1)",
        ("SHAPE", "Orientation1") => "angle between first principal axis and x axis (rad)",
        ("SHAPE", "Orientation2") => "angle between second principal axis and y axis (rad)",
        ("SHAPE", "Orientation3") => "angle between third principal axis and z axis (rad)",
        ("SHAPE", "Extent") => "region voxels / bounding-box voxels",
        ("SHAPE", f) if f.starts_with("BBoxMin") => "lowest voxel index of the region along the axis",
        ("SHAPE", f) if f.starts_with("BBoxMax") => "highest voxel index of the region along the axis",
        _ => "",
    }
}

/// One line per feature name: `name<TAB>definition`.
pub fn feature_dictionary<'a>(names: impl IntoIterator<Item = &'a str>) -> String {
    const FAMILIES: [&str; 5] = ["GTSDM", "NGTDM", "GLZSM", "HIST", "SHAPE"];
    let mut out = String::new();
    for name in names {
        let parts: Vec<&str> = name.split('_').collect();
        let fam_pos = parts.iter().position(|p| FAMILIES.contains(p));
        let text = match fam_pos {
            Some(i) if i + 1 < parts.len() => {
                let family = parts[i];
                let feature = parts[i + 1];
                let mut d = definition(family, feature).to_string();
                if let Some(k) = parts.get(i + 2).and_then(|s| s.strip_prefix('d')) {
                    d += &format!(" at direction-table offset {k}");
                } else if family == "GTSDM" {
                    d += ", averaged over the direction table";
                }
                let source = parts[1..i].join(" ");
                format!("{d}; source/region: {source}")
            }
            _ => "user-supplied feature".to_string(),
        };
        out += &format!("{name}\t{text}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::phantom::{simulate_phantom, PhantomKind};

    #[test]
    fn phantom_row_count_and_determinism() {
        let cfg = TextureConfig::default();
        let (g, m) = simulate_phantom(PhantomKind::Fbm, [24, 24, 24], 0.5, 3).unwrap();
        let row = extract_conventional(&g, &m, &cfg).unwrap();
        let names = conventional_feature_names(&cfg);
        // 4 regions x (10 GTSDM x 40 + 5 NGTDM + 11 GLZSM + 6 HIST + 16 SHAPE)
        assert_eq!(names.len(), 4 * (10 * 40 + 5 + 11 + 6 + 16));
        assert_eq!(row.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(), names);
        let missing: Vec<_> = row.iter().filter(|(_, v)| v.is_none()).map(|(n, _)| n.as_str()).collect();
        // the small necrotic core has no voxel pairs along the long diagonals at distance 3
        assert!(missing.iter().all(|n| n.starts_with("T1C_NEC_GTSDM_") && ["_d31", "_d33", "_d37", "_d39"].iter().any(|d| n.ends_with(d))), "{missing:?}");
        assert_eq!(extract_conventional(&g, &m, &cfg).unwrap(), row);
    }

    #[test]
    fn missing_necrosis_gives_missing_cells() {
        let cfg = TextureConfig {
            levels: 8,
            distances: vec![1],
        };
        let (g, m) = simulate_phantom(PhantomKind::Fbm, [16, 16, 16], 0.5, 4).unwrap();
        let labels: Vec<u8> = m.labels().iter().map(|&l| if l == 3 { 2 } else { l }).collect();
        let m = RegionMask::new(m.dims(), labels).unwrap();
        let row = extract_conventional(&g, &m, &cfg).unwrap();
        for (name, v) in &row {
            assert_eq!(name.starts_with("T1C_NEC_"), v.is_none(), "{name}");
        }
    }

    #[test]
    fn dictionary_covers_every_name() {
        let cfg = TextureConfig::default();
        let names = conventional_feature_names(&cfg);
        let dict = feature_dictionary(names.iter().map(String::as_str));
        assert_eq!(dict.lines().count(), names.len());
        assert!(dict.lines().all(|l| !l.split('\t').nth(1).unwrap().starts_with(';')));
    }
}

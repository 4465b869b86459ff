//! Fractal transform maps and the texture features computed on them.
//!
//! Three per-voxel maps share a window size and a scale list:
//! - PTPSA: local fractal dimension of the intensity surface of each axial
//!   slice, from triangular-prism surface areas.
//! - mBm: local Hölder exponent from the scaling of mean absolute increments
//!   inside a cubic window.
//! - GmBm: pointwise Hölder exponent from the scaling of the local
//!   oscillation (max - min) over cubes of growing radius.

pub mod extract;
pub mod fit;
pub mod gmbm;
pub mod mbm;
pub mod ptpsa;

pub use extract::{extract_fractal, fractal_feature_names, FractalExtraction};
pub use fit::ScalingFit;
pub use gmbm::gmbm_map;
pub use mbm::mbm_map;
pub use ptpsa::ptpsa_map;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::volume::VoxelGrid;
use crate::io::StudyConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FractalKind {
    Ptpsa,
    Mbm,
    Gmbm,
}

impl FractalKind {
    pub const ALL: [FractalKind; 3] = [FractalKind::Ptpsa, FractalKind::Mbm, FractalKind::Gmbm];

    /// Tag used in feature names and dump file names.
    pub fn tag(self) -> &'static str {
        match self {
            FractalKind::Ptpsa => "ptpsa",
            FractalKind::Mbm => "mBm",
            FractalKind::Gmbm => "GmBm",
        }
    }

    pub fn range(self) -> (f64, f64) {
        match self {
            FractalKind::Ptpsa => (2.0, 3.0),
            _ => (0.0, 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractalMap {
    pub kind: FractalKind,
    /// Same dims and spacing as the source grid.
    pub values: VoxelGrid,
    /// Voxels where the smooth convention (`H = 1`) was applied because a
    /// measure vanished.
    pub flagged: Vec<bool>,
}

impl FractalMap {
    pub fn mean(&self) -> f64 {
        let d = self.values.data();
        d.iter().sum::<f64>() / d.len() as f64
    }

    pub fn flagged_count(&self) -> usize {
        self.flagged.iter().filter(|&&f| f).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractalConfig {
    /// Odd edge length of the analysis window, in voxels.
    pub window: usize,
    pub scales: Vec<usize>,
}

impl Default for FractalConfig {
    fn default() -> Self {
        Self {
            window: 11,
            scales: vec![1, 2, 4],
        }
    }
}

impl From<&StudyConfig> for FractalConfig {
    fn from(c: &StudyConfig) -> Self {
        Self {
            window: c.window,
            scales: c.scales.clone(),
        }
    }
}

pub(crate) fn check_window(window: usize, scales: &[usize]) -> Result<()> {
    if window < 5 || window % 2 == 0 {
        return Err(Error::InvalidParameter(format!("window must be odd and >= 5, got {window}")));
    }
    if scales.len() < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 scales, got {}", scales.len())));
    }
    if scales[0] == 0 || scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("scales must be positive and strictly increasing".into()));
    }
    Ok(())
}

pub(crate) fn log_scales(scales: &[usize]) -> Vec<f64> {
    scales.iter().map(|&s| (s as f64).ln()).collect()
}

/// Start of the `w`-wide window around `c`, shifted to lie inside `0..n`.
#[inline]
pub(crate) fn window_start(c: usize, w: usize, n: usize) -> usize {
    (c.saturating_sub(w / 2)).min(n - w)
}

/// Evaluate `f(x, y, z)` for every voxel, parallel over slices.
pub(crate) fn per_voxel<F>(dims: [usize; 3], f: F) -> Vec<(f64, bool)>
where
    F: Fn(usize, usize, usize) -> (f64, bool) + Sync,
{
    let plane = dims[0] * dims[1];
    let mut out = vec![(0.0, false); plane * dims[2]];
    out.par_chunks_mut(plane.max(1)).enumerate().for_each(|(z, slice)| {
        for y in 0..dims[1] {
            for x in 0..dims[0] {
                slice[x + dims[0] * y] = f(x, y, z);
            }
        }
    });
    out
}

pub(crate) fn into_map(kind: FractalKind, grid: &VoxelGrid, cells: Vec<(f64, bool)>) -> Result<FractalMap> {
    let (values, flagged): (Vec<f64>, Vec<bool>) = cells.into_iter().unzip();
    Ok(FractalMap {
        kind,
        values: VoxelGrid::new(grid.dims(), grid.spacing(), values)?,
        flagged,
    })
}

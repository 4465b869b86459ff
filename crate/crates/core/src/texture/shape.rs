use nalgebra::{Matrix3, SymmetricEigen};

use super::quantize::Region;
use crate::error::{Error, Result};
use crate::io::volume::RegionMask;

pub const SHAPE_FEATURES: [&str; 16] = [
    "Volume",
    "VolumeRatio",
    "MajorAxisLength",
    "SecondAxisLength",
    "ThirdAxisLength",
    "Eccentricity",
    "Orientation1",
    "Orientation2",
    "Orientation3",
    "Extent",
    "BBoxMinX",
    "BBoxMinY",
    "BBoxMinZ",
    "BBoxMaxX",
    "BBoxMaxY",
    "BBoxMaxZ",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSummary {
    /// Voxel count times voxel volume, mm^3.
    pub volume: f64,
    /// Region voxels over brain voxels; `None` when the brain region is empty.
    pub volume_ratio: Option<f64>,
    /// `4 * sqrt(eigenvalue)` of the coordinate covariance (mm), descending.
    pub axis_lengths: [f64; 3],
    pub eccentricity: f64,
    /// Angle (radians) between principal axis k and coordinate axis k.
    pub orientation: [f64; 3],
    pub extent: f64,
    /// Inclusive voxel-index corners.
    pub bbox_min: [usize; 3],
    pub bbox_max: [usize; 3],
    /// Collinear or single-voxel region; eccentricity is 1 (collinear) or 0.
    pub degenerate: bool,
}

impl ShapeSummary {
    pub fn as_pairs(&self) -> Vec<(&'static str, Option<f64>)> {
        let mut v = vec![
            ("Volume", Some(self.volume)),
            ("VolumeRatio", self.volume_ratio),
            ("MajorAxisLength", Some(self.axis_lengths[0])),
            ("SecondAxisLength", Some(self.axis_lengths[1])),
            ("ThirdAxisLength", Some(self.axis_lengths[2])),
            ("Eccentricity", Some(self.eccentricity)),
            ("Orientation1", Some(self.orientation[0])),
            ("Orientation2", Some(self.orientation[1])),
            ("Orientation3", Some(self.orientation[2])),
            ("Extent", Some(self.extent)),
        ];
        for (name, c) in [("BBoxMinX", 0), ("BBoxMinY", 1), ("BBoxMinZ", 2)] {
            v.push((name, Some(self.bbox_min[c] as f64)));
        }
        for (name, c) in [("BBoxMaxX", 0), ("BBoxMaxY", 1), ("BBoxMaxZ", 2)] {
            v.push((name, Some(self.bbox_max[c] as f64)));
        }
        v
    }
}

pub fn shape_features(
    mask: &RegionMask,
    spacing: [f64; 3],
    region: impl Into<Region>,
    brain: impl Into<Region>,
) -> Result<ShapeSummary> {
    let (region, brain) = (region.into(), brain.into());
    let [nx, ny, _] = mask.dims();
    let labels = mask.labels();
    let mut count = 0usize;
    let mut brain_count = 0usize;
    let mut sum = [0.0; 3];
    let mut lo = [usize::MAX; 3];
    let mut hi = [0usize; 3];
    let mut coords = Vec::new();
    for (i, &l) in labels.iter().enumerate() {
        if brain.contains(l) {
            brain_count += 1;
        }
        if !region.contains(l) {
            continue;
        }
        let c = [i % nx, (i / nx) % ny, i / (nx * ny)];
        count += 1;
        for d in 0..3 {
            lo[d] = lo[d].min(c[d]);
            hi[d] = hi[d].max(c[d]);
            sum[d] += c[d] as f64 * spacing[d];
        }
        coords.push(c);
    }
    if count == 0 {
        return Err(Error::EmptyRegion(match region {
            Region::Label(l) => l,
            _ => 255,
        }));
    }
    let n = count as f64;
    let mean = sum.map(|s| s / n);
    let mut cov = Matrix3::<f64>::zeros();
    for c in &coords {
        let d: [f64; 3] = std::array::from_fn(|k| c[k] as f64 * spacing[k] - mean[k]);
        for a in 0..3 {
            for b in 0..3 {
                cov[(a, b)] += d[a] * d[b];
            }
        }
    }
    cov /= n;
    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let lambda = order.map(|k| eig.eigenvalues[k].max(0.0));
    let axis_lengths = lambda.map(|l| 4.0 * l.sqrt());
    let orientation: [f64; 3] = std::array::from_fn(|k| {
        let v = eig.eigenvectors.column(order[k]);
        v[k].abs().min(1.0).acos()
    });
    let scale = 1e-12 * lambda[0].max(1.0);
    let (eccentricity, degenerate) = if lambda[0] <= scale {
        (0.0, true)
    } else if lambda[1] <= scale {
        (1.0, true)
    } else {
        ((1.0 - lambda[1] / lambda[0]).max(0.0).sqrt(), false)
    };
    let bbox: usize = (0..3).map(|d| hi[d] - lo[d] + 1).product();
    Ok(ShapeSummary {
        volume: n * spacing.iter().product::<f64>(),
        volume_ratio: (brain_count > 0).then(|| n / brain_count as f64),
        axis_lengths,
        eccentricity,
        orientation,
        extent: n / bbox as f64,
        bbox_min: lo,
        bbox_max: hi,
        degenerate,
    })
}

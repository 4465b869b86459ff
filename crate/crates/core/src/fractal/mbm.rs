use super::fit::SlopeFit;
use super::{check_window, into_map, log_scales, per_voxel, window_start, FractalKind, FractalMap};
use crate::error::{Error, Result};
use crate::io::volume::VoxelGrid;

/// Inclusive-exclusive 3-D summed-area table with a zero border.
pub(crate) struct Prefix3 {
    dims: [usize; 3],
    data: Vec<f64>,
}

impl Prefix3 {
    pub fn new(values: &[f64], dims: [usize; 3]) -> Self {
        let [nx, ny, nz] = dims;
        let (px, py) = (nx + 1, ny + 1);
        let mut data = vec![0.0; px * py * (nz + 1)];
        for z in 0..nz {
            for y in 0..ny {
                let mut row = 0.0;
                for x in 0..nx {
                    row += values[x + nx * (y + ny * z)];
                    let i = (x + 1) + px * ((y + 1) + py * (z + 1));
                    data[i] = row + data[i - px] + data[i - px * py] - data[i - px - px * py];
                }
            }
        }
        Self { dims, data }
    }

    /// Sum over `lo <= v < hi` componentwise.
    pub fn sum(&self, lo: [usize; 3], hi: [usize; 3]) -> f64 {
        let (px, py) = (self.dims[0] + 1, self.dims[1] + 1);
        let at = |x: usize, y: usize, z: usize| self.data[x + px * (y + py * z)];
        at(hi[0], hi[1], hi[2]) - at(lo[0], hi[1], hi[2]) - at(hi[0], lo[1], hi[2]) - at(hi[0], hi[1], lo[2])
            + at(lo[0], lo[1], hi[2])
            + at(lo[0], hi[1], lo[2])
            + at(hi[0], lo[1], lo[2])
            - at(lo[0], lo[1], lo[2])
    }
}

/// Multi-resolution Brownian motion Hölder map.
///
/// For each voxel, the mean absolute increment `|I(v + s e_a) - I(v)|` over
/// all pairs inside the cubic window (shifted inward at borders) and all
/// axes long enough to hold the window is computed for each scale `s`; the
/// log-log slope against `s` is the local Hölder exponent, clamped to
/// `[0, 1]`. A vanishing mean increment gives `H = 1`, flagged.
pub fn mbm_map(grid: &VoxelGrid, window: usize, scales: &[usize]) -> Result<FractalMap> {
    check_window(window, scales)?;
    let dims = grid.dims();
    let smax = *scales.last().unwrap();
    let w = dims.map(|n| window.min(n));
    let axes: Vec<usize> = (0..3).filter(|&a| dims[a] >= window).collect();
    if axes.is_empty() {
        return Err(Error::InvalidParameter(format!("window {window} exceeds every axis of {dims:?}")));
    }
    if smax >= window {
        return Err(Error::InvalidParameter(format!("scale {smax} does not fit in window {window}")));
    }
    let data = grid.data();
    let strides = [1, dims[0], dims[0] * dims[1]];
    let mut means: Vec<Vec<f64>> = Vec::with_capacity(scales.len());
    for &s in scales {
        let mut acc = vec![0.0; data.len()];
        let mut pairs = 0usize;
        for &a in &axes {
            let mut inc = vec![0.0; data.len()];
            for (i, v) in inc.iter_mut().enumerate() {
                let c = (i / strides[a]) % dims[a];
                if c + s < dims[a] {
                    *v = (data[i + s * strides[a]] - data[i]).abs();
                }
            }
            let table = Prefix3::new(&inc, dims);
            pairs += (w[a] - s) * (0..3).filter(|&b| b != a).map(|b| w[b]).product::<usize>();
            let sums = per_voxel(dims, |x, y, z| {
                let c = [x, y, z];
                let lo: [usize; 3] = std::array::from_fn(|d| window_start(c[d], w[d], dims[d]));
                let mut hi: [usize; 3] = std::array::from_fn(|d| lo[d] + w[d]);
                hi[a] -= s;
                (table.sum(lo, hi), false)
            });
            acc.iter_mut().zip(sums).for_each(|(t, (v, _))| *t += v);
        }
        acc.iter_mut().for_each(|v| *v /= pairs as f64);
        means.push(acc);
    }
    let fit = SlopeFit::new(&log_scales(scales));
    let cells = (0..data.len())
        .map(|i| {
            // relative threshold so round-off in the summed-area table reads as zero
            let scale_ref = means.iter().map(|m| m[i]).fold(0.0, f64::max);
            if scale_ref == 0.0 || means.iter().any(|m| m[i] <= 1e-12 * scale_ref.max(1e-300)) {
                return (1.0, true);
            }
            let logs: Vec<f64> = means.iter().map(|m| m[i].ln()).collect();
            (fit.slope(&logs).clamp(0.0, 1.0), false)
        })
        .collect();
    into_map(FractalKind::Mbm, grid, cells)
}

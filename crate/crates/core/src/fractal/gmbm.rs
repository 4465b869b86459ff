use super::fit::SlopeFit;
use super::{check_window, into_map, log_scales, FractalKind, FractalMap};
use crate::error::{Error, Result};
use crate::io::volume::VoxelGrid;

/// Running max (or min) over `[i - r, i + r]` along one axis, clipped at the
/// grid border.
fn running_extreme(data: &[f64], dims: [usize; 3], axis: usize, r: usize, max: bool) -> Vec<f64> {
    let strides = [1, dims[0], dims[0] * dims[1]];
    let n = dims[axis];
    let mut out = vec![0.0; data.len()];
    for (i, o) in out.iter_mut().enumerate() {
        let c = (i / strides[axis]) % n;
        let base = i - c * strides[axis];
        let (lo, hi) = (c.saturating_sub(r), (c + r).min(n - 1));
        let mut e = data[base + lo * strides[axis]];
        for k in lo + 1..=hi {
            let v = data[base + k * strides[axis]];
            e = if max { e.max(v) } else { e.min(v) };
        }
        *o = e;
    }
    out
}

/// Generalized multi-resolution Brownian motion (pointwise Hölder) map.
///
/// `osc_r(v)` is max minus min over the cube of radius `r` around `v`
/// (clipped at borders) for each radius `r` in `scales`, which must fit in
/// the window (`r <= (window - 1) / 2`). The log-log slope of `osc_r`
/// against `r` estimates `H(v)`, clamped to `[0, 1]`. A zero oscillation at
/// any radius gives `H = 1`, flagged.
pub fn gmbm_map(grid: &VoxelGrid, window: usize, scales: &[usize]) -> Result<FractalMap> {
    check_window(window, scales)?;
    let rmax = *scales.last().unwrap();
    if rmax > (window - 1) / 2 {
        return Err(Error::InvalidParameter(format!("radius {rmax} does not fit in window {window}")));
    }
    let dims = grid.dims();
    let oscillations: Vec<Vec<f64>> = scales
        .iter()
        .map(|&r| {
            let mut hi = grid.data().to_vec();
            let mut lo = grid.data().to_vec();
            for axis in 0..3 {
                hi = running_extreme(&hi, dims, axis, r, true);
                lo = running_extreme(&lo, dims, axis, r, false);
            }
            hi.iter().zip(&lo).map(|(a, b)| a - b).collect()
        })
        .collect();
    let fit = SlopeFit::new(&log_scales(scales));
    let cells = (0..grid.len())
        .map(|i| {
            if oscillations.iter().any(|o| o[i] <= 0.0) {
                return (1.0, true);
            }
            let logs: Vec<f64> = oscillations.iter().map(|o| o[i].ln()).collect();
            (fit.slope(&logs).clamp(0.0, 1.0), false)
        })
        .collect();
    into_map(FractalKind::Gmbm, grid, cells)
}

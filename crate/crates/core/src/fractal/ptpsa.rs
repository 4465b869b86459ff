use super::fit::SlopeFit;
use super::{check_window, into_map, log_scales, per_voxel, window_start, FractalKind, FractalMap};
use crate::error::{Error, Result};
use crate::io::volume::VoxelGrid;

/// Surface area over one `s x s` cell: four triangles joining consecutive
/// corners to the center, whose height is the corner mean.
fn prism_area(a: f64, b: f64, c: f64, d: f64, s: f64) -> f64 {
    let e = 0.25 * (a + b + c + d);
    let h = 0.5 * s;
    // corners (0,0,a) (s,0,b) (s,s,c) (0,s,d), center (h,h,e)
    let tri = |p: [f64; 3], q: [f64; 3]| {
        let u = [p[0] - h, p[1] - h, p[2] - e];
        let v = [q[0] - h, q[1] - h, q[2] - e];
        let cx = u[1] * v[2] - u[2] * v[1];
        let cy = u[2] * v[0] - u[0] * v[2];
        let cz = u[0] * v[1] - u[1] * v[0];
        0.5 * (cx * cx + cy * cy + cz * cz).sqrt()
    };
    let (p0, p1, p2, p3) = ([0.0, 0.0, a], [s, 0.0, b], [s, s, c], [0.0, s, d]);
    tri(p0, p1) + tri(p1, p2) + tri(p2, p3) + tri(p3, p0)
}

/// Piecewise triangular prism surface area dimension of each axial slice.
///
/// Inside the `window x window` neighbourhood (shifted inward at slice
/// borders), the surface is tiled by `s x s` cells for each scale `s`; the
/// area per unit of covered footprint `A(s)` is regressed on `s` in log-log
/// space and `FD = 2 - slope`, clamped to `[2, 3]`. Coordinates are in voxel
/// units.
pub fn ptpsa_map(grid: &VoxelGrid, window: usize, scales: &[usize]) -> Result<FractalMap> {
    check_window(window, scales)?;
    let [nx, ny, _] = grid.dims();
    if nx < window || ny < window {
        return Err(Error::InvalidParameter(format!("window {window} exceeds slice size {nx}x{ny}")));
    }
    if *scales.last().unwrap() > window - 1 {
        return Err(Error::InvalidParameter(format!("scale {} exceeds window span {}", scales.last().unwrap(), window - 1)));
    }
    let fit = SlopeFit::new(&log_scales(scales));
    let data = grid.data();
    // cell areas per scale, indexed by cell origin within the slice
    let cell_areas = |z: usize| -> Vec<Vec<f64>> {
        scales
            .iter()
            .map(|&s| {
                let mut out = vec![0.0; nx * ny];
                for y in 0..ny - s {
                    for x in 0..nx - s {
                        let at = |xx: usize, yy: usize| data[xx + nx * (yy + ny * z)];
                        out[x + nx * y] = prism_area(at(x, y), at(x + s, y), at(x + s, y + s), at(x, y + s), s as f64);
                    }
                }
                out
            })
            .collect()
    };
    let slices: Vec<Vec<Vec<f64>>> = (0..grid.dims()[2]).map(cell_areas).collect();
    let cells = per_voxel(grid.dims(), |x, y, z| {
        let x0 = window_start(x, window, nx);
        let y0 = window_start(y, window, ny);
        let logs: Vec<f64> = scales
            .iter()
            .zip(&slices[z])
            .map(|(&s, areas)| {
                let k = (window - 1) / s;
                let mut sum = 0.0;
                for j in 0..k {
                    for i in 0..k {
                        sum += areas[x0 + i * s + nx * (y0 + j * s)];
                    }
                }
                (sum / (k * k * s * s) as f64).ln()
            })
            .collect();
        ((2.0 - fit.slope(&logs)).clamp(2.0, 3.0), false)
    });
    into_map(FractalKind::Ptpsa, grid, cells)
}

//! Volumetric phantoms with a standard nested label layout.
//!
//! Labels are assigned by normalized ellipsoidal radius
//! `rho = sqrt(sum_d ((c_d - center_d) / half_d)^2)`: necrosis for
//! `rho <= 0.2`, enhancing tumor to 0.35, edema to 0.55, brain to 0.95 and
//! background beyond. Singleton axes do not contribute to `rho`.

use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::io::volume::{RegionMask, VoxelGrid, BACKGROUND, BRAIN, EDEMA, ENHANCING, NECROSIS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhantomKind {
    /// Every voxel 100.
    Constant,
    /// `(x mod 2) + 2 (y mod 2) + 4 (z mod 2)`: every voxel differs from all
    /// 26 neighbors.
    Checkerboard,
    /// `I(x, y, z) = x`.
    Ramp,
    /// Fractional Brownian field with Hurst exponent `H` by spectral synthesis.
    Fbm,
}

impl std::str::FromStr for PhantomKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(Self::Constant),
            "checkerboard" => Ok(Self::Checkerboard),
            "ramp" => Ok(Self::Ramp),
            "fbm" => Ok(Self::Fbm),
            other => Err(Error::InvalidParameter(format!("unknown phantom kind {other:?}"))),
        }
    }
}

pub fn standard_mask(dims: [usize; 3]) -> Result<RegionMask> {
    let center = dims.map(|n| (n as f64 - 1.0) / 2.0);
    let half = dims.map(|n| (n as f64 / 2.0).max(0.5));
    let mut labels = Vec::with_capacity(dims.iter().product());
    for z in 0..dims[2] {
        for y in 0..dims[1] {
            for x in 0..dims[0] {
                let c = [x, y, z];
                let rho = (0..3)
                    .filter(|&d| dims[d] > 1)
                    .map(|d| ((c[d] as f64 - center[d]) / half[d]).powi(2))
                    .sum::<f64>()
                    .sqrt();
                labels.push(match rho {
                    r if r <= 0.2 => NECROSIS,
                    r if r <= 0.35 => ENHANCING,
                    r if r <= 0.55 => EDEMA,
                    r if r <= 0.95 => BRAIN,
                    _ => BACKGROUND,
                });
            }
        }
    }
    RegionMask::new(dims, labels)
}

/// Phantom volume (unit spacing) with the standard mask.
pub fn simulate_phantom(kind: PhantomKind, dims: [usize; 3], hurst: f64, seed: u64) -> Result<(VoxelGrid, RegionMask)> {
    let spacing = [1.0; 3];
    let grid = match kind {
        PhantomKind::Constant => VoxelGrid::from_fn(dims, spacing, |_, _, _| 100.0)?,
        PhantomKind::Checkerboard => {
            VoxelGrid::from_fn(dims, spacing, |x, y, z| ((x % 2) + 2 * (y % 2) + 4 * (z % 2)) as f64)?
        }
        PhantomKind::Ramp => VoxelGrid::from_fn(dims, spacing, |x, _, _| x as f64)?,
        PhantomKind::Fbm => {
            if dims.iter().filter(|&&n| n > 1).any(|&n| n < 8) {
                return Err(Error::InvalidParameter("fbm phantoms need >= 8 voxels per non-singleton axis".into()));
            }
            let field = fbm_field(dims, hurst, seed)?;
            VoxelGrid::new(dims, spacing, field)?
        }
    };
    Ok((grid, standard_mask(dims)?))
}

/// Gaussian field with power spectrum `|f|^-(2H + d)` (`d` = non-singleton
/// axes), where `|f|^2` is the lattice symbol `sum sin^2(pi k / n) / pi^2`
/// so that short-lag increments follow the target scaling. Synthesized on a grid twice the size and cropped to limit
/// periodic wrap-around. Scaled so the RMS unit-lag increment along the first
/// long axis is 100, and offset by 1000.
pub fn fbm_field(dims: [usize; 3], hurst: f64, seed: u64) -> Result<Vec<f64>> {
    if !(0.0 < hurst && hurst < 1.0) {
        return Err(Error::InvalidParameter(format!("Hurst exponent must be in (0, 1), got {hurst}")));
    }
    let big = dims.map(|n| if n > 1 { 2 * n } else { 1 });
    let d = big.iter().filter(|&&n| n > 1).count() as f64;
    let total: usize = big.iter().product();
    let mut rng = crate::rng::stream(seed, 0);
    let exponent = -(2.0 * hurst + d) / 2.0;
    let mut spec = Vec::with_capacity(total);
    for z in 0..big[2] {
        for y in 0..big[1] {
            for x in 0..big[0] {
                let f2: f64 = [x, y, z]
                    .iter()
                    .zip(big)
                    .map(|(&k, n)| {
                        let s = (std::f64::consts::PI * k as f64 / n as f64).sin();
                        (s / std::f64::consts::PI).powi(2)
                    })
                    .sum();
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                let amp = if f2 == 0.0 { 0.0 } else { f2.sqrt().powf(exponent) };
                spec.push(Complex::new(re * amp, im * amp));
            }
        }
    }
    inverse_fft3(&mut spec, big);
    let mut out = Vec::with_capacity(dims.iter().product());
    for z in 0..dims[2] {
        for y in 0..dims[1] {
            for x in 0..dims[0] {
                out.push(spec[x + big[0] * (y + big[1] * z)].re);
            }
        }
    }
    // RMS unit increment along the first non-singleton axis.
    let axis = (0..3).find(|&a| dims[a] > 1).unwrap_or(0);
    let stride = [1, dims[0], dims[0] * dims[1]][axis];
    let (mut ss, mut n) = (0.0, 0usize);
    for (i, &v) in out.iter().enumerate() {
        let c = [i % dims[0], (i / dims[0]) % dims[1], i / (dims[0] * dims[1])];
        if c[axis] + 1 < dims[axis] {
            let dv = out[i + stride] - v;
            ss += dv * dv;
            n += 1;
        }
    }
    let rms = (ss / n.max(1) as f64).sqrt();
    let scale = if rms > 0.0 { 100.0 / rms } else { 1.0 };
    Ok(out.into_iter().map(|v| 1000.0 + v * scale).collect())
}

fn inverse_fft3(data: &mut [Complex<f64>], dims: [usize; 3]) {
    let mut planner = FftPlanner::<f64>::new();
    let strides = [1, dims[0], dims[0] * dims[1]];
    for axis in 0..3 {
        let n = dims[axis];
        if n < 2 {
            continue;
        }
        let fft = planner.plan_fft_inverse(n);
        let mut line = vec![Complex::new(0.0, 0.0); n];
        let others: Vec<usize> = (0..3).filter(|&a| a != axis).collect();
        for j in 0..dims[others[1]] {
            for i in 0..dims[others[0]] {
                let base = i * strides[others[0]] + j * strides[others[1]];
                for (k, v) in line.iter_mut().enumerate() {
                    *v = data[base + k * strides[axis]];
                }
                fft.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * strides[axis]] = *v;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Slope of log mean |increment| against log lag along x and y,
    /// computed directly on the field.
    fn increment_slope(field: &[f64], nx: usize, ny: usize) -> f64 {
        let lags = [1usize, 2, 4, 8];
        let pts: Vec<(f64, f64)> = lags
            .iter()
            .map(|&s| {
                let (mut sum, mut n) = (0.0, 0.0);
                for y in 0..ny {
                    for x in 0..nx {
                        if x + s < nx {
                            sum += (field[x + s + nx * y] - field[x + nx * y]).abs();
                            n += 1.0;
                        }
                        if y + s < ny {
                            sum += (field[x + nx * (y + s)] - field[x + nx * y]).abs();
                            n += 1.0;
                        }
                    }
                }
                ((s as f64).ln(), (sum / n).ln())
            })
            .collect();
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    }

    #[test]
    fn fbm_slice_has_requested_hurst() {
        for (h, seed, tol) in [(0.5, 1u64, 0.1), (0.5, 2, 0.1), (0.3, 3, 0.15), (0.7, 4, 0.15)] {
            let f = fbm_field([128, 128, 1], h, seed).unwrap();
            let slope = increment_slope(&f, 128, 128);
            assert!((slope - h).abs() < tol, "H={h} slope={slope}");
        }
    }

    #[test]
    fn mask_layout_nested() {
        let m = standard_mask([32, 32, 32]).unwrap();
        for l in [NECROSIS, ENHANCING, EDEMA, BRAIN, BACKGROUND] {
            assert!(m.count(l) > 0, "label {l}");
        }
        assert_eq!(m.labels()[m.labels().len() / 2 + 16 + 16 * 32], NECROSIS);
    }

    #[test]
    fn deterministic_under_seed() {
        let a = simulate_phantom(PhantomKind::Fbm, [16, 16, 16], 0.4, 9).unwrap();
        let b = simulate_phantom(PhantomKind::Fbm, [16, 16, 16], 0.4, 9).unwrap();
        assert_eq!(a, b);
        assert!(simulate_phantom(PhantomKind::Fbm, [4, 16, 16], 0.4, 9).is_err());
    }
}

//! Voxel grids, label masks and the two on-disk formats they travel in.
//!
//! Storage order is x fastest, then y, then z (`index = x + nx * (y + ny * z)`),
//! which is the NIfTI on-disk order. No orientation matrix is applied: voxel
//! `(i, j, k)` of the file is voxel `(i, j, k)` of the grid, and the qform/sform
//! fields are ignored on read and written as identity-free zeros.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mask label dictionary.
pub const BACKGROUND: u8 = 0;
pub const EDEMA: u8 = 1;
pub const ENHANCING: u8 = 2;
pub const NECROSIS: u8 = 3;
pub const BRAIN: u8 = 4;
pub const KNOWN_LABELS: [u8; 5] = [BACKGROUND, EDEMA, ENHANCING, NECROSIS, BRAIN];

#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    dims: [usize; 3],
    spacing: [f64; 3],
    data: Vec<f64>,
}

impl VoxelGrid {
    pub fn new(dims: [usize; 3], spacing: [f64; 3], data: Vec<f64>) -> Result<Self> {
        check_dims(dims)?;
        if spacing.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::Domain(format!("spacing must be positive, got {spacing:?}")));
        }
        let expected = dims.iter().product();
        if data.len() != expected {
            return Err(Error::PayloadSize {
                expected,
                actual: data.len(),
            });
        }
        if let Some(bad) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite intensity at voxel {bad}")));
        }
        Ok(Self { dims, spacing, data })
    }

    /// Grid filled from a function of voxel coordinates.
    pub fn from_fn(dims: [usize; 3], spacing: [f64; 3], mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(dims.iter().product());
        for z in 0..dims[2] {
            for y in 0..dims[1] {
                for x in 0..dims[0] {
                    data.push(f(x, y, z));
                }
            }
        }
        Self::new(dims, spacing, data)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.dims[0] * (y + self.dims[1] * z)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        self.data[self.index(x, y, z)]
    }

    /// Apply `f` voxel-wise, keeping geometry.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.dims, self.spacing, self.data.iter().map(|&v| f(v)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMask {
    dims: [usize; 3],
    labels: Vec<u8>,
}

impl RegionMask {
    pub fn new(dims: [usize; 3], labels: Vec<u8>) -> Result<Self> {
        check_dims(dims)?;
        let expected = dims.iter().product();
        if labels.len() != expected {
            return Err(Error::PayloadSize {
                expected,
                actual: labels.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|l| !KNOWN_LABELS.contains(l)) {
            return Err(Error::UnknownLabel(bad as i64));
        }
        Ok(Self { dims, labels })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn aligned_with(&self, grid: &VoxelGrid) -> Result<()> {
        if self.dims != grid.dims() {
            return Err(Error::Alignment {
                mask: self.dims,
                grid: grid.dims(),
            });
        }
        Ok(())
    }

    pub fn count(&self, label: u8) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }
}

fn check_dims(dims: [usize; 3]) -> Result<()> {
    if dims.contains(&0) {
        return Err(Error::Domain(format!("dims must be positive, got {dims:?}")));
    }
    Ok(())
}

/// Scalar payload type shared by both formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataType {
    Uint8,
    Int16,
    Float32,
    Float64,
}

impl DataType {
    fn width(self) -> usize {
        match self {
            DataType::Uint8 => 1,
            DataType::Int16 => 2,
            DataType::Float32 => 4,
            DataType::Float64 => 8,
        }
    }

    fn nifti_code(self) -> i16 {
        match self {
            DataType::Uint8 => 2,
            DataType::Int16 => 4,
            DataType::Float32 => 16,
            DataType::Float64 => 64,
        }
    }

    fn decode(self, bytes: &[u8]) -> Vec<f64> {
        let w = self.width();
        bytes
            .chunks_exact(w)
            .map(|c| match self {
                DataType::Uint8 => c[0] as f64,
                DataType::Int16 => i16::from_le_bytes([c[0], c[1]]) as f64,
                DataType::Float32 => f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64,
                DataType::Float64 => f64::from_le_bytes(c.try_into().unwrap()),
            })
            .collect()
    }

    fn encode(self, values: &[f64]) -> Vec<u8> {
        let mut out = Vec::with_capacity(values.len() * self.width());
        for &v in values {
            match self {
                DataType::Uint8 => out.push(v as u8),
                DataType::Int16 => out.extend_from_slice(&(v as i16).to_le_bytes()),
                DataType::Float32 => out.extend_from_slice(&(v as f32).to_le_bytes()),
                DataType::Float64 => out.extend_from_slice(&v.to_le_bytes()),
            }
        }
        out
    }
}

/// JSON sidecar of a RAW3D volume; the payload sits next to it as `<stem>.raw`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Raw3dHeader {
    pub dims: [usize; 3],
    pub spacing: [f64; 3],
    pub dtype: DataType,
}

struct RawVolume {
    dims: [usize; 3],
    spacing: [f64; 3],
    dtype: DataType,
    values: Vec<f64>,
}

enum Format {
    Nifti,
    Raw3d { sidecar: PathBuf, payload: PathBuf },
}

fn detect(path: &Path) -> Result<Format> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
    if name.ends_with(".nii") {
        return Ok(Format::Nifti);
    }
    if name.ends_with(".nii.gz") {
        return Err(Error::Format("compressed NIfTI (.nii.gz) is not supported".into()));
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") | Some("raw") => Ok(Format::Raw3d {
            sidecar: path.with_extension("json"),
            payload: path.with_extension("raw"),
        }),
        _ => Err(Error::Format(format!(
            "{}: expected a .nii file or a RAW3D .json/.raw pair",
            path.display()
        ))),
    }
}

fn read_raw(path: &Path) -> Result<RawVolume> {
    match detect(path)? {
        Format::Nifti => read_nifti(path),
        Format::Raw3d { sidecar, payload } => {
            let text = fs::read_to_string(&sidecar).map_err(|e| Error::io(&sidecar, e))?;
            let header: Raw3dHeader = serde_json::from_str(&text)
                .map_err(|e| Error::Format(format!("{}: bad RAW3D sidecar: {e}", sidecar.display())))?;
            check_dims(header.dims)?;
            let bytes = fs::read(&payload).map_err(|e| Error::io(&payload, e))?;
            let expected: usize = header.dims.iter().product();
            let w = header.dtype.width();
            if bytes.len() != expected * w {
                return Err(Error::PayloadSize {
                    expected,
                    actual: bytes.len() / w,
                });
            }
            Ok(RawVolume {
                dims: header.dims,
                spacing: header.spacing,
                dtype: header.dtype,
                values: header.dtype.decode(&bytes),
            })
        }
    }
}

const NIFTI_HEADER: usize = 348;
const NIFTI_OFFSET: usize = 352;

fn read_nifti(path: &Path) -> Result<RawVolume> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() < NIFTI_HEADER {
        return Err(Error::Format(format!("{}: truncated NIfTI header", path.display())));
    }
    let i16_at = |o: usize| i16::from_le_bytes([bytes[o], bytes[o + 1]]);
    let f32_at = |o: usize| f32::from_le_bytes([bytes[o], bytes[o + 1], bytes[o + 2], bytes[o + 3]]);
    let sizeof_hdr = i32::from_le_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]);
    if sizeof_hdr != NIFTI_HEADER as i32 {
        if i32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]) == NIFTI_HEADER as i32 {
            return Err(Error::Format("big-endian NIfTI is not supported".into()));
        }
        return Err(Error::Format(format!("{}: not a NIfTI-1 file", path.display())));
    }
    if &bytes[344..348] != b"n+1\0" {
        return Err(Error::Format(format!(
            "{}: only single-file NIfTI-1 (magic n+1) is supported",
            path.display()
        )));
    }
    let ndim = i16_at(40);
    if !(1..=7).contains(&ndim) {
        return Err(Error::Format(format!("invalid dim[0] = {ndim}")));
    }
    let mut dims = [1usize; 3];
    for d in 0..ndim as usize {
        let v = i16_at(42 + 2 * d);
        if v < 1 {
            return Err(Error::Format(format!("invalid dim[{}] = {v}", d + 1)));
        }
        if d < 3 {
            dims[d] = v as usize;
        } else if v != 1 {
            return Err(Error::Format("only 3D volumes are supported".into()));
        }
    }
    let dtype = match i16_at(70) {
        2 => DataType::Uint8,
        4 => DataType::Int16,
        16 => DataType::Float32,
        code => {
            return Err(Error::Format(format!(
                "NIfTI datatype code {code} is not supported (uint8, int16, float32 only)"
            )))
        }
    };
    let mut spacing = [1.0; 3];
    for (d, s) in spacing.iter_mut().enumerate() {
        let v = f32_at(80 + 4 * d) as f64;
        if d < ndim as usize {
            *s = v.abs();
        }
    }
    let offset = f32_at(108).max(NIFTI_OFFSET as f32) as usize;
    let expected: usize = dims.iter().product();
    let payload = bytes.get(offset..).unwrap_or(&[]);
    let w = dtype.width();
    if payload.len() < expected * w {
        return Err(Error::PayloadSize {
            expected,
            actual: payload.len() / w,
        });
    }
    let mut values = dtype.decode(&payload[..expected * w]);
    let (slope, inter) = (f32_at(112) as f64, f32_at(116) as f64);
    if slope != 0.0 && !(slope == 1.0 && inter == 0.0) {
        for v in &mut values {
            *v = *v * slope + inter;
        }
    }
    Ok(RawVolume {
        dims,
        spacing,
        dtype,
        values,
    })
}

fn write_nifti(path: &Path, dims: [usize; 3], spacing: [f64; 3], dtype: DataType, values: &[f64]) -> Result<()> {
    if dtype == DataType::Float64 {
        return Err(Error::Format("NIfTI output supports uint8, int16, float32 only".into()));
    }
    let mut h = vec![0u8; NIFTI_OFFSET];
    h[0..4].copy_from_slice(&(NIFTI_HEADER as i32).to_le_bytes());
    h[38] = b'r';
    h[40..42].copy_from_slice(&3i16.to_le_bytes());
    for d in 0..3 {
        let v = i16::try_from(dims[d]).map_err(|_| Error::Format("dimension exceeds NIfTI-1 range".into()))?;
        h[42 + 2 * d..44 + 2 * d].copy_from_slice(&v.to_le_bytes());
    }
    for d in 3..7 {
        h[42 + 2 * d..44 + 2 * d].copy_from_slice(&1i16.to_le_bytes());
    }
    h[70..72].copy_from_slice(&dtype.nifti_code().to_le_bytes());
    h[72..74].copy_from_slice(&((dtype.width() * 8) as i16).to_le_bytes());
    h[76..80].copy_from_slice(&1f32.to_le_bytes());
    for d in 0..3 {
        h[80 + 4 * d..84 + 4 * d].copy_from_slice(&(spacing[d] as f32).to_le_bytes());
    }
    h[108..112].copy_from_slice(&(NIFTI_OFFSET as f32).to_le_bytes());
    h[112..116].copy_from_slice(&1f32.to_le_bytes());
    h[123] = 2; // mm
    h[344..348].copy_from_slice(b"n+1\0");
    h.extend_from_slice(&dtype.encode(values));
    fs::write(path, h).map_err(|e| Error::io(path, e))
}

fn write_raw(path: &Path, dims: [usize; 3], spacing: [f64; 3], dtype: DataType, values: &[f64]) -> Result<()> {
    match detect(path)? {
        Format::Nifti => write_nifti(path, dims, spacing, dtype, values),
        Format::Raw3d { sidecar, payload } => {
            let header = Raw3dHeader { dims, spacing, dtype };
            let text = serde_json::to_string(&header).expect("sidecar serializes");
            fs::write(&sidecar, text + "\n").map_err(|e| Error::io(&sidecar, e))?;
            fs::write(&payload, dtype.encode(values)).map_err(|e| Error::io(&payload, e))
        }
    }
}

/// Read a volume from `.nii` or a RAW3D `.json`/`.raw` pair.
pub fn load_volume(path: impl AsRef<Path>) -> Result<VoxelGrid> {
    let raw = read_raw(path.as_ref())?;
    VoxelGrid::new(raw.dims, raw.spacing, raw.values)
}

/// Write a volume. RAW3D output is float64 and reproduces the grid exactly;
/// NIfTI output is float32.
pub fn write_volume(grid: &VoxelGrid, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let dtype = match detect(path)? {
        Format::Nifti => DataType::Float32,
        Format::Raw3d { .. } => DataType::Float64,
    };
    write_raw(path, grid.dims, grid.spacing, dtype, &grid.data)
}

/// Read a label mask and check it is aligned with `grid`.
pub fn load_mask(path: impl AsRef<Path>, grid: &VoxelGrid) -> Result<RegionMask> {
    let raw = read_raw(path.as_ref())?;
    if raw.dims != grid.dims() {
        return Err(Error::Alignment {
            mask: raw.dims,
            grid: grid.dims(),
        });
    }
    let mut labels = Vec::with_capacity(raw.values.len());
    for &v in &raw.values {
        if v.fract() != 0.0 {
            return Err(Error::Format(format!(
                "mask payload ({:?}) holds non-integer value {v}",
                raw.dtype
            )));
        }
        if !(0.0..=255.0).contains(&v) || !KNOWN_LABELS.contains(&(v as u8)) {
            return Err(Error::UnknownLabel(v as i64));
        }
        labels.push(v as u8);
    }
    RegionMask::new(raw.dims, labels)
}

/// Write a mask as uint8 (RAW3D or NIfTI).
pub fn write_mask(mask: &RegionMask, spacing: [f64; 3], path: impl AsRef<Path>) -> Result<()> {
    let values: Vec<f64> = mask.labels.iter().map(|&l| l as f64).collect();
    write_raw(path.as_ref(), mask.dims, spacing, DataType::Uint8, &values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    #[test]
    fn raw3d_constant_cube() {
        let dir = tmp();
        let header = Raw3dHeader {
            dims: [2, 2, 2],
            spacing: [1.0, 1.0, 1.0],
            dtype: DataType::Float32,
        };
        fs::write(dir.path().join("c.json"), serde_json::to_string(&header).unwrap()).unwrap();
        fs::write(dir.path().join("c.raw"), DataType::Float32.encode(&[7.0; 8])).unwrap();
        let g = load_volume(dir.path().join("c.json")).unwrap();
        assert_eq!(g.len(), 8);
        assert!(g.data().iter().all(|&v| v == 7.0));
    }

    #[test]
    fn payload_shorter_than_header() {
        let dir = tmp();
        let header = Raw3dHeader {
            dims: [4, 4, 4],
            spacing: [1.0; 3],
            dtype: DataType::Float32,
        };
        fs::write(dir.path().join("s.json"), serde_json::to_string(&header).unwrap()).unwrap();
        fs::write(dir.path().join("s.raw"), DataType::Float32.encode(&[0.0; 60])).unwrap();
        match load_volume(dir.path().join("s.raw")) {
            Err(Error::PayloadSize { expected: 64, actual: 60 }) => {}
            other => panic!("expected payload error, got {other:?}"),
        }
    }

    #[test]
    fn nifti_round_trip_float32_values() {
        let dir = tmp();
        let g = VoxelGrid::from_fn([3, 4, 5], [1.0, 0.5, 2.0], |x, y, z| (x * 100 + y * 10 + z) as f64 - 17.25).unwrap();
        let p = dir.path().join("v.nii");
        write_volume(&g, &p).unwrap();
        assert_eq!(load_volume(&p).unwrap(), g);

        let m = RegionMask::new([3, 4, 5], (0..60).map(|i| (i % 4) as u8).collect()).unwrap();
        let mp = dir.path().join("m.nii");
        write_mask(&m, g.spacing(), &mp).unwrap();
        assert_eq!(load_mask(&mp, &g).unwrap(), m);
    }

    #[test]
    fn nifti_rejects_unsupported_datatype() {
        let dir = tmp();
        let g = VoxelGrid::new([1, 1, 2], [1.0; 3], vec![1.0, 2.0]).unwrap();
        let p = dir.path().join("v.nii");
        write_volume(&g, &p).unwrap();
        let mut bytes = fs::read(&p).unwrap();
        bytes[70..72].copy_from_slice(&8i16.to_le_bytes()); // int32
        fs::write(&p, bytes).unwrap();
        assert!(matches!(load_volume(&p), Err(Error::Format(_))));
    }

    #[test]
    fn mask_alignment_and_labels() {
        let dir = tmp();
        let grid = VoxelGrid::new([4, 4, 4], [1.0; 3], vec![0.0; 64]).unwrap();
        let small = RegionMask::new([3, 3, 3], vec![0; 27]).unwrap();
        let p = dir.path().join("small.json");
        write_mask(&small, [1.0; 3], &p).unwrap();
        assert!(matches!(load_mask(&p, &grid), Err(Error::Alignment { .. })));

        let labels: Vec<f64> = (0..64).map(|i| if i == 5 { 9.0 } else { (i % 4) as f64 }).collect();
        let bad = dir.path().join("bad.json");
        write_raw(&bad, [4, 4, 4], [1.0; 3], DataType::Uint8, &labels).unwrap();
        assert!(matches!(load_mask(&bad, &grid), Err(Error::UnknownLabel(9))));

        let good: Vec<f64> = (0..64).map(|i| (i % 4) as f64).collect();
        let ok = dir.path().join("ok.json");
        write_raw(&ok, [4, 4, 4], [1.0; 3], DataType::Uint8, &good).unwrap();
        assert_eq!(load_mask(&ok, &grid).unwrap().count(3), 16);
    }

    #[test]
    fn rejects_unknown_extension() {
        assert!(matches!(load_volume("foo.mha"), Err(Error::Format(_))));
        assert!(matches!(load_volume("foo.nii.gz"), Err(Error::Format(_))));
    }
}

use crate::error::{Error, Result};
use crate::io::volume::{RegionMask, VoxelGrid, BACKGROUND, BRAIN, EDEMA, ENHANCING, NECROSIS};

/// Which mask voxels make up a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// Voxels carrying exactly this label.
    Label(u8),
    /// Edema, enhancing tumor and necrosis together.
    WholeTumor,
    /// Every non-background voxel.
    Brain,
}

impl Region {
    pub const STANDARD: [Region; 4] = [
        Region::Label(EDEMA),
        Region::Label(ENHANCING),
        Region::Label(NECROSIS),
        Region::WholeTumor,
    ];

    #[inline]
    pub fn contains(self, label: u8) -> bool {
        match self {
            Region::Label(l) => label == l,
            Region::WholeTumor => matches!(label, EDEMA | ENHANCING | NECROSIS),
            Region::Brain => label != BACKGROUND,
        }
    }

    /// Short name used in feature names.
    pub fn tag(self) -> &'static str {
        match self {
            Region::Label(EDEMA) => "ED",
            Region::Label(ENHANCING) => "ET",
            Region::Label(NECROSIS) => "NEC",
            Region::Label(BRAIN) => "BRAINLBL",
            Region::Label(_) => "BG",
            Region::WholeTumor => "WT",
            Region::Brain => "BRAIN",
        }
    }

    fn code(self) -> u8 {
        match self {
            Region::Label(l) => l,
            _ => 255,
        }
    }
}

impl From<u8> for Region {
    fn from(label: u8) -> Self {
        Region::Label(label)
    }
}

/// Region voxels mapped to grey levels `1..=levels`, stored over the region's
/// bounding box with 0 marking voxels outside the region.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedRegion {
    levels: usize,
    origin: [usize; 3],
    size: [usize; 3],
    grid: Vec<u16>,
    count: usize,
}

impl QuantizedRegion {
    /// Build directly from a box of levels (0 = outside). Used for synthetic
    /// regions and tests.
    pub fn from_levels(size: [usize; 3], grid: Vec<u16>, levels: usize) -> Result<Self> {
        if levels < 2 || levels > u16::MAX as usize {
            return Err(Error::InvalidParameter(format!("levels must be in 2..=65535, got {levels}")));
        }
        if grid.len() != size.iter().product::<usize>() {
            return Err(Error::PayloadSize {
                expected: size.iter().product(),
                actual: grid.len(),
            });
        }
        if let Some(&bad) = grid.iter().find(|&&g| g as usize > levels) {
            return Err(Error::Domain(format!("level {bad} exceeds {levels}")));
        }
        let count = grid.iter().filter(|&&g| g > 0).count();
        if count == 0 {
            return Err(Error::EmptyRegion(0));
        }
        Ok(Self {
            levels,
            origin: [0; 3],
            size,
            grid,
            count,
        })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn size(&self) -> [usize; 3] {
        self.size
    }

    pub fn origin(&self) -> [usize; 3] {
        self.origin
    }

    /// Number of region voxels.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Box storage, x fastest; 0 is outside the region.
    pub fn raw(&self) -> &[u16] {
        &self.grid
    }

    #[inline]
    pub fn level_at(&self, x: i64, y: i64, z: i64) -> u16 {
        let [sx, sy, sz] = self.size.map(|s| s as i64);
        if x < 0 || y < 0 || z < 0 || x >= sx || y >= sy || z >= sz {
            return 0;
        }
        self.grid[(x + sx * (y + sy * z)) as usize]
    }

    /// `(box coordinate, level)` of every region voxel, x fastest.
    pub fn voxels(&self) -> impl Iterator<Item = ([usize; 3], u16)> + '_ {
        let [sx, sy, _] = self.size;
        self.grid
            .iter()
            .enumerate()
            .filter(|(_, &g)| g > 0)
            .map(move |(i, &g)| ([i % sx, (i / sx) % sy, i / (sx * sy)], g))
    }
}

/// Min-max quantization of the region's intensities into `levels` grey levels:
/// `level = min(L, 1 + floor(L * (I - min) / (max - min)))`; a constant region
/// is all level 1.
pub fn quantize(grid: &VoxelGrid, mask: &RegionMask, region: impl Into<Region>, levels: usize) -> Result<QuantizedRegion> {
    let region = region.into();
    mask.aligned_with(grid)?;
    if levels < 2 || levels > u16::MAX as usize {
        return Err(Error::InvalidParameter(format!("levels must be in 2..=65535, got {levels}")));
    }
    let [nx, ny, nz] = grid.dims();
    let mut lo = [usize::MAX; 3];
    let mut hi = [0usize; 3];
    let (mut vmin, mut vmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let labels = mask.labels();
    let data = grid.data();
    let mut count = 0;
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                let i = x + nx * (y + ny * z);
                if !region.contains(labels[i]) {
                    continue;
                }
                let v = data[i];
                if !v.is_finite() {
                    return Err(Error::Domain(format!("non-finite intensity at voxel ({x}, {y}, {z})")));
                }
                count += 1;
                vmin = vmin.min(v);
                vmax = vmax.max(v);
                for (d, c) in [x, y, z].into_iter().enumerate() {
                    lo[d] = lo[d].min(c);
                    hi[d] = hi[d].max(c);
                }
            }
        }
    }
    if count == 0 {
        return Err(Error::EmptyRegion(region.code()));
    }
    let size = [hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1];
    let mut out = vec![0u16; size.iter().product()];
    let range = vmax - vmin;
    for z in 0..size[2] {
        for y in 0..size[1] {
            for x in 0..size[0] {
                let i = (x + lo[0]) + nx * ((y + lo[1]) + ny * (z + lo[2]));
                if region.contains(labels[i]) {
                    out[x + size[0] * (y + size[1] * z)] = level_of(data[i], vmin, range, levels);
                }
            }
        }
    }
    Ok(QuantizedRegion {
        levels,
        origin: lo,
        size,
        grid: out,
        count,
    })
}

#[inline]
pub(crate) fn level_of(v: f64, min: f64, range: f64, levels: usize) -> u16 {
    if range <= 0.0 {
        return 1;
    }
    let l = 1 + (levels as f64 * (v - min) / range).floor() as usize;
    l.min(levels) as u16
}

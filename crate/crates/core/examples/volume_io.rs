//! Round trip a phantom through NIfTI-1 and RAW3D files, then through a
//! feature table and a study configuration.
//!
//! cargo run --release --example volume_io

use cgrep::io::{load_mask, load_volume, write_mask, write_volume, StudyConfig};
use cgrep::synth::{simulate_classification, simulate_phantom, PhantomKind};

fn main() -> cgrep::Result<()> {
    let dir = std::env::temp_dir().join("cgrep_volume_io");
    std::fs::create_dir_all(&dir).map_err(|e| cgrep::Error::Format(e.to_string()))?;
    let (grid, mask) = simulate_phantom(PhantomKind::Checkerboard, [8, 8, 8], 0.5, 0)?;

    for name in ["phantom.nii", "phantom.json"] {
        let path = dir.join(name);
        write_volume(&grid, &path)?;
        let back = load_volume(&path)?;
        println!("{name}: dims {:?}, identical values: {}", back.dims(), back.data() == grid.data());
    }
    write_mask(&mask, grid.spacing(), dir.join("mask.nii"))?;
    let m = load_mask(dir.join("mask.nii"), &grid)?;
    println!("mask labels 1/2/4: {} {} {}", m.count(1), m.count(2), m.count(4));

    let (table, _) = simulate_classification(6, 1, 1, 1.0, 0)?;
    let path = dir.join("features.csv");
    table.write_csv(&path)?;
    println!("{}", std::fs::read_to_string(&path).unwrap_or_default());

    let cfg = StudyConfig::parse("seed = 7\niterations = 200\nalpha_grid = 0,2,6\n")?;
    print!("{}", cfg.to_text());
    Ok(())
}

//! Conventional radiomics on a synthetic phantom: quantize the tumor
//! regions, then print a few co-occurrence, size-zone and shape features.
//!
//! cargo run --release --example texture_extraction

use cgrep::synth::{simulate_phantom, PhantomKind};
use cgrep::texture::{extract_conventional, TextureConfig};

fn main() -> cgrep::Result<()> {
    let (grid, mask) = simulate_phantom(PhantomKind::Fbm, [24, 24, 24], 0.4, 7)?;
    let cfg = TextureConfig {
        levels: 16,
        distances: vec![1, 2, 3],
    };
    let row = extract_conventional(&grid, &mask, &cfg)?;
    println!("{} features", row.len());
    for (name, value) in row.iter().filter(|(n, _)| {
        n.starts_with("T1C_ET_") && !n.contains("_d") && (n.contains("GTSDM") || n.contains("LargeZone") || n.contains("Volume"))
    }) {
        match value {
            Some(v) => println!("{name:<50} {v:.5}"),
            None => println!("{name:<50} (missing)"),
        }
    }
    Ok(())
}

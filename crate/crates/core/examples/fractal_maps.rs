//! Local fractal maps of fractional Brownian motion phantoms. The mBm map's
//! mean Hurst estimate tracks the generating H; PTPSA gives fractal
//! dimension, which is 2 on flat or linear surfaces.
//!
//! cargo run --release --example fractal_maps

use cgrep::fractal::{gmbm_map, mbm_map, ptpsa_map};
use cgrep::synth::{simulate_phantom, PhantomKind};

fn main() -> cgrep::Result<()> {
    println!("{:>5} {:>8} {:>8} {:>8}", "H", "mBm", "GmBm", "PTPSA");
    for h in [0.3, 0.5, 0.7] {
        let (g, _) = simulate_phantom(PhantomKind::Fbm, [32, 32, 32], h, 1)?;
        let m = mbm_map(&g, 11, &[1, 2, 4])?;
        let gm = gmbm_map(&g, 11, &[1, 2, 4])?;
        let p = ptpsa_map(&g, 11, &[1, 2, 4])?;
        println!("{h:>5.1} {:>8.3} {:>8.3} {:>8.3}", m.mean(), gm.mean(), p.mean());
    }
    let (ramp, _) = simulate_phantom(PhantomKind::Ramp, [24, 24, 4], 0.5, 0)?;
    println!("ramp PTPSA FD = {:.3}", ptpsa_map(&ramp, 11, &[1, 2, 4])?.mean());
    Ok(())
}

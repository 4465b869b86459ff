pub mod cli;
pub mod error;
pub mod fractal;
pub mod io;
pub mod learners;
pub mod plot;
pub mod prognosis;
pub mod resampling;
pub mod rng;
pub mod stats;
pub mod survival;
pub mod synth;
pub mod texture;

pub use error::{Error, Result};

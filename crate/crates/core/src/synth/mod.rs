//! Synthetic data with known ground truth.

pub mod classification;
pub mod phantom;
pub mod survival;

pub use classification::simulate_classification;
pub use phantom::{simulate_phantom, PhantomKind};
pub use survival::{simulate_dependent, SimDataset, SimSpec};

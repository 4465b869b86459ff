//! Loading and saving volumes, masks, feature tables and run configuration.

pub mod config;
pub mod table;
pub mod volume;

pub use config::StudyConfig;
pub use table::{load_feature_table, FeatureTable};
pub use volume::{load_mask, load_volume, write_mask, write_volume, RegionMask, VoxelGrid};

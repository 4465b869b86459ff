//! Conventional radiomics: co-occurrence, neighborhood-difference and
//! size-zone texture, intensity histogram and shape descriptors of masked
//! regions.

pub mod directions;
pub mod extract;
pub mod glcm;
pub mod glszm;
pub mod histogram;
pub mod ngtdm;
pub mod quantize;
pub mod shape;

pub use extract::{conventional_feature_names, extract_conventional, feature_dictionary, RowFragment, TextureConfig};
pub use glcm::{gtsdm_features, CooccurrenceMatrix};
pub use glszm::{glzsm_features, ZoneSizeMatrix};
pub use histogram::{histogram_features, HistogramSummary};
pub use ngtdm::{ngtdm_features, NeighborhoodDifferenceTable};
pub use quantize::{quantize, QuantizedRegion, Region};
pub use shape::{shape_features, ShapeSummary};

/// Named feature values in a fixed order.
pub type FeatureMap = Vec<(&'static str, f64)>;

/// Look up a feature by name; panics if absent.
pub fn get(map: &FeatureMap, name: &str) -> f64 {
    map.iter()
        .find(|(n, _)| *n == name)
        .map(|(_, v)| *v)
        .unwrap_or_else(|| panic!("no feature {name}"))
}

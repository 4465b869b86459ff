//! Classical tests and descriptive summaries used for feature filtering and
//! group comparison.

mod anova;
mod descriptive;
mod mann_whitney;
mod shapiro;
mod two_group;

pub use anova::{one_way_anova, AnovaResult};
pub use descriptive::{ks_uniform_distance, median, Descriptive};
pub use mann_whitney::{mann_whitney, MannWhitneyResult};
pub use shapiro::{shapiro_wilk, ShapiroWilk};
pub use two_group::{two_group_test, GroupTest, TwoGroupResult};

use statrs::distribution::{ContinuousCDF, Normal};

pub(crate) fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("valid standard normal")
}

pub(crate) fn normal_quantile(p: f64) -> f64 {
    std_normal().inverse_cdf(p)
}

/// Upper tail `P(Z > z)`.
pub(crate) fn normal_sf(z: f64) -> f64 {
    std_normal().sf(z)
}

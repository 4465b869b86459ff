//! Prognostic index, good/bad grouping and group comparisons.

mod compare;
mod distance;
mod grouping;

pub use compare::{cross_tab, group_comparison, CrossTab, GroupComparison, GroupStats};
pub use distance::{curve_distance, permutation_pvalue, PermutationTest};
pub use grouping::{compute_pi, split_by_pi, Group, PrognosticGrouping};

//! Class-balanced repeated cross-validation: per-feature F1 ranking, the
//! statistical second-step filter and model evaluation.

mod evaluate;
mod plan;
mod rank;
mod significance;

pub use evaluate::{evaluate_model, FoldMetrics, MetricDistribution, MetricSummary};
pub use plan::{IterationSample, ResamplingPlan};
pub use rank::{rank_features, threshold_select, RankingReport, ThresholdRule};
pub use significance::{significance_filter, significance_tests, SignificanceResult};

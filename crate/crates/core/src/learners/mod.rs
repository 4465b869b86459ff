//! Tree learners and binary classification metrics.

mod boost;
mod matrix;
mod metrics;
mod tree;

pub use boost::{boost_fit, BoostParams, BoostedEnsemble};
pub use matrix::FeatureMatrix;
pub use metrics::{auc, classification_metrics, confusion_metrics, f1_score, ClassificationMetrics, ConfusionMetrics};
pub use tree::{tree_fit, DecisionTree, Node, TreeParams};

use crate::error::{Error, Result};

pub(crate) fn check_labels(y: &[u8], n_rows: usize) -> Result<(usize, usize)> {
    if n_rows == 0 {
        return Err(Error::InvalidParameter("empty feature matrix".into()));
    }
    if y.len() != n_rows {
        return Err(Error::InvalidParameter(format!("{} labels for {n_rows} rows", y.len())));
    }
    if let Some(v) = y.iter().find(|&&v| v > 1) {
        return Err(Error::Domain(format!("label {v} is not 0 or 1")));
    }
    let ones = y.iter().filter(|&&v| v == 1).count();
    if ones == 0 || ones == y.len() {
        return Err(Error::SingleClass);
    }
    Ok((y.len() - ones, ones))
}

/// Lowest-impurity split found so far; replaced only by a strictly better
/// score, so scanning features and thresholds in ascending order keeps the
/// lowest feature index, then the lowest threshold, on ties.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub feature: usize,
    pub threshold: f64,
    pub score: f64,
}

pub(crate) fn offer(best: &mut Option<Candidate>, c: Candidate) {
    if best.is_none_or(|b| c.score < b.score - 1e-12) {
        *best = Some(c);
    }
}

/// Rows sorted by one feature, ties by row index.
pub(crate) fn sorted_by(x: &FeatureMatrix, feature: usize, rows: &[usize]) -> Vec<usize> {
    let col = x.column(feature);
    let mut s = rows.to_vec();
    s.sort_by(|&a, &b| col[a].total_cmp(&col[b]).then(a.cmp(&b)));
    s
}

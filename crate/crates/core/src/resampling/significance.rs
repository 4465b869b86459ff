use crate::error::{Error, Result};
use crate::io::FeatureTable;
use crate::stats::{two_group_test, GroupTest};

#[derive(Debug, Clone, PartialEq)]
pub struct SignificanceResult {
    pub name: String,
    pub test: GroupTest,
    pub p_value: f64,
    /// Normality could not be assessed because a class has fewer than 3
    /// values, so the rank test was used.
    pub small_group: bool,
}

/// Normality-gated two-class test per candidate (see
/// [`two_group_test`]). Missing values are dropped per feature.
pub fn significance_tests(table: &FeatureTable, labels: &[u8], candidates: &[String]) -> Result<Vec<SignificanceResult>> {
    if labels.len() != table.n_rows() {
        return Err(Error::InvalidParameter(format!("{} labels for {} rows", labels.len(), table.n_rows())));
    }
    candidates
        .iter()
        .map(|name| {
            let col = table
                .feature(name)
                .ok_or_else(|| Error::Table(format!("no feature column {name:?}")))?;
            let mut groups: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
            for (v, &l) in col.iter().zip(labels) {
                if let Some(v) = v {
                    groups[usize::from(l == 1)].push(*v);
                }
            }
            if groups.iter().any(|g| g.is_empty()) {
                return Err(Error::SingleClass);
            }
            let r = two_group_test(&groups[0], &groups[1])?;
            Ok(SignificanceResult {
                name: name.clone(),
                test: r.test,
                p_value: r.p_value,
                small_group: r.small_group,
            })
        })
        .collect()
}

/// The candidates of [`significance_tests`] with `p < p_threshold`, in
/// candidate order.
pub fn significance_filter(
    table: &FeatureTable,
    labels: &[u8],
    candidates: &[String],
    p_threshold: f64,
) -> Result<Vec<SignificanceResult>> {
    Ok(significance_tests(table, labels, candidates)?
        .into_iter()
        .filter(|r| r.p_value < p_threshold)
        .collect())
}

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use super::plan::ResamplingPlan;
use crate::error::{Error, Result};
use crate::io::FeatureTable;
use crate::learners::{f1_score, tree_fit, FeatureMatrix, TreeParams};

#[derive(Debug, Clone, PartialEq)]
pub struct RankingReport {
    /// Feature names sorted by mean F1, best first, ties by name.
    pub features: Vec<String>,
    pub mean_f1: Vec<f64>,
    /// Test-fold F1 per feature, iteration-major then fold.
    pub histories: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdRule {
    /// Score `>= threshold`.
    Inclusive,
    /// Score `> threshold`.
    Exclusive,
}

impl ThresholdRule {
    pub fn admits(self, score: f64, threshold: f64) -> bool {
        match self {
            Self::Inclusive => score >= threshold,
            Self::Exclusive => score > threshold,
        }
    }
}

/// For every iteration and fold, fits a single-feature decision tree per
/// feature on the training rows and scores F1 on the test rows. Features
/// with missing values are left out of the ranking.
pub fn rank_features(table: &FeatureTable, labels: &[u8], plan: &ResamplingPlan) -> Result<RankingReport> {
    if labels.len() != table.n_rows() {
        return Err(Error::InvalidParameter(format!("{} labels for {} rows", labels.len(), table.n_rows())));
    }
    let (minority, m) = plan.resolve(labels)?;
    let mut names = Vec::new();
    let mut columns = Vec::new();
    for name in table.feature_names() {
        match table.feature_complete(name) {
            Ok(c) if c.iter().all(|v| v.is_finite()) => {
                names.push(name.to_string());
                columns.push(c);
            }
            _ => log::warn!("feature {name} has missing values and is not ranked"),
        }
    }
    if names.is_empty() {
        return Err(Error::Table("no complete feature columns to rank".into()));
    }
    let params = TreeParams::default();

    // scores[iteration][feature][fold]
    let scores: Vec<Vec<Vec<f64>>> = (0..plan.iterations)
        .into_par_iter()
        .map(|it| {
            let sample = plan.sample_resolved(labels, minority, m, it);
            let mut per_feature = vec![Vec::with_capacity(plan.folds); columns.len()];
            for f in 0..plan.folds {
                let (train, test) = sample.split(f);
                let y_train: Vec<u8> = train.iter().map(|&r| labels[r]).collect();
                let y_test: Vec<u8> = test.iter().map(|&r| labels[r]).collect();
                for (j, col) in columns.iter().enumerate() {
                    let x = FeatureMatrix::from_columns(vec![train.iter().map(|&r| col[r]).collect()])?;
                    let tree = tree_fit(&x, &y_train, params)?;
                    let pred: Vec<u8> = test.iter().map(|&r| u8::from(tree.proba_row(&[col[r]]) >= 0.5)).collect();
                    per_feature[j].push(f1_score(&y_test, &pred));
                }
            }
            Ok(per_feature)
        })
        .collect::<Result<_>>()?;

    let histories: Vec<Vec<f64>> = (0..columns.len())
        .map(|j| scores.iter().flat_map(|it| it[j].iter().copied()).collect())
        .collect();
    let means: Vec<f64> = histories.iter().map(|h| h.iter().sum::<f64>() / h.len() as f64).collect();
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&a, &b| means[b].total_cmp(&means[a]).then_with(|| names[a].cmp(&names[b])));
    Ok(RankingReport {
        features: order.iter().map(|&k| names[k].clone()).collect(),
        mean_f1: order.iter().map(|&k| means[k]).collect(),
        histories: order.iter().map(|&k| histories[k].clone()).collect(),
    })
}

/// Feature names passing the threshold, best first.
pub fn threshold_select(report: &RankingReport, threshold: f64, rule: ThresholdRule) -> Vec<String> {
    report
        .features
        .iter()
        .zip(&report.mean_f1)
        .filter(|(_, &s)| rule.admits(s, threshold))
        .map(|(n, _)| n.clone())
        .collect()
}

impl RankingReport {
    /// `feature,mean_f1,selected_flag` in ranking order.
    pub fn write_csv_to<W: Write>(&self, w: W, threshold: f64, rule: ThresholdRule) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let err = |e: csv::Error| Error::Format(e.to_string());
        out.write_record(["feature", "mean_f1", "selected_flag"]).map_err(err)?;
        for (name, &s) in self.features.iter().zip(&self.mean_f1) {
            let flag = if rule.admits(s, threshold) { "1" } else { "0" };
            out.write_record([name.as_str(), &format!("{s}"), flag]).map_err(err)?;
        }
        out.flush().map_err(|e| Error::io("ranking.csv", e))
    }

    pub fn write_csv(&self, path: impl AsRef<Path>, threshold: f64, rule: ThresholdRule) -> Result<()> {
        let path = path.as_ref();
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv_to(std::io::BufWriter::new(f), threshold, rule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::simulate_classification;

    fn report(scores: &[f64]) -> RankingReport {
        RankingReport {
            features: (0..scores.len()).map(|i| format!("f{i}")).collect(),
            mean_f1: scores.to_vec(),
            histories: vec![vec![]; scores.len()],
        }
    }

    #[test]
    fn threshold_rules() {
        let r = report(&[0.74, 0.6, 0.59]);
        assert_eq!(threshold_select(&r, 0.6, ThresholdRule::Inclusive), ["f0", "f1"]);
        assert!(threshold_select(&r, 1.1, ThresholdRule::Inclusive).is_empty());
        let r = report(&[0.8, 0.7]);
        assert_eq!(threshold_select(&r, 0.7, ThresholdRule::Exclusive), ["f0"]);
        let mut buf = Vec::new();
        r.write_csv_to(&mut buf, 0.7, ThresholdRule::Exclusive).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "feature,mean_f1,selected_flag\nf0,0.8,1\nf1,0.7,0\n");
    }

    #[test]
    fn informative_feature_leads_and_is_reproducible() {
        let (table, y) = simulate_classification(40, 1, 10, 3.0, 2).unwrap();
        let plan = ResamplingPlan {
            iterations: 8,
            folds: 4,
            majority_sample: None,
            seed: 11,
        };
        let r = rank_features(&table, &y, &plan).unwrap();
        assert_eq!(r.features[0], "inf_1");
        assert!(r.histories.iter().all(|h| h.len() == 32));
        assert!(r.mean_f1.iter().all(|v| (0.0..=1.0).contains(v)));
        assert_eq!(r, rank_features(&table, &y, &plan).unwrap());
    }

    #[test]
    fn single_class_fails() {
        let (table, _) = simulate_classification(10, 1, 1, 1.0, 0).unwrap();
        let plan = ResamplingPlan {
            iterations: 1,
            folds: 2,
            majority_sample: None,
            seed: 0,
        };
        assert!(matches!(rank_features(&table, &[0; 10], &plan), Err(Error::SingleClass)));
    }
}

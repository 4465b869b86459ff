use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use super::plan::ResamplingPlan;
use crate::error::{Error, Result};
use crate::io::FeatureTable;
use crate::learners::{boost_fit, classification_metrics, BoostParams, FeatureMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldMetrics {
    pub iteration: usize,
    pub fold: usize,
    pub auc: f64,
    pub accuracy: f64,
    pub ppv: f64,
    pub fpr: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSummary {
    pub mean: f64,
    /// Sample standard deviation.
    pub std: f64,
}

impl MetricSummary {
    fn of(v: &[f64]) -> Self {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let std = if v.len() > 1 {
            (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, std }
    }
}

/// One entry per (iteration, fold), iteration-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricDistribution {
    pub records: Vec<FoldMetrics>,
}

impl MetricDistribution {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn auc(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.auc).collect()
    }

    pub fn accuracy(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.accuracy).collect()
    }

    pub fn ppv(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.ppv).collect()
    }

    pub fn fpr(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.fpr).collect()
    }

    pub fn f1(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.f1).collect()
    }

    /// `(name, summary)` for auc, accuracy, ppv, fpr and f1.
    pub fn summaries(&self) -> Vec<(&'static str, MetricSummary)> {
        vec![
            ("auc", MetricSummary::of(&self.auc())),
            ("accuracy", MetricSummary::of(&self.accuracy())),
            ("ppv", MetricSummary::of(&self.ppv())),
            ("fpr", MetricSummary::of(&self.fpr())),
            ("f1", MetricSummary::of(&self.f1())),
        ]
    }

    /// `iteration,fold,auc,accuracy,ppv,fpr`, both indices starting at 1.
    pub fn write_csv_to<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let err = |e: csv::Error| Error::Format(e.to_string());
        out.write_record(["iteration", "fold", "auc", "accuracy", "ppv", "fpr"]).map_err(err)?;
        for r in &self.records {
            out.write_record([
                (r.iteration + 1).to_string(),
                (r.fold + 1).to_string(),
                r.auc.to_string(),
                r.accuracy.to_string(),
                r.ppv.to_string(),
                r.fpr.to_string(),
            ])
            .map_err(err)?;
        }
        out.flush().map_err(|e| Error::io("metrics.csv", e))
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv_to(std::io::BufWriter::new(f))
    }
}

/// Balanced subsample per iteration as in
/// [`rank_features`](super::rank_features), then per fold a boosted
/// ensemble on the selected features scored on the held-out rows.
pub fn evaluate_model(
    table: &FeatureTable,
    labels: &[u8],
    selected: &[String],
    plan: &ResamplingPlan,
    params: BoostParams,
) -> Result<MetricDistribution> {
    if selected.is_empty() {
        return Err(Error::InvalidParameter("no selected features to evaluate".into()));
    }
    if labels.len() != table.n_rows() {
        return Err(Error::InvalidParameter(format!("{} labels for {} rows", labels.len(), table.n_rows())));
    }
    let (minority, m) = plan.resolve(labels)?;
    let columns: Vec<Vec<f64>> = selected.iter().map(|n| table.feature_complete(n)).collect::<Result<_>>()?;
    let x = FeatureMatrix::from_columns(columns)?;
    let per_iteration: Vec<Vec<FoldMetrics>> = (0..plan.iterations)
        .into_par_iter()
        .map(|it| {
            let sample = plan.sample_resolved(labels, minority, m, it);
            (0..plan.folds)
                .map(|f| {
                    let (train, test) = sample.split(f);
                    let y_train: Vec<u8> = train.iter().map(|&r| labels[r]).collect();
                    let y_test: Vec<u8> = test.iter().map(|&r| labels[r]).collect();
                    let model = boost_fit(&x.select_rows(&train), &y_train, params)?;
                    let c = classification_metrics(&y_test, &model.predict_proba(&x.select_rows(&test)))?;
                    Ok(FoldMetrics {
                        iteration: it,
                        fold: f,
                        auc: c.auc,
                        accuracy: c.accuracy,
                        ppv: c.ppv,
                        fpr: c.fpr,
                        f1: c.f1,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(MetricDistribution {
        records: per_iteration.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::simulate_classification;

    #[test]
    fn lengths_summaries_and_csv() {
        let (table, y) = simulate_classification(30, 2, 1, 2.0, 1).unwrap();
        let plan = ResamplingPlan {
            iterations: 3,
            folds: 3,
            majority_sample: None,
            seed: 5,
        };
        let sel = vec!["inf_1".to_string(), "inf_2".to_string()];
        let params = BoostParams {
            n_trees: 10,
            ..Default::default()
        };
        let d = evaluate_model(&table, &y, &sel, &plan, params).unwrap();
        assert_eq!(d.len(), 9);
        let aucs = d.auc();
        let s = d.summaries()[0].1;
        let mean = aucs.iter().sum::<f64>() / 9.0;
        assert!((s.mean - mean).abs() < 1e-12);
        let mut buf = Vec::new();
        d.write_csv_to(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 10);
        assert!(text.starts_with("iteration,fold,auc,accuracy,ppv,fpr\n1,1,"));
        assert_eq!(d, evaluate_model(&table, &y, &sel, &plan, params).unwrap());
        assert!(evaluate_model(&table, &y, &[], &plan, params).is_err());
    }
}

//! Cross-validated choice of the copula parameter and per-feature screening
//! under dependent censoring.

use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::concordance::harrell_c;
use super::copula::tau_of_alpha;
use super::dependent::{dependent_cox_with, DependentCoxEstimate, DependentCoxOptions};
use super::record::SurvivalRecord;
use crate::error::{Error, Result};
use crate::io::FeatureTable;

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSelection {
    pub grid: Vec<f64>,
    pub cv_cindex: Vec<f64>,
    pub alpha: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignificantFeature {
    pub name: String,
    pub coefficient: f64,
    pub p_value: f64,
}

/// Fold index per record, stratified on the event indicator.
pub fn event_stratified_folds(records: &[SurvivalRecord], folds: usize, seed: u64) -> Vec<usize> {
    let mut assignment = vec![0; records.len()];
    let mut rng = crate::rng::stream(seed, 0);
    let mut next = 0;
    for event in [true, false] {
        let mut idx: Vec<usize> = (0..records.len()).filter(|&i| records[i].event == event).collect();
        idx.shuffle(&mut rng);
        for i in idx {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    assignment
}

/// For each `alpha` in `grid`: fit [`dependent_cox`](super::dependent_cox)
/// per candidate on each training split, score held-out patients with
/// `sum_j beta_j(alpha) x_j`, pool the held-out scores and compute Harrell's
/// c. The largest pooled c wins; ties go to the smallest `alpha`.
///
/// Features are used as given, so scale them first.
pub fn select_alpha(
    records: &[SurvivalRecord],
    table: &FeatureTable,
    candidates: &[String],
    grid: &[f64],
    folds: usize,
    seed: u64,
) -> Result<AlphaSelection> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty alpha grid".into()));
    }
    if candidates.is_empty() {
        return Err(Error::InvalidParameter("no candidate features".into()));
    }
    if folds < 2 || folds > records.len() {
        return Err(Error::InvalidParameter(format!("cannot split {} records into {folds} folds", records.len())));
    }
    if table.n_rows() != records.len() {
        return Err(Error::InvalidParameter("table and records differ in length".into()));
    }
    let columns: Vec<Vec<f64>> = candidates.iter().map(|c| table.feature_complete(c)).collect::<Result<_>>()?;
    let fold_of = event_stratified_folds(records, folds, seed);
    for f in 0..folds {
        if !records.iter().zip(&fold_of).any(|(r, &k)| k != f && r.event) {
            return Err(Error::NoEvents);
        }
    }

    // beta[(fold * p + feature)][alpha index]
    let p = candidates.len();
    let tasks: Vec<(usize, usize)> = (0..folds).flat_map(|f| (0..p).map(move |j| (f, j))).collect();
    let betas: Vec<Vec<f64>> = tasks
        .par_iter()
        .map(|&(f, j)| {
            let train: Vec<usize> = (0..records.len()).filter(|&i| fold_of[i] != f).collect();
            let recs: Vec<SurvivalRecord> = train.iter().map(|&i| records[i].clone()).collect();
            let x: Vec<f64> = train.iter().map(|&i| columns[j][i]).collect();
            alpha_path(&recs, &x, grid)
        })
        .collect::<Result<_>>()?;

    let cv_cindex = (0..grid.len())
        .map(|a| {
            let risk: Vec<f64> = (0..records.len())
                .map(|i| (0..p).map(|j| betas[fold_of[i] * p + j][a] * columns[j][i]).sum())
                .collect();
            harrell_c(&risk, records)
        })
        .collect::<Result<Vec<f64>>>()?;

    let mut best = 0;
    for k in 1..grid.len() {
        let (c, cb) = (cv_cindex[k], cv_cindex[best]);
        if c > cb || (c == cb && grid[k] < grid[best]) {
            best = k;
        }
    }
    let alpha = grid[best];
    Ok(AlphaSelection {
        grid: grid.to_vec(),
        cv_cindex,
        alpha,
        tau: tau_of_alpha(alpha)?,
    })
}

/// Coefficients along `grid`, each fit warm-started from the previous one.
fn alpha_path(records: &[SurvivalRecord], x: &[f64], grid: &[f64]) -> Result<Vec<f64>> {
    let mut prev: Option<DependentCoxEstimate> = None;
    let mut out = Vec::with_capacity(grid.len());
    for &alpha in grid {
        let opts = DependentCoxOptions {
            multi_start: prev.is_none(),
            standard_errors: false,
            ..Default::default()
        };
        let est = dependent_cox_with(records, x, alpha, &opts, prev.as_ref())?;
        out.push(est.beta);
        prev = Some(est);
    }
    Ok(out)
}

/// Features whose dependent-Cox Wald p-value at `alpha` is below
/// `p_threshold`, ascending by p. Constant columns are skipped.
pub fn select_features_dependent(
    records: &[SurvivalRecord],
    table: &FeatureTable,
    alpha: f64,
    p_threshold: f64,
) -> Result<Vec<SignificantFeature>> {
    let names: Vec<&str> = table.feature_names().collect();
    let fits: Vec<Option<SignificantFeature>> = names
        .par_iter()
        .map(|&name| {
            let x = table.feature_complete(name)?;
            match super::dependent::dependent_cox(records, &x, alpha) {
                Ok(est) => Ok(Some(SignificantFeature {
                    name: name.to_string(),
                    coefficient: est.beta,
                    p_value: est.wald_p,
                })),
                Err(Error::Degenerate(msg)) if msg.contains("constant") => {
                    log::warn!("skipping constant feature {name}");
                    Ok(None)
                }
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<SignificantFeature> = fits.into_iter().flatten().filter(|f| f.p_value < p_threshold).collect();
    out.sort_by(|a, b| a.p_value.total_cmp(&b.p_value).then_with(|| a.name.cmp(&b.name)));
    Ok(out)
}

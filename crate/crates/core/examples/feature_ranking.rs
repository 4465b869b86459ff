//! Resampling-based univariate ranking: each feature gets a one-feature tree
//! on every fold of every balanced iteration, and its mean F1 decides
//! whether it passes the threshold. Survivors are then tested group-wise.
//!
//! cargo run --release --example feature_ranking

use cgrep::resampling::{rank_features, significance_tests, threshold_select, ResamplingPlan, ThresholdRule};
use cgrep::synth::simulate_classification;

fn main() -> cgrep::Result<()> {
    let (table, labels) = simulate_classification(90, 3, 12, 1.5, 5)?;
    let plan = ResamplingPlan {
        iterations: 100,
        folds: 5,
        majority_sample: None,
        seed: 5,
    };
    let report = rank_features(&table, &labels, &plan)?;
    for (name, f1) in report.features.iter().zip(&report.mean_f1).take(6) {
        println!("{name:<10} mean F1 {f1:.3}");
    }
    let chosen = threshold_select(&report, 0.6, ThresholdRule::Inclusive);
    println!("selected at 0.6: {chosen:?}");
    for t in significance_tests(&table, &labels, &chosen)? {
        println!("{:<10} {:<8} p = {:.3e}", t.name, t.test.name(), t.p_value);
    }
    Ok(())
}

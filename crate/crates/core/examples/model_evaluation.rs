//! Boosted-tree evaluation over repeated balanced cross-validation, once on
//! informative features and once on pure noise.
//!
//! cargo run --release --example model_evaluation

use cgrep::learners::BoostParams;
use cgrep::resampling::{evaluate_model, ResamplingPlan};
use cgrep::synth::simulate_classification;

fn main() -> cgrep::Result<()> {
    let (table, labels) = simulate_classification(120, 3, 3, 1.5, 9)?;
    let plan = ResamplingPlan {
        iterations: 20,
        folds: 5,
        majority_sample: None,
        seed: 9,
    };
    for (what, features) in [("informative", ["inf_1", "inf_2", "inf_3"]), ("noise", ["noise_1", "noise_2", "noise_3"])] {
        let names: Vec<String> = features.iter().map(|s| s.to_string()).collect();
        let dist = evaluate_model(&table, &labels, &names, &plan, BoostParams::default())?;
        println!("{what} ({} folds scored)", dist.len());
        for (metric, s) in dist.summaries() {
            println!("  {metric:<8} {:.3} +/- {:.3}", s.mean, s.std);
        }
    }
    Ok(())
}

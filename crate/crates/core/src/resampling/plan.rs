use rand::seq::{index, SliceRandom};

use crate::error::{Error, Result};
use crate::io::StudyConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct ResamplingPlan {
    pub iterations: usize,
    pub folds: usize,
    /// Majority rows drawn per iteration; `None` matches the minority count.
    pub majority_sample: Option<usize>,
    pub seed: u64,
}

impl From<&StudyConfig> for ResamplingPlan {
    fn from(c: &StudyConfig) -> Self {
        Self {
            iterations: c.iterations,
            folds: c.folds,
            majority_sample: c.majority_sample,
            seed: c.seed,
        }
    }
}

/// Rows drawn for one iteration and the test fold of each.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationSample {
    /// Indices into the full table, minority rows first in ascending order,
    /// then the sampled majority rows in ascending order.
    pub rows: Vec<usize>,
    /// Test fold of `rows[k]`.
    pub fold: Vec<usize>,
}

impl IterationSample {
    /// `(train, test)` row indices for one fold.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (&r, &f) in self.rows.iter().zip(&self.fold) {
            if f == fold {
                test.push(r);
            } else {
                train.push(r);
            }
        }
        (train, test)
    }
}

impl ResamplingPlan {
    /// Minority label and the number of majority rows drawn per iteration.
    pub(crate) fn resolve(&self, labels: &[u8]) -> Result<(u8, usize)> {
        if self.iterations == 0 {
            return Err(Error::InvalidParameter("iterations must be >= 1".into()));
        }
        if self.folds < 2 {
            return Err(Error::InvalidParameter("folds must be >= 2".into()));
        }
        if let Some(v) = labels.iter().find(|&&v| v > 1) {
            return Err(Error::Domain(format!("label {v} is not 0 or 1")));
        }
        let ones = labels.iter().filter(|&&v| v == 1).count();
        let zeros = labels.len() - ones;
        if ones == 0 || zeros == 0 {
            return Err(Error::SingleClass);
        }
        let (minority, n_min, n_maj) = if ones <= zeros { (1, ones, zeros) } else { (0, zeros, ones) };
        let m = self.majority_sample.unwrap_or(n_min);
        if m > n_maj {
            return Err(Error::InvalidParameter(format!("majority sample {m} exceeds the {n_maj} majority rows")));
        }
        if m < self.folds || n_min < self.folds {
            return Err(Error::InvalidParameter(format!(
                "each class needs at least {} rows per iteration (minority {n_min}, majority sample {m})",
                self.folds
            )));
        }
        Ok((minority, m))
    }

    /// All minority rows plus `m` majority rows drawn without replacement,
    /// split into class-stratified folds. Draws from the iteration's own
    /// stream.
    pub fn sample(&self, labels: &[u8], iteration: usize) -> Result<IterationSample> {
        let (minority, m) = self.resolve(labels)?;
        Ok(self.sample_resolved(labels, minority, m, iteration))
    }

    pub(crate) fn sample_resolved(&self, labels: &[u8], minority: u8, m: usize, iteration: usize) -> IterationSample {
        let mut rng = crate::rng::stream(self.seed, iteration as u64);
        let min_rows: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == minority).collect();
        let maj_all: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] != minority).collect();
        let mut maj_rows: Vec<usize> = index::sample(&mut rng, maj_all.len(), m).into_iter().map(|k| maj_all[k]).collect();
        maj_rows.sort_unstable();

        let rows: Vec<usize> = min_rows.iter().chain(&maj_rows).copied().collect();
        let mut fold = vec![0; rows.len()];
        let mut next = 0;
        for (start, len) in [(0, min_rows.len()), (min_rows.len(), maj_rows.len())] {
            let mut slots: Vec<usize> = (start..start + len).collect();
            slots.shuffle(&mut rng);
            for k in slots {
                fold[k] = next % self.folds;
                next += 1;
            }
        }
        IterationSample { rows, fold }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn folds_partition_a_balanced_sample(
            n_min in 5usize..20, extra in 0usize..40, folds in 2usize..5, seed in 0u64..1000, it in 0usize..50
        ) {
            let n_maj = n_min + extra;
            let labels: Vec<u8> = (0..n_min + n_maj).map(|i| u8::from(i % 3 == 0 && i / 3 < n_min)).collect();
            let ones = labels.iter().filter(|&&v| v == 1).count();
            prop_assume!(ones >= folds && labels.len() - ones >= ones);
            let plan = ResamplingPlan { iterations: 1, folds, majority_sample: None, seed };
            let s = plan.sample(&labels, it).unwrap();
            prop_assert_eq!(s.rows.iter().filter(|&&r| labels[r] == 1).count(), ones);
            prop_assert_eq!(s.rows.len(), 2 * ones);
            let mut seen = s.rows.clone();
            seen.sort_unstable();
            seen.dedup();
            prop_assert_eq!(seen.len(), s.rows.len());
            let mut union = Vec::new();
            for f in 0..folds {
                let (train, test) = plan.sample(&labels, it).unwrap().split(f);
                prop_assert_eq!(train.len() + test.len(), s.rows.len());
                prop_assert!(test.iter().any(|&r| labels[r] == 1));
                union.extend(test);
            }
            union.sort_unstable();
            prop_assert_eq!(union, seen);
        }
    }

    #[test]
    fn rejects_oversized_majority_sample() {
        let labels = [0, 0, 0, 1, 1, 1, 1, 1];
        let plan = ResamplingPlan {
            iterations: 1,
            folds: 2,
            majority_sample: Some(6),
            seed: 0,
        };
        assert!(matches!(plan.sample(&labels, 0), Err(Error::InvalidParameter(_))));
        assert!(matches!(plan.sample(&[1, 1, 1], 0), Err(Error::SingleClass)));
    }
}

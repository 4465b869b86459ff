//! Two-class tables with a known set of informative features.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::io::FeatureTable;

/// Labels alternate 0, 1, 0, ... so classes are balanced. Informative
/// features `inf_k` are `label * separation + N(0, 1)`, noise features
/// `noise_k` are `N(0, 1)`. The labels are also stored as `rep_label`.
pub fn simulate_classification(
    n: usize,
    n_informative: usize,
    n_noise: usize,
    separation: f64,
    seed: u64,
) -> Result<(FeatureTable, Vec<u8>)> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("n must be >= 4, got {n}")));
    }
    let labels: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
    let p = n_informative + n_noise;
    let mut cols = vec![Vec::with_capacity(n); p];
    for (i, &l) in labels.iter().enumerate() {
        let mut rng = crate::rng::stream(seed, i as u64);
        for (j, c) in cols.iter_mut().enumerate() {
            let z: f64 = StandardNormal.sample(&mut rng);
            c.push(if j < n_informative { f64::from(l) * separation + z } else { z });
        }
    }
    let width = n.to_string().len().max(4);
    let mut table = FeatureTable::new((1..=n).map(|i| format!("C{i:0width$}")).collect())?;
    for (j, c) in cols.iter().enumerate() {
        let name = if j < n_informative {
            format!("inf_{}", j + 1)
        } else {
            format!("noise_{}", j - n_informative + 1)
        };
        table.add_dense(name, c)?;
    }
    table.set_rep_label(labels.iter().map(|&l| Some(l)).collect())?;
    Ok((table, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_determinism() {
        let (t, y) = simulate_classification(10, 2, 3, 3.0, 5).unwrap();
        assert_eq!(t.n_rows(), 10);
        assert_eq!(t.feature_names().collect::<Vec<_>>(), ["inf_1", "inf_2", "noise_1", "noise_2", "noise_3"]);
        assert_eq!(y.iter().filter(|&&v| v == 1).count(), 5);
        assert_eq!(t, simulate_classification(10, 2, 3, 3.0, 5).unwrap().0);
        assert_eq!(t.labels("rep_label").unwrap(), y);
        assert!(simulate_classification(3, 1, 0, 1.0, 0).is_err());
    }
}

use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::grouping::{Group, PrognosticGrouping};
use crate::error::{Error, Result};
use crate::survival::{cg_curve, StepSurvivalCurve, SurvivalRecord};

/// Average vertical distance `(1/T) int_0^T |S1 - S2| dt`, with `T` the
/// smaller of the two curves' largest observed times, integrated exactly
/// over the step partition.
pub fn curve_distance(c1: &StepSurvivalCurve, c2: &StepSurvivalCurve) -> Result<f64> {
    let t_max = c1.max_time().min(c2.max_time());
    if !(t_max > 0.0) {
        return Err(Error::Domain("survival curves have no overlapping time span".into()));
    }
    let mut cuts: Vec<f64> = c1
        .points()
        .iter()
        .chain(c2.points())
        .map(|p| p.time)
        .filter(|&t| t < t_max)
        .collect();
    cuts.push(0.0);
    cuts.push(t_max);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let area: f64 = cuts
        .windows(2)
        .map(|w| (c1.value_at(w[0]) - c2.value_at(w[0])).abs() * (w[1] - w[0]))
        .sum();
    Ok((area / t_max).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PermutationTest {
    pub d_obs: f64,
    pub p_value: f64,
    /// Distance under each label permutation, in replicate order.
    pub null: Vec<f64>,
}

fn grouped_distance(records: &[SurvivalRecord], groups: &[Group], alpha: f64) -> Result<f64> {
    let pick = |g: Group| -> Vec<SurvivalRecord> {
        records
            .iter()
            .zip(groups)
            .filter(|(_, &k)| k == g)
            .map(|(r, _)| r.clone())
            .collect()
    };
    let good = cg_curve(&pick(Group::Good), alpha)?;
    let bad = cg_curve(&pick(Group::Bad), alpha)?;
    curve_distance(&good, &bad)
}

/// `p = (1 + #{D_b >= D_obs}) / (B + 1)` over `B` size-preserving shuffles of
/// the group labels, each drawn from its own stream under `seed`. `D` is
/// the [`curve_distance`] between the groups' copula-graphic curves.
pub fn permutation_pvalue(
    records: &[SurvivalRecord],
    grouping: &PrognosticGrouping,
    alpha: f64,
    permutations: usize,
    seed: u64,
) -> Result<PermutationTest> {
    if permutations < 1 {
        return Err(Error::InvalidParameter("need at least one permutation".into()));
    }
    if grouping.groups.len() != records.len() {
        return Err(Error::InvalidParameter("grouping and records differ in length".into()));
    }
    if grouping.members(Group::Good).is_empty() || grouping.members(Group::Bad).is_empty() {
        return Err(Error::Degenerate("a prognostic group is empty".into()));
    }
    let d_obs = grouped_distance(records, &grouping.groups, alpha)?;
    let null: Vec<f64> = (0..permutations)
        .into_par_iter()
        .map(|b| {
            let mut g = grouping.groups.clone();
            g.shuffle(&mut crate::rng::stream(seed, b as u64));
            grouped_distance(records, &g, alpha)
        })
        .collect::<Result<_>>()?;
    let exceed = null.iter().filter(|&&d| d >= d_obs - 1e-12).count();
    Ok(PermutationTest {
        d_obs,
        p_value: (1 + exceed) as f64 / (permutations + 1) as f64,
        null,
    })
}
